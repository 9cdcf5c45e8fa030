#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "golsynth/model.hpp"

namespace golsynth {

enum class ProgKind : std::uint8_t { action, test, seq, choice, pick, star, conc, sync };

struct ActionTerm {
  int action = -1;
  std::vector<Term> args;
};

struct ProgNode {
  ProgKind kind = ProgKind::test;
  std::vector<ActionTerm> acts;  // action: members of the compound action
  Formula test;                  // test
  int a = -1, b = -1;            // children
  int var = -1;                  // pick variable
  std::vector<int> free_vars;    // sorted
  std::string text;
};

// Hash-consed program terms. Structurally equal programs share one id.
class ProgramPool {
 public:
  explicit ProgramPool(std::shared_ptr<Signature> sig);

  int action(std::vector<ActionTerm> acts);
  int test(Formula f);
  int nil();  // True?
  int seq(int a, int b);
  int choice(int a, int b);
  int pick(int var, int body);
  int star(int body);
  int conc(int a, int b);
  int sync(int a, int b);

  const ProgNode& node(int id) const { return nodes_.at(id); }
  const std::string& text(int id) const { return nodes_.at(id).text; }
  std::size_t size() const { return nodes_.size(); }
  const Signature& signature() const { return *sig_; }

 private:
  int intern(ProgNode n, std::string key);

  std::shared_ptr<Signature> sig_;
  std::deque<ProgNode> nodes_;  // stable references across interning
  std::unordered_map<std::string, int> index_;
};

// Pick-variable assignment, sorted by variable, holding only variables that
// are free in the counter.
using Env = std::vector<std::pair<int, Object>>;

Object env_get(const Env& env, int var);
void env_set(Env& env, int var, Object o);
Env env_restrict(const Env& env, const std::vector<int>& vars);
std::string env_text(const Env& env, const Signature& sig);

struct Configuration {
  int counter = -1;
  Env env;
  WorldState world;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct Step {
  CompoundAction action;
  Configuration next;
};

struct TransContext {
  const BasicActionTheory& theory;
  // Interpretation for test conditions; the configuration's world if null.
  const Interpretation* tests = nullptr;
  // Anonymous objects already present elsewhere (other configurations);
  // fresh picks avoid them.
  std::vector<Object> known_anon;
  int anon_pool = 1;
  bool check_poss = true;
  // Ground leaf actions failing the filter are pruned before Poss.
  std::function<bool(const CompoundAction&)> filter;

  explicit TransContext(const BasicActionTheory& t) : theory(t) {}
};

bool final(const ProgramPool& pool, const Configuration& c, const TransContext& ctx);
std::vector<Step> trans(ProgramPool& pool, const Configuration& c, const TransContext& ctx);

// Candidate values of a pick variable in the given configuration.
std::vector<Object> pick_candidates(const Signature& sig, int var, const Env& env, const WorldState& world,
                                    const TransContext& ctx);

// Smallest set closed under the closure rules; contains every counter
// reachable from root by trans.
std::set<int> syntactic_closure(ProgramPool& pool, int root);
// Upper bound on the closure size computed from the syntax tree.
std::size_t closure_bound(const ProgramPool& pool, int root);

// Worlds reachable by complete executions of program from c.world.
std::vector<WorldState> do_reachable(ProgramPool& pool, const Configuration& c, const TransContext& ctx,
                                     std::size_t max_configs = 100000);

// Binding of env for formula evaluation; throws UnresolvedPickVariable if a
// free variable of vars is unassigned.
Binding env_binding(const Env& env, const Signature& sig, const std::vector<int>& required);

std::size_t config_hash(const Configuration& c);

}  // namespace golsynth
