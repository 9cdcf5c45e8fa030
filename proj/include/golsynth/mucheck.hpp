#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "golsynth/quotient.hpp"

namespace golsynth {

// Closed mu-calculus formulas with first-order leaves over the labelling.
class MuFormula {
 public:
  enum class Kind : std::uint8_t { fo, negation, conj, disj, diamond, box, var, mu, nu };

  static MuFormula fo(Formula sentence);
  static MuFormula truth();
  static MuFormula negate(MuFormula f);
  static MuFormula conj(MuFormula a, MuFormula b);
  static MuFormula disj(MuFormula a, MuFormula b);
  static MuFormula diamond(MuFormula f);
  static MuFormula box(MuFormula f);
  static MuFormula var(std::string name);
  // Throw NonMonotone if name occurs under an odd number of negations in body.
  static MuFormula mu(std::string name, MuFormula body);
  static MuFormula nu(std::string name, MuFormula body);

  Kind kind() const { return node_->kind; }
  const Formula& sentence() const { return node_->sentence; }
  const std::string& name() const { return node_->name; }
  const std::vector<MuFormula>& kids() const { return node_->kids; }
  const void* id() const { return node_.get(); }

 private:
  struct Node {
    Kind kind = Kind::fo;
    Formula sentence;
    std::string name;
    std::vector<MuFormula> kids;
  };
  explicit MuFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static MuFormula make(Node n);

  std::shared_ptr<const Node> node_;
};

std::string to_string(const MuFormula& f, const Signature& sig);

// Throws NonMonotone if some fixpoint variable occurs under an odd number of
// negations inside its binder (box counts as two negations).
void check_monotone(const MuFormula& f);

using StateSet = std::vector<char>;  // membership flag per state

// Finite transition system with a first-order oracle for the leaves.
struct MuModel {
  std::vector<std::vector<int>> succ;
  std::function<bool(int state, const Formula& sentence)> holds;

  std::size_t size() const { return succ.size(); }
};

// Model over a materialized arena, evaluating sentences on each state's labelling.
MuModel model_of(const Arena& arena, const FiniteArena& fa);

StateSet pre_e(const MuModel& m, const StateSet& z);
StateSet pre_a(const MuModel& m, const StateSet& z);
StateSet pre_e(const std::vector<std::vector<int>>& succ, const StateSet& z);
StateSet pre_a(const std::vector<std::vector<int>>& succ, const StateSet& z);

using SOAssignment = std::map<std::string, StateSet>;

// Kleene iteration; throws UnboundSOVariable for a free variable missing from v.
StateSet eval_mu(const MuFormula& f, const MuModel& m, const SOAssignment& v = {});

// nu X. mu Y. ((ok and [-]X) or (turnS and <->Y)), ok = (finalT -> finalS) and
// turnT, strengthened with obsEq in strict mode.
MuFormula phi_sim(const LabellingFluents& labels, bool strict_obs);

struct AnnotatedWinningSet {
  StateSet win;
  std::vector<int> ann;  // -1 outside win; goal states 0; S-states >= 1
  int outer_rounds = 0;

  bool contains(int q) const { return q >= 0 && q < static_cast<int>(win.size()) && win[q]; }
};

// Goal states: turnT and (finalT -> finalS), and obsEq in strict mode.
StateSet goal_states(const FiniteArena& fa, bool strict_obs);

// One outer round from X: the inner least fixpoint Y with entry annotations.
AnnotatedWinningSet win_round(const FiniteArena& fa, const StateSet& x, bool strict_obs, std::string* dump = nullptr,
                              int round = 0);

// Nested fixpoint with annotations from the final outer round. When dump is
// set, every X_i and Y_ij is appended as a sorted state list.
AnnotatedWinningSet compute_win(const FiniteArena& fa, bool strict_obs, std::string* dump = nullptr);

// Graph-search check: every turnT member is a goal and each of its
// successors reaches a turnT member through S-states inside win. Returns an
// empty string when sound, otherwise a description of the violation.
std::string check_soundness(const FiniteArena& fa, const StateSet& win, bool strict_obs);

// Memoryless System strategy on the materialized arena.
struct Strategy {
  std::vector<int> choice;  // chosen successor for S-states in win, else -1
};

// Throws NotRealizable if the initial state is not winning.
Strategy extract_strategy(const AnnotatedWinningSet& w, const FiniteArena& fa);

}  // namespace golsynth
