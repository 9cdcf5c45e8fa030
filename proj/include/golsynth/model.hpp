#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "golsynth/fol.hpp"

namespace golsynth {

// Extensions of situation-independent predicates; shared by every state.
struct RigidFacts {
  std::vector<char> rigid;                // per fluent id
  std::vector<std::vector<Tuple>> ext;    // per fluent id, sorted
};

// Finite interpretation of the fluents at one situation. Value type; the
// rigid part is shared and never copied.
class WorldState : public Interpretation {
 public:
  WorldState() = default;
  WorldState(std::shared_ptr<const RigidFacts> rigid);

  const std::vector<Tuple>& extension(int fluent) const;
  // Replaces a situation-dependent extension; the tuples are sorted and deduplicated.
  void set_extension(int fluent, std::vector<Tuple> tuples);
  bool is_rigid(int fluent) const { return rigid_->rigid.at(fluent) != 0; }
  std::size_t fluent_count() const { return own_.size(); }
  const std::shared_ptr<const RigidFacts>& rigid_facts() const { return rigid_; }

  bool holds(int fluent, const Tuple& args) const override;
  bool for_each(int fluent, const std::function<bool(const Tuple&)>& visit) const override;
  void active_domain(std::vector<Object>& out) const override;

  // Applies f to every object in the situation-dependent extensions.
  WorldState renamed(const std::function<Object(Object)>& f) const;

  std::size_t hash() const;
  friend bool operator==(const WorldState& a, const WorldState& b) { return a.own_ == b.own_; }
  friend bool operator<(const WorldState& a, const WorldState& b) { return a.own_ < b.own_; }

 private:
  std::shared_ptr<const RigidFacts> rigid_;
  std::vector<std::vector<Tuple>> own_;
};

// Situation-dependent atoms as "(f a b) (g c)", in fluent then tuple order.
std::string world_text(const WorldState& w, const Signature& sig);

// Sorted, deduplicated active domain.
std::vector<Object> active_domain(const WorldState& w);

struct PossAxiom {
  std::vector<int> params;
  Formula body;
};

struct ActionPattern {
  int action = -1;
  std::vector<Term> args;
};

// Applies to compound actions containing (after idle stripping) distinct
// members matching every pattern element.
struct CompoundPossAxiom {
  std::vector<ActionPattern> pattern;
  Formula body;
};

// F(params) holds after A iff pos, or F held and not neg.
struct SuccessorStateAxiom {
  std::vector<int> params;
  Formula pos;
  Formula neg;
};

class BasicActionTheory {
 public:
  BasicActionTheory(Theory theory, std::shared_ptr<Signature> sig);

  Theory theory() const { return theory_; }
  const Signature& signature() const { return *sig_; }
  const std::shared_ptr<Signature>& signature_ptr() const { return sig_; }

  void set_poss(int action, PossAxiom axiom);
  void add_compound_poss(CompoundPossAxiom axiom);
  void set_ssa(int fluent, SuccessorStateAxiom axiom);
  void set_initial(WorldState w) { initial_ = std::move(w); }

  const std::optional<PossAxiom>& poss_axiom(int action) const;
  const std::vector<CompoundPossAxiom>& compound_poss_axioms() const { return compound_; }
  const std::optional<SuccessorStateAxiom>& ssa(int fluent) const;
  const WorldState& initial() const { return initial_; }

  // Actions declared without a precondition axiom are always possible.
  bool poss_simple(const GroundAction& a, const WorldState& w) const;
  // Conjunction of the members' simple preconditions and, when some compound
  // axiom matches the idle-stripped action, the first matching axiom.
  bool poss_compound(const CompoundAction& a, const WorldState& w) const;
  // The compound-axiom part only, for actions whose members are known possible.
  bool poss_joint(const CompoundAction& a, const WorldState& w) const;
  // Caller guarantees poss_compound(a, w).
  WorldState progress(const CompoundAction& a, const WorldState& w) const;

  void check_action(const GroundAction& a) const;

 private:
  // Conjunction over all ways of matching the pattern; nullopt if it does not match.
  std::optional<bool> eval_compound_axiom(const CompoundPossAxiom& ax, const CompoundAction& stripped,
                                          const CompoundAction& full, const WorldState& w) const;

  Theory theory_;
  std::shared_ptr<Signature> sig_;
  std::vector<std::optional<PossAxiom>> poss_;
  std::vector<CompoundPossAxiom> compound_;
  std::vector<std::optional<SuccessorStateAxiom>> ssa_;
  WorldState initial_;
};

}  // namespace golsynth
