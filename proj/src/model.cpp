#include "golsynth/model.hpp"

#include <algorithm>

namespace golsynth {

namespace {
const std::vector<Tuple> kEmpty;
}

WorldState::WorldState(std::shared_ptr<const RigidFacts> rigid)
    : rigid_(std::move(rigid)), own_(rigid_->rigid.size()) {}

const std::vector<Tuple>& WorldState::extension(int fluent) const {
  if (is_rigid(fluent)) return fluent < static_cast<int>(rigid_->ext.size()) ? rigid_->ext[fluent] : kEmpty;
  return own_.at(fluent);
}

void WorldState::set_extension(int fluent, std::vector<Tuple> tuples) {
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  own_.at(fluent) = std::move(tuples);
}

bool WorldState::holds(int fluent, const Tuple& args) const {
  const auto& ext = extension(fluent);
  return std::binary_search(ext.begin(), ext.end(), args);
}

bool WorldState::for_each(int fluent, const std::function<bool(const Tuple&)>& visit) const {
  for (const auto& t : extension(fluent))
    if (!visit(t)) return false;
  return true;
}

void WorldState::active_domain(std::vector<Object>& out) const {
  for (const auto& ext : own_)
    for (const auto& t : ext) out.insert(out.end(), t.begin(), t.end());
}

WorldState WorldState::renamed(const std::function<Object(Object)>& f) const {
  WorldState out(*this);
  for (std::size_t i = 0; i < own_.size(); ++i) {
    if (own_[i].empty()) continue;
    std::vector<Tuple> ts = own_[i];
    for (auto& t : ts)
      for (auto& o : t) o = f(o);
    out.set_extension(static_cast<int>(i), std::move(ts));
  }
  return out;
}

std::size_t WorldState::hash() const {
  std::size_t h = own_.size();
  TupleHash th;
  for (std::size_t i = 0; i < own_.size(); ++i)
    for (const auto& t : own_[i]) h = h * 1099511628211ull ^ (th(t) + i);
  return h;
}

std::string world_text(const WorldState& w, const Signature& sig) {
  std::string out;
  for (std::size_t f = 0; f < w.fluent_count(); ++f) {
    if (w.is_rigid(static_cast<int>(f))) continue;
    for (const auto& t : w.extension(static_cast<int>(f))) {
      if (!out.empty()) out += ' ';
      out += "(" + sig.fluent(static_cast<int>(f)).name;
      for (auto o : t) out += " " + to_string(o);
      out += ")";
    }
  }
  return out;
}

std::vector<Object> active_domain(const WorldState& w) {
  std::vector<Object> out;
  w.active_domain(out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BasicActionTheory::BasicActionTheory(Theory theory, std::shared_ptr<Signature> sig)
    : theory_(theory), sig_(std::move(sig)) {}

void BasicActionTheory::set_poss(int action, PossAxiom axiom) {
  if (poss_.size() <= static_cast<std::size_t>(action)) poss_.resize(action + 1);
  poss_[action] = std::move(axiom);
}

void BasicActionTheory::add_compound_poss(CompoundPossAxiom axiom) { compound_.push_back(std::move(axiom)); }

void BasicActionTheory::set_ssa(int fluent, SuccessorStateAxiom axiom) {
  if (ssa_.size() <= static_cast<std::size_t>(fluent)) ssa_.resize(fluent + 1);
  ssa_[fluent] = std::move(axiom);
}

const std::optional<PossAxiom>& BasicActionTheory::poss_axiom(int action) const {
  static const std::optional<PossAxiom> none;
  return static_cast<std::size_t>(action) < poss_.size() ? poss_[action] : none;
}

const std::optional<SuccessorStateAxiom>& BasicActionTheory::ssa(int fluent) const {
  static const std::optional<SuccessorStateAxiom> none;
  return static_cast<std::size_t>(fluent) < ssa_.size() ? ssa_[fluent] : none;
}

void BasicActionTheory::check_action(const GroundAction& a) const {
  if (a.action < 0 || static_cast<std::size_t>(a.action) >= sig_->action_count() ||
      sig_->action(a.action).theory != theory_)
    throw Error(ErrorKind::UndeclaredAction, "action #" + std::to_string(a.action) + " in " +
                                                 std::string(to_string(theory_)) + " theory");
  const auto& schema = sig_->action(a.action);
  if (schema.param_sorts.size() != a.args.size())
    throw Error(ErrorKind::ArityMismatch, schema.name + " expects " + std::to_string(schema.param_sorts.size()) +
                                              " arguments, got " + std::to_string(a.args.size()));
}

bool BasicActionTheory::poss_simple(const GroundAction& a, const WorldState& w) const {
  check_action(a);
  const auto& ax = poss_axiom(a.action);
  if (!ax) return true;
  Binding b(sig_->var_count(), kUnset);
  for (std::size_t i = 0; i < ax->params.size(); ++i) {
    int v = ax->params[i];
    // A repeated parameter name constrains the arguments to be equal.
    if (!b[v].is_unset() && b[v] != a.args[i]) return false;
    b[v] = a.args[i];
  }
  EvalContext ctx(*sig_, w);
  return eval(ax->body, ctx, b);
}

namespace {

bool unify_pattern(const std::vector<Term>& ts, const Tuple& os, Binding& b, std::vector<int>& trail) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Term& t = ts[i];
    if (t.kind == Term::Kind::constant) {
      if (t.value != os[i]) return false;
    } else if (t.kind == Term::Kind::var) {
      if (b[t.var].is_unset()) {
        b[t.var] = os[i];
        trail.push_back(t.var);
      } else if (b[t.var] != os[i]) {
        return false;
      }
    } else {
      if (eval_term(t, b) != os[i]) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<bool> BasicActionTheory::eval_compound_axiom(const CompoundPossAxiom& ax, const CompoundAction& stripped,
                                                           const CompoundAction& full, const WorldState& w) const {
  const auto& members = stripped.members();
  if (ax.pattern.size() > members.size()) return std::nullopt;
  for (const auto& pat : ax.pattern)
    if (std::none_of(members.begin(), members.end(), [&](const GroundAction& m) { return m.action == pat.action; }))
      return std::nullopt;
  Binding b(sig_->var_count(), kUnset);
  std::vector<char> used(members.size(), 0);
  EvalContext ctx(*sig_, w, &full);
  bool matched = false;
  bool value = true;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (!value) return;
    if (k == ax.pattern.size()) {
      matched = true;
      value = eval(ax.body, ctx, b);
      return;
    }
    const auto& pat = ax.pattern[k];
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (used[m] || members[m].action != pat.action || members[m].args.size() != pat.args.size()) continue;
      std::vector<int> trail;
      if (unify_pattern(pat.args, members[m].args, b, trail)) {
        used[m] = 1;
        rec(k + 1);
        used[m] = 0;
      }
      for (int v : trail) b[v] = kUnset;
      if (!value) return;
    }
  };
  rec(0);
  if (!matched) return std::nullopt;
  return value;
}

bool BasicActionTheory::poss_compound(const CompoundAction& a, const WorldState& w) const {
  for (const auto& m : a.members())
    if (!poss_simple(m, w)) return false;
  return poss_joint(a, w);
}

bool BasicActionTheory::poss_joint(const CompoundAction& a, const WorldState& w) const {
  if (compound_.empty()) return true;
  CompoundAction stripped = sig_->strip_idle(a);
  for (const auto& ax : compound_)
    if (auto v = eval_compound_axiom(ax, stripped, a, w)) return *v;
  return true;
}

WorldState BasicActionTheory::progress(const CompoundAction& a, const WorldState& w) const {
  for (const auto& m : a.members()) check_action(m);
  WorldState out(w);
  EvalContext ctx(*sig_, w, &a);
  for (std::size_t f = 0; f < ssa_.size(); ++f) {
    if (!ssa_[f]) continue;
    const auto& ax = *ssa_[f];
    std::vector<Tuple> next;
    Binding b(sig_->var_count(), kUnset);
    solve(ax.pos, ctx, b, [&] {
      Tuple t;
      for (int v : ax.params) {
        if (b[v].is_unset())
          throw Error(ErrorKind::InvalidProblem, "successor-state axiom of " + sig_->fluent(static_cast<int>(f)).name +
                                                    " does not bind ?" + sig_->var(v).name);
        t.push_back(b[v]);
      }
      next.push_back(std::move(t));
      return true;
    });
    for (const auto& t : w.extension(static_cast<int>(f))) {
      Binding bb(sig_->var_count(), kUnset);
      for (std::size_t i = 0; i < ax.params.size(); ++i) bb[ax.params[i]] = t[i];
      if (!eval(ax.neg, ctx, bb)) next.push_back(t);
    }
    out.set_extension(static_cast<int>(f), std::move(next));
  }
  return out;
}

}  // namespace golsynth
