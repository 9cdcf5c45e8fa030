#include "golsynth/mapping.hpp"

#include <algorithm>

namespace golsynth {

void MappingTable::add_action(ActionMapping m) { actions_[m.target_action] = std::move(m); }

void MappingTable::add_observation(ObservationMapping m) { observations_[m.fluent] = std::move(m); }

const ActionMapping* MappingTable::action(int target_action) const {
  auto it = actions_.find(target_action);
  return it == actions_.end() ? nullptr : &it->second;
}

const ObservationMapping* MappingTable::observation(int fluent) const {
  auto it = observations_.find(fluent);
  return it == observations_.end() ? nullptr : &it->second;
}

std::pair<int, Env> MappingTable::lookup(const CompoundAction& a, const ProgramPool& pool) const {
  const Signature& sig = pool.signature();
  if (a.size() != 1) throw Error(ErrorKind::NoMappingForAction, sig.action_text(a) + " is not a single action");
  const GroundAction& g = a.members().front();
  const ActionMapping* m = action(g.action);
  if (!m) throw Error(ErrorKind::NoMappingForAction, sig.action_text(g));
  if (m->params.size() != g.args.size())
    throw Error(ErrorKind::ArityMismatch, "mapping of " + sig.action(g.action).name);
  Env env;
  for (std::size_t i = 0; i < m->params.size(); ++i) {
    Object prev = env_get(env, m->params[i]);
    if (!prev.is_unset() && prev != g.args[i])
      throw Error(ErrorKind::NoMappingForAction, sig.action_text(g) + " does not match the mapping head");
    env_set(env, m->params[i], g.args[i]);
  }
  return {m->body, env_restrict(env, pool.node(m->body).free_vars)};
}

// ---------------------------------------------------------------------------

ObsView::ObsView(const Signature& sig, const MappingTable& maps, const WorldState& target, const WorldState& system)
    : sig_(sig), maps_(maps), target_(target), system_(system) {}

const ObservationMapping& ObsView::mapping_of(int fluent) const {
  const ObservationMapping* m = maps_.observation(fluent);
  if (!m) throw Error(ErrorKind::UnmappedObservableFluent, sig_.fluent(fluent).name);
  return *m;
}

bool ObsView::holds(int fluent, const Tuple& args) const {
  const FluentSchema& f = sig_.fluent(fluent);
  if (f.theory == Theory::system) return system_.holds(fluent, args);
  if (!f.observable) return target_.holds(fluent, args);
  const ObservationMapping& m = mapping_of(fluent);
  Binding b(sig_.var_count(), kUnset);
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (!b[m.params[i]].is_unset() && b[m.params[i]] != args[i]) return false;
    b[m.params[i]] = args[i];
  }
  EvalContext ctx(sig_, system_);
  return eval(m.defining, ctx, b);
}

std::vector<Tuple> ObsView::observed(int fluent) const {
  const ObservationMapping& m = mapping_of(fluent);
  EvalContext ctx(sig_, system_);
  Binding b(sig_.var_count(), kUnset);
  std::vector<Tuple> out;
  solve(m.defining, ctx, b, [&] {
    Tuple t;
    for (int v : m.params) t.push_back(b[v]);
    out.push_back(std::move(t));
    return true;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ObsView::for_each(int fluent, const std::function<bool(const Tuple&)>& visit) const {
  const FluentSchema& f = sig_.fluent(fluent);
  if (f.theory == Theory::system) return system_.for_each(fluent, visit);
  if (!f.observable) return target_.for_each(fluent, visit);
  for (const auto& t : observed(fluent))
    if (!visit(t)) return false;
  return true;
}

void ObsView::active_domain(std::vector<Object>& out) const {
  target_.active_domain(out);
  system_.active_domain(out);
}

const WorldState& JointView::pick(int fluent) const {
  return sig_.fluent(fluent).theory == Theory::system ? system_ : target_;
}

bool JointView::holds(int fluent, const Tuple& args) const { return pick(fluent).holds(fluent, args); }

bool JointView::for_each(int fluent, const std::function<bool(const Tuple&)>& visit) const {
  return pick(fluent).for_each(fluent, visit);
}

void JointView::active_domain(std::vector<Object>& out) const {
  target_.active_domain(out);
  system_.active_domain(out);
}

// ---------------------------------------------------------------------------

bool final_obs(const ProgramPool& pool, const Configuration& target, const WorldState& system,
               const MappingTable& maps, TransContext ctx) {
  ObsView view(pool.signature(), maps, target.world, system);
  ctx.tests = &view;
  return final(pool, target, ctx);
}

std::vector<Step> trans_obs(ProgramPool& pool, const Configuration& target, const WorldState& system,
                            const MappingTable& maps, TransContext ctx) {
  ObsView view(pool.signature(), maps, target.world, system);
  ctx.tests = &view;
  return trans(pool, target, ctx);
}

Formula rewrite_observables(const Formula& f, const MappingTable& maps, Signature& sig) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::atom: {
      const FluentSchema& schema = sig.fluent(f.symbol());
      if (schema.theory != Theory::target || !schema.observable) return f;
      const ObservationMapping* m = maps.observation(f.symbol());
      if (!m) throw Error(ErrorKind::UnmappedObservableFluent, schema.name);
      std::vector<std::pair<int, Term>> s;
      for (std::size_t i = 0; i < m->params.size(); ++i) s.emplace_back(m->params[i], f.terms()[i]);
      return substitute(m->defining, s, sig);
    }
    case K::negation: return Formula::negate(rewrite_observables(f.kids()[0], maps, sig));
    case K::conj:
    case K::disj: {
      std::vector<Formula> ks;
      for (const auto& k : f.kids()) ks.push_back(rewrite_observables(k, maps, sig));
      return f.kind() == K::conj ? Formula::conj(std::move(ks)) : Formula::disj(std::move(ks));
    }
    case K::implies:
      return Formula::implies(rewrite_observables(f.kids()[0], maps, sig), rewrite_observables(f.kids()[1], maps, sig));
    case K::exists: return Formula::exists(f.bound_vars(), rewrite_observables(f.kids()[0], maps, sig));
    case K::forall: return Formula::forall(f.bound_vars(), rewrite_observables(f.kids()[0], maps, sig));
    default: return f;
  }
}

}  // namespace golsynth
