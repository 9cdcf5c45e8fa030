#include "golsynth/arena.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace golsynth {

LabellingFluents install_labelling_fluents(Signature& sig) {
  auto add = [&](const char* name, std::size_t arity) {
    FluentSchema f;
    f.name = name;
    f.arg_sorts.assign(arity, kAnySort);
    f.situation_dependent = false;
    return sig.add_fluent(std::move(f));
  };
  LabellingFluents l;
  l.turn = add("turn", 1);
  l.turn_t = add("turnT", 0);
  l.turn_s = add("turnS", 0);
  l.final_t = add("finalT", 0);
  l.final_s = add("finalS", 0);
  l.obs_eq = add("obsEq", 0);
  l.prog_t = add("progT", 1);
  l.prog_s = add("progS", 1);
  l.env_t = add("envT", 1);
  l.env_s = add("envS", 1);
  return l;
}

Arena::Arena(std::shared_ptr<Problem> problem, ArenaOptions options)
    : problem_(std::move(problem)), options_(options) {}

ArenaState Arena::initial_state() const {
  const Problem& p = *problem_;
  ArenaState q;
  q.turn = Turn::T;
  q.target = Configuration{p.target_program, {}, p.target_theory->initial()};
  q.system = Configuration{p.system_program, {}, p.system_theory->initial()};
  q.pending = Configuration{p.pool->nil(), {}, p.system_theory->initial()};
  return q;
}

std::vector<Object> Arena::anonymous_objects(const ArenaState& q) const {
  std::vector<Object> out;
  q.target.world.active_domain(out);
  q.system.world.active_domain(out);
  for (const Configuration* c : {&q.target, &q.system, &q.pending})
    for (const auto& e : c->env) out.push_back(e.second);
  std::erase_if(out, [](Object o) { return !o.is_anonymous(); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Object> Arena::active_domain(const ArenaState& q) const {
  std::vector<Object> out;
  q.target.world.active_domain(out);
  q.system.world.active_domain(out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TransContext Arena::target_context(const ArenaState& q) const {
  TransContext ctx(*problem_->target_theory);
  ctx.known_anon = anonymous_objects(q);
  ctx.anon_pool = options_.anon_pool;
  return ctx;
}

TransContext Arena::system_context(const ArenaState& q) const {
  TransContext ctx(*problem_->system_theory);
  ctx.known_anon = anonymous_objects(q);
  ctx.anon_pool = options_.anon_pool;
  return ctx;
}

std::vector<Move> Arena::successors(const ArenaState& q) const {
  Problem& p = *problem_;
  ProgramPool& pool = *p.pool;
  const Signature& sig = *p.sig;
  std::vector<Move> out;

  if (q.turn == Turn::T) {
    for (auto& step : trans_obs(pool, q.target, q.system.world, p.mappings, target_context(q))) {
      auto [body, env] = p.mappings.lookup(step.action, pool);
      Move m;
      m.kind = Move::Kind::target;
      m.action = step.action;
      m.next.turn = Turn::S;
      m.next.target = std::move(step.next);
      m.next.system = q.system;
      m.next.pending = Configuration{body, std::move(env), q.system.world};
      out.push_back(std::move(m));
    }
    return out;
  }

  TransContext ctx = system_context(q);
  std::vector<Step> pending_steps = trans(pool, q.pending, ctx);
  if (pending_steps.empty()) return out;

  std::set<GroundAction> allowed;
  std::map<CompoundAction, std::vector<const Step*>> by_action;
  for (const auto& s : pending_steps) {
    CompoundAction key = sig.strip_idle(s.action);
    allowed.insert(key.members().begin(), key.members().end());
    by_action[std::move(key)].push_back(&s);
  }

  TransContext sys_ctx = ctx;
  sys_ctx.filter = [&](const CompoundAction& a) {
    for (const auto& m : a.members())
      if (!sig.action(m.action).idle && !allowed.contains(m)) return false;
    return true;
  };

  for (auto& s : trans(pool, q.system, sys_ctx)) {
    auto it = by_action.find(sig.strip_idle(s.action));
    if (it == by_action.end()) continue;
    for (const Step* ps : it->second) {
      Configuration pend = ps->next;
      pend.world = s.next.world;
      ArenaState base;
      base.target = q.target;
      base.system = s.next;
      if (final(pool, pend, ctx)) {
        Move m;
        m.kind = Move::Kind::system;
        m.action = s.action;
        m.next = base;
        m.next.turn = Turn::T;
        m.next.pending = Configuration{pool.nil(), {}, s.next.world};
        out.push_back(std::move(m));
        ArenaState cont = base;
        cont.turn = Turn::S;
        cont.pending = pend;
        if (trans(pool, pend, system_context(cont)).empty()) continue;
      }
      Move m;
      m.kind = Move::Kind::system;
      m.action = s.action;
      m.next = std::move(base);
      m.next.turn = Turn::S;
      m.next.pending = std::move(pend);
      out.push_back(std::move(m));
    }
  }
  return out;
}

bool Arena::final_t(const ArenaState& q) const {
  const Problem& p = *problem_;
  if (q.turn == Turn::T) return final_obs(*p.pool, q.target, q.system.world, p.mappings, target_context(q));
  return final(*p.pool, q.target, target_context(q));
}

bool Arena::final_s(const ArenaState& q) const { return final(*problem_->pool, q.system, system_context(q)); }

bool Arena::obs_eq(const ArenaState& q) const {
  const Problem& p = *problem_;
  ObsView view(*p.sig, p.mappings, q.target.world, q.system.world);
  for (const auto& [fluent, m] : p.mappings.observations())
    if (view.observed(fluent) != q.target.world.extension(fluent)) return false;
  return true;
}

Labels Arena::labels(const ArenaState& q) const {
  Labels l;
  l.turn = q.turn;
  l.final_t = final_t(q);
  l.final_s = final_s(q);
  l.obs_eq = obs_eq(q);
  return l;
}

namespace {

class LabelView : public Interpretation {
 public:
  LabelView(const Arena& arena, const ArenaState& q)
      : q_(q),
        problem_(arena.problem()),
        obs_(*problem_.sig, problem_.mappings, q.target.world, q.system.world),
        labels_(arena.labels(q)) {
    const auto& sig = *problem_.sig;
    auto& table = ObjectTable::global();
    const auto& pool = *problem_.pool;
    special_[problem_.labels.turn] = {{table.intern(std::string(1, turn_char(q.turn)))}};
    special_[problem_.labels.prog_t] = {{table.intern("prog:" + pool.text(q.target.counter))}};
    special_[problem_.labels.prog_s] = {{table.intern("prog:" + pool.text(q.system.counter))}};
    special_[problem_.labels.env_t] = {{table.intern("env:" + env_text(q.target.env, sig))}};
    special_[problem_.labels.env_s] = {{table.intern("env:" + env_text(q.system.env, sig))}};
    auto flag = [&](int f, bool v) {
      if (v) special_[f] = {Tuple{}};
      else special_[f] = {};
    };
    flag(problem_.labels.turn_t, q.turn == Turn::T);
    flag(problem_.labels.turn_s, q.turn == Turn::S);
    flag(problem_.labels.final_t, labels_.final_t);
    flag(problem_.labels.final_s, labels_.final_s);
    flag(problem_.labels.obs_eq, labels_.obs_eq);
  }

  bool holds(int fluent, const Tuple& args) const override {
    if (auto it = special_.find(fluent); it != special_.end())
      return std::find(it->second.begin(), it->second.end(), args) != it->second.end();
    if (reads_observation(fluent)) return obs_.holds(fluent, args);
    return world(fluent).holds(fluent, args);
  }

  bool for_each(int fluent, const std::function<bool(const Tuple&)>& visit) const override {
    if (auto it = special_.find(fluent); it != special_.end()) {
      for (const auto& t : it->second)
        if (!visit(t)) return false;
      return true;
    }
    if (reads_observation(fluent)) return obs_.for_each(fluent, visit);
    return world(fluent).for_each(fluent, visit);
  }

  void active_domain(std::vector<Object>& out) const override {
    q_.target.world.active_domain(out);
    q_.system.world.active_domain(out);
  }

 private:
  bool reads_observation(int fluent) const {
    const auto& f = problem_.sig->fluent(fluent);
    return q_.turn == Turn::T && f.theory == Theory::target && f.observable;
  }
  const WorldState& world(int fluent) const {
    return problem_.sig->fluent(fluent).theory == Theory::system ? q_.system.world : q_.target.world;
  }

  const ArenaState& q_;
  const Problem& problem_;
  ObsView obs_;
  Labels labels_;
  std::map<int, std::vector<Tuple>> special_;
};

}  // namespace

std::unique_ptr<Interpretation> Arena::labelling(const ArenaState& q) const {
  return std::make_unique<LabelView>(*this, q);
}

std::string Arena::describe(const ArenaState& q) const {
  const Problem& p = *problem_;
  const Signature& sig = *p.sig;
  auto cfg = [&](const char* name, const Configuration& c) {
    return std::string(name) + " " + p.pool->text(c.counter) + " " + env_text(c.env, sig) + "\n";
  };
  std::string out = std::string("turn ") + turn_char(q.turn) + "\n";
  out += cfg("target", q.target);
  out += cfg("system", q.system);
  out += cfg("pending", q.pending);
  out += "world-target " + world_text(q.target.world, sig) + "\n";
  out += "world-system " + world_text(q.system.world, sig) + "\n";
  return out;
}

}  // namespace golsynth
