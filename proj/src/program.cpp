#include "golsynth/program.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

namespace golsynth {

namespace {

std::vector<int> merged_vars(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string term_key(const Term& t) {
  switch (t.kind) {
    case Term::Kind::constant: return "c" + std::to_string(t.value.id);
    case Term::Kind::var: return "v" + std::to_string(t.var);
    case Term::Kind::ctor: {
      std::string out = "f" + t.ctor + "(";
      for (const auto& a : t.args) out += term_key(a) + ",";
      return out + ")";
    }
  }
  return "";
}

std::string formula_key(const Formula& f) {
  std::string out = std::to_string(static_cast<int>(f.kind())) + ":" + std::to_string(f.symbol()) + "[";
  for (const auto& t : f.terms()) out += term_key(t) + ",";
  for (int v : f.bound_vars()) out += "b" + std::to_string(v) + ",";
  std::size_t n = f.kind() == Formula::Kind::forall ? 1 : f.kids().size();
  for (std::size_t i = 0; i < n; ++i) out += formula_key(f.kids()[i]) + ",";
  return out + "]";
}

std::string binder_text(int var, const Signature& sig) {
  const VarInfo& v = sig.var(var);
  if (v.sort == kAnySort) return "?" + v.name;
  return "(?" + v.name + " " + sig.sort(v.sort).name + ")";
}

}  // namespace

ProgramPool::ProgramPool(std::shared_ptr<Signature> sig) : sig_(std::move(sig)) {}

int ProgramPool::intern(ProgNode n, std::string key) {
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(n));
  index_.emplace(std::move(key), id);
  return id;
}

int ProgramPool::action(std::vector<ActionTerm> acts) {
  ProgNode n;
  n.kind = ProgKind::action;
  std::string key = "A";
  std::vector<std::string> parts;
  for (const auto& a : acts) {
    std::string t = "(" + sig_->action(a.action).name;
    key += std::to_string(a.action) + "(";
    for (const auto& arg : a.args) {
      t += " " + to_string(arg, *sig_);
      key += term_key(arg) + ",";
      collect_vars(arg, n.free_vars);
    }
    key += ")";
    parts.push_back(t + ")");
  }
  std::sort(n.free_vars.begin(), n.free_vars.end());
  n.free_vars.erase(std::unique(n.free_vars.begin(), n.free_vars.end()), n.free_vars.end());
  if (parts.size() == 1) {
    n.text = parts.front();
  } else {
    n.text = "(compound";
    for (const auto& p : parts) n.text += " " + p;
    n.text += ")";
  }
  n.acts = std::move(acts);
  return intern(std::move(n), std::move(key));
}

int ProgramPool::test(Formula f) {
  ProgNode n;
  n.kind = ProgKind::test;
  n.free_vars = f.free_vars();
  n.text = "(test " + to_string(f, *sig_) + ")";
  std::string key = "T" + formula_key(f);
  n.test = std::move(f);
  return intern(std::move(n), std::move(key));
}

int ProgramPool::nil() { return test(Formula::truth()); }

namespace {
const char* kind_word(ProgKind k) {
  switch (k) {
    case ProgKind::seq: return "seq";
    case ProgKind::choice: return "choice";
    case ProgKind::conc: return "conc";
    case ProgKind::sync: return "sync";
    case ProgKind::star: return "star";
    case ProgKind::pick: return "pick";
    default: return "?";
  }
}
}  // namespace

#define GOLSYNTH_BINARY(fn, K)                                                                  \
  int ProgramPool::fn(int a, int b) {                                                            \
    ProgNode n;                                                                                  \
    n.kind = K;                                                                                  \
    n.a = a;                                                                                     \
    n.b = b;                                                                                     \
    n.free_vars = merged_vars(nodes_.at(a).free_vars, nodes_.at(b).free_vars);                  \
    n.text = std::string("(") + kind_word(K) + " " + nodes_[a].text + " " + nodes_[b].text + ")"; \
    std::string key = std::string(kind_word(K)) + std::to_string(a) + "," + std::to_string(b);   \
    return intern(std::move(n), std::move(key));                                                 \
  }

GOLSYNTH_BINARY(seq, ProgKind::seq)
GOLSYNTH_BINARY(choice, ProgKind::choice)
GOLSYNTH_BINARY(conc, ProgKind::conc)
GOLSYNTH_BINARY(sync, ProgKind::sync)

#undef GOLSYNTH_BINARY

int ProgramPool::pick(int var, int body) {
  ProgNode n;
  n.kind = ProgKind::pick;
  n.a = body;
  n.var = var;
  n.free_vars = nodes_.at(body).free_vars;
  n.free_vars.erase(std::remove(n.free_vars.begin(), n.free_vars.end(), var), n.free_vars.end());
  n.text = "(pick " + binder_text(var, *sig_) + " " + nodes_[body].text + ")";
  std::string key = "P" + std::to_string(var) + "," + std::to_string(body);
  return intern(std::move(n), std::move(key));
}

int ProgramPool::star(int body) {
  ProgNode n;
  n.kind = ProgKind::star;
  n.a = body;
  n.free_vars = nodes_.at(body).free_vars;
  n.text = "(star " + nodes_[body].text + ")";
  std::string key = "S" + std::to_string(body);
  return intern(std::move(n), std::move(key));
}

// ---------------------------------------------------------------------------
// Environments

Object env_get(const Env& env, int var) {
  auto it = std::lower_bound(env.begin(), env.end(), var, [](const auto& e, int v) { return e.first < v; });
  return it != env.end() && it->first == var ? it->second : kUnset;
}

void env_set(Env& env, int var, Object o) {
  auto it = std::lower_bound(env.begin(), env.end(), var, [](const auto& e, int v) { return e.first < v; });
  if (it != env.end() && it->first == var) {
    if (o.is_unset())
      env.erase(it);
    else
      it->second = o;
  } else if (!o.is_unset()) {
    env.insert(it, {var, o});
  }
}

Env env_restrict(const Env& env, const std::vector<int>& vars) {
  Env out;
  for (const auto& e : env)
    if (std::binary_search(vars.begin(), vars.end(), e.first)) out.push_back(e);
  return out;
}

std::string env_text(const Env& env, const Signature& sig) {
  std::string out = "[";
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (i) out += ' ';
    out += "?" + sig.var(env[i].first).name + "=" + to_string(env[i].second);
  }
  return out + "]";
}

Binding env_binding(const Env& env, const Signature& sig, const std::vector<int>& required) {
  Binding b(sig.var_count(), kUnset);
  for (const auto& [v, o] : env)
    if (v < static_cast<int>(b.size())) b[v] = o;
  for (int v : required)
    if (b[v].is_unset()) throw Error(ErrorKind::UnresolvedPickVariable, "?" + sig.var(v).name);
  return b;
}

std::size_t config_hash(const Configuration& c) {
  std::size_t h = static_cast<std::size_t>(c.counter) * 0x9e3779b97f4a7c15ull;
  for (const auto& [v, o] : c.env) h = (h ^ (static_cast<std::size_t>(v) << 32 ^ o.id)) * 1099511628211ull;
  return h ^ c.world.hash();
}

// ---------------------------------------------------------------------------
// Trans / Final

std::vector<Object> pick_candidates(const Signature& sig, int var, const Env& env, const WorldState& world,
                                    const TransContext& ctx) {
  int sort = sig.var(var).sort;
  std::vector<Object> adom = active_domain(world);
  std::vector<Object> out;
  if (sort == kAnySort) {
    out = sig.constants();
    for (auto o : adom)
      if (o.is_named()) out.push_back(o);
  } else {
    out = sig.sort(sort).members;
  }
  if (sig.sort_is_open(sort)) {
    std::vector<Object> anon = ctx.known_anon;
    for (auto o : adom)
      if (o.is_anonymous()) anon.push_back(o);
    for (const auto& e : env)
      if (e.second.is_anonymous()) anon.push_back(e.second);
    std::sort(anon.begin(), anon.end());
    anon.erase(std::unique(anon.begin(), anon.end()), anon.end());
    out.insert(out.end(), anon.begin(), anon.end());
    std::uint32_t idx = 0;
    for (int k = 0; k < ctx.anon_pool; ++k) {
      while (std::binary_search(anon.begin(), anon.end(), anonymous(idx))) ++idx;
      out.push_back(anonymous(idx++));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct RawStep {
  CompoundAction action;
  int residual;
  Env env;
};

bool final_rec(const ProgramPool& pool, int id, Env& env, const WorldState& world, const TransContext& ctx) {
  const ProgNode& n = pool.node(id);
  const Signature& sig = pool.signature();
  switch (n.kind) {
    case ProgKind::action: return false;
    case ProgKind::test: {
      if (n.test.kind() == Formula::Kind::truth) return true;
      Binding b = env_binding(env, sig, n.free_vars);
      EvalContext ec(sig, ctx.tests ? *ctx.tests : world);
      return eval(n.test, ec, b);
    }
    case ProgKind::seq:
      return final_rec(pool, n.a, env, world, ctx) && final_rec(pool, n.b, env, world, ctx);
    case ProgKind::choice:
      return final_rec(pool, n.a, env, world, ctx) || final_rec(pool, n.b, env, world, ctx);
    case ProgKind::star: return true;
    case ProgKind::conc:
    case ProgKind::sync:
      return final_rec(pool, n.a, env, world, ctx) && final_rec(pool, n.b, env, world, ctx);
    case ProgKind::pick: {
      Object saved = env_get(env, n.var);
      bool found = false;
      for (Object o : pick_candidates(sig, n.var, env, world, ctx)) {
        env_set(env, n.var, o);
        if (final_rec(pool, n.a, env, world, ctx)) {
          found = true;
          break;
        }
      }
      env_set(env, n.var, saved);
      return found;
    }
  }
  return false;
}

Env merge_env(const Env& base, const Env& e1, const Env& e2) {
  Env out = e1;
  for (const auto& [v, o] : e2)
    if (env_get(base, v) != o) env_set(out, v, o);
  return out;
}

void trans_rec(ProgramPool& pool, int id, Env& env, bool in_sync, const WorldState& world, const TransContext& ctx,
               std::vector<RawStep>& out) {
  const ProgNode& n = pool.node(id);
  const Signature& sig = pool.signature();
  switch (n.kind) {
    case ProgKind::action: {
      Binding b = env_binding(env, sig, n.free_vars);
      std::vector<GroundAction> members;
      for (const auto& at : n.acts) {
        GroundAction g{at.action, {}};
        for (const auto& t : at.args) g.args.push_back(eval_term(t, b));
        members.push_back(std::move(g));
      }
      CompoundAction act(std::move(members));
      if (ctx.filter && !ctx.filter(act)) return;
      if (ctx.check_poss) {
        if (in_sync) {
          for (const auto& m : act.members())
            if (!ctx.theory.poss_simple(m, world)) return;
        } else if (!ctx.theory.poss_compound(act, world)) {
          return;
        }
      }
      out.push_back({std::move(act), pool.nil(), env});
      return;
    }
    case ProgKind::test: return;
    case ProgKind::seq: {
      std::vector<RawStep> first;
      trans_rec(pool, n.a, env, in_sync, world, ctx, first);
      for (auto& s : first) out.push_back({std::move(s.action), pool.seq(s.residual, n.b), std::move(s.env)});
      if (final_rec(pool, n.a, env, world, ctx)) trans_rec(pool, n.b, env, in_sync, world, ctx, out);
      return;
    }
    case ProgKind::choice:
      trans_rec(pool, n.a, env, in_sync, world, ctx, out);
      trans_rec(pool, n.b, env, in_sync, world, ctx, out);
      return;
    case ProgKind::pick: {
      Object saved = env_get(env, n.var);
      for (Object o : pick_candidates(sig, n.var, env, world, ctx)) {
        env_set(env, n.var, o);
        trans_rec(pool, n.a, env, in_sync, world, ctx, out);
      }
      env_set(env, n.var, saved);
      return;
    }
    case ProgKind::star: {
      std::vector<RawStep> body;
      trans_rec(pool, n.a, env, in_sync, world, ctx, body);
      for (auto& s : body) out.push_back({std::move(s.action), pool.seq(s.residual, id), std::move(s.env)});
      return;
    }
    case ProgKind::conc: {
      std::vector<RawStep> left, right;
      trans_rec(pool, n.a, env, in_sync, world, ctx, left);
      for (auto& s : left) out.push_back({std::move(s.action), pool.conc(s.residual, n.b), std::move(s.env)});
      trans_rec(pool, n.b, env, in_sync, world, ctx, right);
      for (auto& s : right) out.push_back({std::move(s.action), pool.conc(n.a, s.residual), std::move(s.env)});
      return;
    }
    case ProgKind::sync: {
      std::vector<RawStep> left, right;
      trans_rec(pool, n.a, env, true, world, ctx, left);
      if (left.empty()) return;
      trans_rec(pool, n.b, env, true, world, ctx, right);
      for (const auto& l : left)
        for (const auto& r : right) {
          CompoundAction act = CompoundAction::unite(l.action, r.action);
          if (!in_sync && ctx.check_poss && !ctx.theory.poss_joint(act, world)) continue;
          out.push_back({std::move(act), pool.sync(l.residual, r.residual), merge_env(env, l.env, r.env)});
        }
      return;
    }
  }
}

}  // namespace

bool final(const ProgramPool& pool, const Configuration& c, const TransContext& ctx) {
  Env env = c.env;
  return final_rec(pool, c.counter, env, c.world, ctx);
}

std::vector<Step> trans(ProgramPool& pool, const Configuration& c, const TransContext& ctx) {
  std::vector<RawStep> raw;
  Env env = c.env;
  trans_rec(pool, c.counter, env, false, c.world, ctx, raw);
  for (auto& s : raw) s.env = env_restrict(s.env, pool.node(s.residual).free_vars);
  std::sort(raw.begin(), raw.end(), [&](const RawStep& x, const RawStep& y) {
    if (x.action != y.action) return x.action < y.action;
    if (x.residual != y.residual) return pool.text(x.residual) < pool.text(y.residual);
    return x.env < y.env;
  });
  raw.erase(std::unique(raw.begin(), raw.end(),
                        [](const RawStep& x, const RawStep& y) {
                          return x.action == y.action && x.residual == y.residual && x.env == y.env;
                        }),
            raw.end());
  std::vector<Step> out;
  out.reserve(raw.size());
  std::map<CompoundAction, WorldState> progressed;
  for (auto& s : raw) {
    auto it = progressed.find(s.action);
    if (it == progressed.end()) it = progressed.emplace(s.action, ctx.theory.progress(s.action, c.world)).first;
    out.push_back({s.action, Configuration{s.residual, std::move(s.env), it->second}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closure and complete executions

namespace {

const std::set<int>& closure_rec(ProgramPool& pool, int id, std::map<int, std::set<int>>& memo) {
  if (auto it = memo.find(id); it != memo.end()) return it->second;
  const ProgNode& n = pool.node(id);
  std::set<int> out;
  switch (n.kind) {
    case ProgKind::action: out = {id, pool.nil()}; break;
    case ProgKind::test: out = {id}; break;
    case ProgKind::seq: {
      std::set<int> first = closure_rec(pool, n.a, memo);
      for (int x : first) out.insert(pool.seq(x, n.b));
      const auto& second = closure_rec(pool, n.b, memo);
      out.insert(second.begin(), second.end());
      break;
    }
    case ProgKind::choice: {
      out.insert(id);
      std::set<int> l = closure_rec(pool, n.a, memo);
      out.insert(l.begin(), l.end());
      const auto& r = closure_rec(pool, n.b, memo);
      out.insert(r.begin(), r.end());
      break;
    }
    case ProgKind::pick: {
      out.insert(id);
      const auto& body = closure_rec(pool, n.a, memo);
      out.insert(body.begin(), body.end());
      break;
    }
    case ProgKind::star: {
      out.insert(id);
      std::set<int> body = closure_rec(pool, n.a, memo);
      for (int x : body) out.insert(pool.seq(x, id));
      break;
    }
    case ProgKind::conc:
    case ProgKind::sync: {
      std::set<int> l = closure_rec(pool, n.a, memo);
      std::set<int> r = closure_rec(pool, n.b, memo);
      for (int x : l)
        for (int y : r) out.insert(n.kind == ProgKind::conc ? pool.conc(x, y) : pool.sync(x, y));
      break;
    }
  }
  return memo[id] = std::move(out);
}

}  // namespace

std::set<int> syntactic_closure(ProgramPool& pool, int root) {
  std::map<int, std::set<int>> memo;
  return closure_rec(pool, root, memo);
}

std::size_t closure_bound(const ProgramPool& pool, int root) {
  const ProgNode& n = pool.node(root);
  switch (n.kind) {
    case ProgKind::action: return 2;
    case ProgKind::test: return 1;
    case ProgKind::seq: return closure_bound(pool, n.a) + closure_bound(pool, n.b);
    case ProgKind::choice: return 1 + closure_bound(pool, n.a) + closure_bound(pool, n.b);
    case ProgKind::pick:
    case ProgKind::star: return 1 + closure_bound(pool, n.a);
    case ProgKind::conc:
    case ProgKind::sync: return closure_bound(pool, n.a) * closure_bound(pool, n.b);
  }
  return 1;
}

std::vector<WorldState> do_reachable(ProgramPool& pool, const Configuration& c, const TransContext& ctx,
                                     std::size_t max_configs) {
  struct Hash {
    std::size_t operator()(const Configuration& x) const { return config_hash(x); }
  };
  std::unordered_set<Configuration, Hash> seen{c};
  std::deque<Configuration> queue{c};
  std::vector<WorldState> out;
  while (!queue.empty() && seen.size() <= max_configs) {
    Configuration cur = std::move(queue.front());
    queue.pop_front();
    if (final(pool, cur, ctx)) out.push_back(cur.world);
    for (auto& s : trans(pool, cur, ctx))
      if (seen.insert(s.next).second) queue.push_back(std::move(s.next));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace golsynth
