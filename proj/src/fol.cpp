#include "golsynth/fol.hpp"

#include <algorithm>

namespace golsynth {

Term Term::variable(int v) {
  Term t;
  t.kind = Kind::var;
  t.var = v;
  return t;
}

Term Term::constant_of(Object o) {
  Term t;
  t.kind = Kind::constant;
  t.value = o;
  return t;
}

Term Term::constructed(std::string name, std::vector<Term> args) {
  Term t;
  t.kind = Kind::ctor;
  t.ctor = std::move(name);
  t.args = std::move(args);
  return t;
}

void collect_vars(const Term& t, std::vector<int>& out) {
  switch (t.kind) {
    case Term::Kind::var: out.push_back(t.var); break;
    case Term::Kind::constant: break;
    case Term::Kind::ctor:
      for (const auto& a : t.args) collect_vars(a, out);
      break;
  }
}

namespace {

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Formula::Formula() : Formula(truth()) {}

Formula Formula::make(Node n) {
  std::vector<int> fv;
  for (const auto& t : n.terms) collect_vars(t, fv);
  for (const auto& k : n.kids) fv.insert(fv.end(), k.free_vars().begin(), k.free_vars().end());
  sort_unique(fv);
  if (!n.vars.empty()) {
    std::vector<int> bound = n.vars;
    sort_unique(bound);
    std::vector<int> rest;
    std::set_difference(fv.begin(), fv.end(), bound.begin(), bound.end(), std::back_inserter(rest));
    fv = std::move(rest);
  }
  n.free_vars = std::move(fv);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

namespace {
Formula::Node bare(Formula::Kind k) {
  Formula::Node n;
  n.kind = k;
  return n;
}
}  // namespace

Formula Formula::truth() {
  static const Formula t = make(bare(Kind::truth));
  return t;
}

Formula Formula::falsity() {
  static const Formula f = make(bare(Kind::falsity));
  return f;
}

Formula Formula::atom(int fluent, std::vector<Term> terms) {
  Node n;
  n.kind = Kind::atom;
  n.symbol = fluent;
  n.terms = std::move(terms);
  return make(std::move(n));
}

Formula Formula::equals(Term a, Term b) {
  Node n;
  n.kind = Kind::eq;
  n.terms = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::member(int action, std::vector<Term> terms) {
  Node n;
  n.kind = Kind::member;
  n.symbol = action;
  n.terms = std::move(terms);
  return make(std::move(n));
}

Formula Formula::negate(Formula f) {
  Node n;
  n.kind = Kind::negation;
  n.kids = {std::move(f)};
  return make(std::move(n));
}

Formula Formula::conj(std::vector<Formula> kids) {
  if (kids.size() == 1) return kids.front();
  Node n;
  n.kind = Kind::conj;
  for (auto& k : kids) {
    if (k.kind() == Kind::conj)
      n.kids.insert(n.kids.end(), k.kids().begin(), k.kids().end());
    else
      n.kids.push_back(std::move(k));
  }
  return make(std::move(n));
}

Formula Formula::disj(std::vector<Formula> kids) {
  if (kids.size() == 1) return kids.front();
  Node n;
  n.kind = Kind::disj;
  for (auto& k : kids) {
    if (k.kind() == Kind::disj)
      n.kids.insert(n.kids.end(), k.kids().begin(), k.kids().end());
    else
      n.kids.push_back(std::move(k));
  }
  return make(std::move(n));
}

Formula Formula::implies(Formula a, Formula b) {
  Node n;
  n.kind = Kind::implies;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::exists(std::vector<int> vars, Formula body) {
  if (vars.empty()) return body;
  Node n;
  n.kind = Kind::exists;
  n.vars = std::move(vars);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::forall(std::vector<int> vars, Formula body) {
  if (vars.empty()) return body;
  Node n;
  n.kind = Kind::forall;
  n.vars = std::move(vars);
  // kids[1] caches the negated body so evaluation can search for a counterexample.
  Formula neg = negated_nnf(body);
  n.kids = {std::move(body), std::move(neg)};
  return make(std::move(n));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.symbol != y.symbol || x.terms != y.terms || x.vars != y.vars) return false;
  // Quantifier caches are derived; compare bodies only.
  std::size_t n = x.kind == Formula::Kind::forall ? 1 : x.kids.size();
  if (x.kids.size() != y.kids.size()) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (!(x.kids[i] == y.kids[i])) return false;
  return true;
}

Formula negated_nnf(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::truth: return Formula::falsity();
    case K::falsity: return Formula::truth();
    case K::atom:
    case K::eq:
    case K::member: return Formula::negate(f);
    case K::negation: return f.kids()[0];
    case K::conj: {
      std::vector<Formula> ks;
      for (const auto& k : f.kids()) ks.push_back(negated_nnf(k));
      return Formula::disj(std::move(ks));
    }
    case K::disj: {
      std::vector<Formula> ks;
      for (const auto& k : f.kids()) ks.push_back(negated_nnf(k));
      return Formula::conj(std::move(ks));
    }
    case K::implies: return Formula::conj({f.kids()[0], negated_nnf(f.kids()[1])});
    case K::exists: return Formula::forall(f.bound_vars(), negated_nnf(f.kids()[0]));
    case K::forall: return Formula::exists(f.bound_vars(), f.kids()[1]);
  }
  return Formula::negate(f);
}

// ---------------------------------------------------------------------------
// Evaluation

const std::vector<Object>& EvalContext::adom() const {
  if (!adom_) {
    std::vector<Object> out;
    interp.active_domain(out);
    if (action)
      for (const auto& m : action->members()) out.insert(out.end(), m.args.begin(), m.args.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    adom_ = std::move(out);
  }
  return *adom_;
}

const std::vector<Object>& EvalContext::domain(int var) const {
  int sort = var < static_cast<int>(sig.var_count()) ? sig.var(var).sort : kAnySort;
  if (sort == kAnySort) {
    if (!untyped_) {
      std::vector<Object> out;
      const auto& a = adom();
      std::set_union(sig.constants().begin(), sig.constants().end(), a.begin(), a.end(),
                     std::back_inserter(out));
      untyped_ = std::move(out);
    }
    return *untyped_;
  }
  if (by_sort_.size() < sig.sort_count()) by_sort_.resize(sig.sort_count());
  auto& slot = by_sort_[sort];
  if (!slot) {
    const Sort& s = sig.sort(sort);
    std::vector<Object> out = s.members;
    if (s.open)
      for (auto o : adom())
        if (o.is_anonymous()) out.push_back(o);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    slot = std::move(out);
  }
  return *slot;
}

Object eval_term(const Term& t, const Binding& b) {
  switch (t.kind) {
    case Term::Kind::constant: return t.value;
    case Term::Kind::var: {
      Object o = t.var < static_cast<int>(b.size()) ? b[t.var] : kUnset;
      if (o.is_unset()) throw Error(ErrorKind::UnboundVariable, "variable #" + std::to_string(t.var));
      return o;
    }
    case Term::Kind::ctor: {
      Tuple args;
      args.reserve(t.args.size());
      for (const auto& a : t.args) args.push_back(eval_term(a, b));
      return ObjectTable::global().intern_ctor(t.ctor, args);
    }
  }
  return kUnset;
}

namespace {

using Cont = std::function<bool()>;
using Trail = std::vector<int>;

bool term_ground(const Term& t, const Binding& b) {
  switch (t.kind) {
    case Term::Kind::constant: return true;
    case Term::Kind::var: return !b[t.var].is_unset();
    case Term::Kind::ctor:
      return std::all_of(t.args.begin(), t.args.end(), [&](const Term& a) { return term_ground(a, b); });
  }
  return true;
}

bool unify(const Term& t, Object o, Binding& b, Trail& trail) {
  switch (t.kind) {
    case Term::Kind::constant: return t.value == o;
    case Term::Kind::var:
      if (b[t.var].is_unset()) {
        b[t.var] = o;
        trail.push_back(t.var);
        return true;
      }
      return b[t.var] == o;
    case Term::Kind::ctor: {
      const CtorInfo* info = ObjectTable::global().ctor_info(o);
      if (!info || info->name != t.ctor || info->args.size() != t.args.size()) return false;
      for (std::size_t i = 0; i < t.args.size(); ++i)
        if (!unify(t.args[i], info->args[i], b, trail)) return false;
      return true;
    }
  }
  return false;
}

bool unify_all(const std::vector<Term>& ts, const Tuple& os, Binding& b, Trail& trail) {
  if (ts.size() != os.size()) return false;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (!unify(ts[i], os[i], b, trail)) return false;
  return true;
}

void undo(Binding& b, Trail& trail, std::size_t mark = 0) {
  while (trail.size() > mark) {
    b[trail.back()] = kUnset;
    trail.pop_back();
  }
}

bool all_bound(const Formula& f, const Binding& b) {
  for (int v : f.free_vars())
    if (b[v].is_unset()) return false;
  return true;
}

bool ev(const Formula& f, const EvalContext& c, Binding& b);
bool solve_rec(const Formula& f, const EvalContext& c, Binding& b, const Cont& k);

// Binds each variable in vars that is still unbound by enumeration.
bool bind_rest(const std::vector<int>& vars, std::size_t i, const EvalContext& c, Binding& b, const Cont& k) {
  while (i < vars.size() && !b[vars[i]].is_unset()) ++i;
  if (i == vars.size()) return k();
  int v = vars[i];
  for (Object o : c.domain(v)) {
    b[v] = o;
    bool cont = bind_rest(vars, i + 1, c, b, k);
    b[v] = kUnset;
    if (!cont) return false;
  }
  return true;
}

bool eval_exists(const std::vector<int>& vars, const Formula& body, const EvalContext& c, Binding& b) {
  std::vector<Object> saved;
  for (int v : vars) {
    saved.push_back(b[v]);
    b[v] = kUnset;
  }
  bool found = false;
  solve_rec(body, c, b, [&] {
    found = true;
    return false;
  });
  for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i]] = saved[i];
  return found;
}

bool ev(const Formula& f, const EvalContext& c, Binding& b) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::truth: return true;
    case K::falsity: return false;
    case K::atom: {
      Tuple args;
      args.reserve(f.terms().size());
      for (const auto& t : f.terms()) args.push_back(eval_term(t, b));
      return c.interp.holds(f.symbol(), args);
    }
    case K::eq: return eval_term(f.terms()[0], b) == eval_term(f.terms()[1], b);
    case K::member: {
      if (!c.action)
        throw Error(ErrorKind::MembershipOutsideActionContext, c.sig.action(f.symbol()).name);
      GroundAction g{f.symbol(), {}};
      for (const auto& t : f.terms()) g.args.push_back(eval_term(t, b));
      return c.action->contains(g);
    }
    case K::negation: return !ev(f.kids()[0], c, b);
    case K::conj:
      for (const auto& k : f.kids())
        if (!ev(k, c, b)) return false;
      return true;
    case K::disj:
      for (const auto& k : f.kids())
        if (ev(k, c, b)) return true;
      return false;
    case K::implies: return !ev(f.kids()[0], c, b) || ev(f.kids()[1], c, b);
    case K::exists: return eval_exists(f.bound_vars(), f.kids()[0], c, b);
    case K::forall: return !eval_exists(f.bound_vars(), f.kids()[1], c, b);
  }
  return false;
}

bool fallback(const Formula& f, const EvalContext& c, Binding& b, const Cont& k) {
  return bind_rest(f.free_vars(), 0, c, b, [&] { return ev(f, c, b) ? k() : true; });
}

int generative_rank(const Formula& f, const Binding& b) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::member: return 0;
    case K::atom: return 1;
    case K::eq:
      return term_ground(f.terms()[0], b) || term_ground(f.terms()[1], b) ? 0 : -1;
    case K::exists: return 2;
    case K::disj: return 3;
    case K::falsity: return 0;
    default: return -1;
  }
}

bool solve_conj(std::vector<const Formula*>& rest, const EvalContext& c, Binding& b, const Cont& k) {
  if (rest.empty()) return k();
  // Filters first, then the cheapest generator.
  std::size_t pick = rest.size();
  int best = 99;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (all_bound(*rest[i], b)) {
      pick = i;
      best = -2;
      break;
    }
    int r = generative_rank(*rest[i], b);
    if (r >= 0 && r < best) {
      best = r;
      pick = i;
    }
  }
  if (pick == rest.size()) {
    // Nothing generative: enumerate one variable and retry.
    for (const Formula* f : rest)
      for (int v : f->free_vars())
        if (b[v].is_unset()) {
          std::vector<int> one{v};
          return bind_rest(one, 0, c, b, [&] { return solve_conj(rest, c, b, k); });
        }
    return k();
  }
  const Formula* chosen = rest[pick];
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
  bool cont;
  if (best == -2) {
    cont = ev(*chosen, c, b) ? solve_conj(rest, c, b, k) : true;
  } else {
    cont = solve_rec(*chosen, c, b, [&] { return solve_conj(rest, c, b, k); });
  }
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(pick), chosen);
  return cont;
}

bool solve_rec(const Formula& f, const EvalContext& c, Binding& b, const Cont& k) {
  using K = Formula::Kind;
  if (all_bound(f, b)) return ev(f, c, b) ? k() : true;
  switch (f.kind()) {
    case K::atom: {
      bool cont = true;
      Trail trail;
      c.interp.for_each(f.symbol(), [&](const Tuple& t) {
        if (unify_all(f.terms(), t, b, trail)) cont = k();
        undo(b, trail);
        return cont;
      });
      return cont;
    }
    case K::member: {
      if (!c.action)
        throw Error(ErrorKind::MembershipOutsideActionContext, c.sig.action(f.symbol()).name);
      Trail trail;
      for (const auto& m : c.action->members()) {
        if (m.action != f.symbol()) continue;
        bool ok = unify_all(f.terms(), m.args, b, trail);
        bool cont = ok ? k() : true;
        undo(b, trail);
        if (!cont) return false;
      }
      return true;
    }
    case K::eq: {
      const Term& l = f.terms()[0];
      const Term& r = f.terms()[1];
      const Term* known = term_ground(l, b) ? &l : term_ground(r, b) ? &r : nullptr;
      if (!known) return fallback(f, c, b, k);
      const Term& other = known == &l ? r : l;
      Trail trail;
      bool cont = unify(other, eval_term(*known, b), b, trail) ? k() : true;
      undo(b, trail);
      return cont;
    }
    case K::conj: {
      std::vector<const Formula*> rest;
      for (const auto& kid : f.kids()) rest.push_back(&kid);
      return solve_conj(rest, c, b, k);
    }
    case K::disj:
      for (const auto& kid : f.kids()) {
        bool cont = solve_rec(kid, c, b, [&] { return bind_rest(f.free_vars(), 0, c, b, k); });
        if (!cont) return false;
      }
      return true;
    case K::exists: {
      const auto& vars = f.bound_vars();
      std::vector<Object> saved;
      for (int v : vars) {
        saved.push_back(b[v]);
        b[v] = kUnset;
      }
      bool cont = solve_rec(f.kids()[0], c, b, [&] {
        std::vector<Object> inner;
        for (std::size_t i = 0; i < vars.size(); ++i) {
          inner.push_back(b[vars[i]]);
          b[vars[i]] = saved[i];
        }
        bool r = k();
        for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i]] = inner[i];
        return r;
      });
      for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i]] = saved[i];
      return cont;
    }
    case K::falsity: return true;
    default: return fallback(f, c, b, k);
  }
}

void fit(Binding& b, const Signature& sig) {
  if (b.size() < sig.var_count()) b.resize(sig.var_count(), kUnset);
}

}  // namespace

bool eval(const Formula& f, const EvalContext& ctx, Binding& b) {
  fit(b, ctx.sig);
  for (int v : f.free_vars())
    if (b[v].is_unset())
      throw Error(ErrorKind::UnboundVariable, "?" + ctx.sig.var(v).name + " in " + to_string(f, ctx.sig));
  return ev(f, ctx, b);
}

bool eval(const Formula& f, const EvalContext& ctx) {
  Binding b;
  return eval(f, ctx, b);
}

bool solve(const Formula& f, const EvalContext& ctx, Binding& b, const std::function<bool()>& on_solution) {
  fit(b, ctx.sig);
  return solve_rec(f, ctx, b, on_solution);
}

// ---------------------------------------------------------------------------
// Substitution

using Subst = std::vector<std::pair<int, Term>>;

Term substitute(const Term& t, const Subst& s) {
  switch (t.kind) {
    case Term::Kind::constant: return t;
    case Term::Kind::var:
      for (const auto& [v, r] : s)
        if (v == t.var) return r;
      return t;
    case Term::Kind::ctor: {
      std::vector<Term> args;
      for (const auto& a : t.args) args.push_back(substitute(a, s));
      return Term::constructed(t.ctor, std::move(args));
    }
  }
  return t;
}

namespace {

std::vector<Term> subst_terms(const std::vector<Term>& ts, const Subst& s) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(substitute(t, s));
  return out;
}

Formula subst_rec(const Formula& f, const Subst& s, Signature& sig) {
  using K = Formula::Kind;
  Subst live;
  for (const auto& entry : s)
    if (std::binary_search(f.free_vars().begin(), f.free_vars().end(), entry.first)) live.push_back(entry);
  if (live.empty()) return f;
  switch (f.kind()) {
    case K::truth:
    case K::falsity: return f;
    case K::atom: return Formula::atom(f.symbol(), subst_terms(f.terms(), live));
    case K::member: return Formula::member(f.symbol(), subst_terms(f.terms(), live));
    case K::eq: return Formula::equals(substitute(f.terms()[0], live), substitute(f.terms()[1], live));
    case K::negation: return Formula::negate(subst_rec(f.kids()[0], live, sig));
    case K::conj:
    case K::disj: {
      std::vector<Formula> ks;
      for (const auto& k : f.kids()) ks.push_back(subst_rec(k, live, sig));
      return f.kind() == K::conj ? Formula::conj(std::move(ks)) : Formula::disj(std::move(ks));
    }
    case K::implies: return Formula::implies(subst_rec(f.kids()[0], live, sig), subst_rec(f.kids()[1], live, sig));
    case K::exists:
    case K::forall: {
      std::vector<int> incoming;
      for (const auto& entry : live) collect_vars(entry.second, incoming);
      std::vector<int> vars = f.bound_vars();
      Subst inner = live;
      for (auto& v : vars) {
        if (std::find(incoming.begin(), incoming.end(), v) == incoming.end()) continue;
        const VarInfo info = sig.var(v);
        int fresh = sig.add_var(info.name + "'", info.sort);
        inner.emplace_back(v, Term::variable(fresh));
        v = fresh;
      }
      Formula body = subst_rec(f.kids()[0], inner, sig);
      return f.kind() == K::exists ? Formula::exists(std::move(vars), std::move(body))
                                   : Formula::forall(std::move(vars), std::move(body));
    }
  }
  return f;
}

}  // namespace

Formula substitute(const Formula& f, const Subst& binding, Signature& sig) { return subst_rec(f, binding, sig); }

// ---------------------------------------------------------------------------
// Printing (s-expression syntax accepted by the frontend)

std::string to_string(const Term& t, const Signature& sig) {
  switch (t.kind) {
    case Term::Kind::constant: return to_string(t.value);
    case Term::Kind::var: return "?" + sig.var(t.var).name;
    case Term::Kind::ctor: {
      std::string out = "(" + t.ctor;
      for (const auto& a : t.args) out += " " + to_string(a, sig);
      return out + ")";
    }
  }
  return "?";
}

namespace {

std::string binder_list(const std::vector<int>& vars, const Signature& sig) {
  std::string out = "(";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ' ';
    const VarInfo& v = sig.var(vars[i]);
    if (v.sort == kAnySort)
      out += "?" + v.name;
    else
      out += "(?" + v.name + " " + sig.sort(v.sort).name + ")";
  }
  return out + ")";
}

}  // namespace

std::string to_string(const Formula& f, const Signature& sig) {
  using K = Formula::Kind;
  auto terms = [&](std::string head) {
    for (const auto& t : f.terms()) head += " " + to_string(t, sig);
    return head + ")";
  };
  auto kids = [&](std::string head, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) head += " " + to_string(f.kids()[i], sig);
    return head + ")";
  };
  switch (f.kind()) {
    case K::truth: return "true";
    case K::falsity: return "false";
    case K::atom: return terms("(" + sig.fluent(f.symbol()).name);
    case K::eq: return terms("(=");
    case K::member: return "(in " + terms("(" + sig.action(f.symbol()).name) + ")";
    case K::negation: return kids("(not", 1);
    case K::conj: return kids("(and", f.kids().size());
    case K::disj: return kids("(or", f.kids().size());
    case K::implies: return kids("(implies", 2);
    case K::exists: return "(exists " + binder_list(f.bound_vars(), sig) + " " + to_string(f.kids()[0], sig) + ")";
    case K::forall: return "(forall " + binder_list(f.bound_vars(), sig) + " " + to_string(f.kids()[0], sig) + ")";
  }
  return "?";
}

}  // namespace golsynth
