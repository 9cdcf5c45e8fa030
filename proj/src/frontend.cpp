#include "golsynth/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace golsynth {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidProblem, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

bool is_var(const SExpr& e) { return e.is_atom() && e.atom.size() > 1 && e.atom[0] == '?'; }

bool is_number(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// Numeric literal such as 200 or .3; usable as an object without declaration.
bool is_numeric_literal(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c)))
      digit = true;
    else if (c != '.')
      return false;
  }
  return digit;
}

// ---------------------------------------------------------------------------
// Normalization: desugaring and renaming apart of program variables.

class Normalizer {
 public:
  explicit Normalizer(std::vector<Diagnostic>& diags) : diags_(diags) {}

  SExpr top(const SExpr& form) {
    if (form.headed("resource") && form.size() == 3) return SExpr::list({form[0], form[1], program(form[2])}, form.span);
    if (form.headed("target") && form.size() == 2) return SExpr::list({form[0], program(form[1])}, form.span);
    if (form.headed("map") && form.size() == 3 && form[1].is_list) {
      SExpr head = form[1];
      SExpr body = form[2];
      for (std::size_t i = 1; i < head.items.size(); ++i) {
        if (!is_var(head.items[i])) continue;
        std::string name = head.items[i].atom;
        std::string fresh = claim(name);
        if (fresh != name) {
          body = rename(body, name, fresh);
          for (std::size_t j = i + 1; j < head.items.size(); ++j)
            if (head.items[j].is(name)) head.items[j].atom = fresh;
          head.items[i].atom = fresh;
        }
      }
      return SExpr::list({form[0], head, program(body)}, form.span);
    }
    return form;
  }

 private:
  std::string claim(const std::string& name) {
    std::string out = name;
    for (int k = 2; used_.contains(out); ++k) out = name + "_" + std::to_string(k);
    used_.insert(out);
    return out;
  }

  static const SExpr* binder_name(const SExpr& b) {
    if (is_var(b)) return &b;
    if (b.is_list && b.size() == 2 && is_var(b[0])) return &b[0];
    return nullptr;
  }

  static bool binds(const SExpr& e, const std::string& name) {
    if (e.headed("pick") && e.size() == 3) {
      const SExpr* b = binder_name(e[1]);
      return b && b->atom == name;
    }
    if ((e.headed("exists") || e.headed("forall")) && e.size() == 3 && e[1].is_list)
      for (const auto& b : e[1].items)
        if (const SExpr* n = binder_name(b); n && n->atom == name) return true;
    return false;
  }

  static SExpr rename(const SExpr& e, const std::string& from, const std::string& to) {
    if (e.is_atom()) return e.atom == from ? SExpr::symbol(to, e.span) : e;
    if (binds(e, from)) return e;
    SExpr out = e;
    for (auto& item : out.items) item = rename(item, from, to);
    return out;
  }

  SExpr program(const SExpr& p) {
    if (!p.is_list || p.items.empty() || !p[0].is_atom()) return p;
    const std::string& head = p[0].atom;
    Span sp = p.span;
    auto sym = [&](const char* s) { return SExpr::symbol(s, sp); };
    auto list = [&](std::vector<SExpr> items) { return SExpr::list(std::move(items), sp); };
    if (head == "if") {
      if (p.size() != 3 && p.size() != 4) {
        diags_.push_back({ErrorKind::SyntaxError, sp, "if takes a condition and one or two branches"});
        return p;
      }
      SExpr cond = p[1];
      SExpr then_branch = program(p[2]);
      SExpr else_branch = p.size() == 4 ? program(p[3]) : sym("nil");
      return list({sym("choice"), list({sym("seq"), list({sym("test"), cond}), then_branch}),
                   list({sym("seq"), list({sym("test"), list({sym("not"), cond})}), else_branch})});
    }
    if (head == "while") {
      if (p.size() != 3) {
        diags_.push_back({ErrorKind::SyntaxError, sp, "while takes a condition and a body"});
        return p;
      }
      SExpr cond = p[1];
      SExpr body = program(p[2]);
      return list({sym("seq"), list({sym("star"), list({sym("seq"), list({sym("test"), cond}), body})}),
                   list({sym("test"), list({sym("not"), cond})})});
    }
    if (head == "pick" && p.size() == 3) {
      SExpr binder = p[1];
      SExpr body = p[2];
      SExpr* name = is_var(binder) ? &binder : (binder.is_list && binder.size() == 2 && is_var(binder.items[0]))
                                                   ? &binder.items[0]
                                                   : nullptr;
      if (name) {
        std::string old = name->atom;
        std::string fresh = claim(old);
        if (fresh != old) {
          body = rename(body, old, fresh);
          name->atom = fresh;
        }
      }
      return list({p[0], binder, program(body)});
    }
    if (head == "seq" || head == "choice" || head == "conc" || head == "sync" || head == "star") {
      SExpr out = p;
      for (std::size_t i = 1; i < out.items.size(); ++i) out.items[i] = program(out.items[i]);
      return out;
    }
    return p;
  }

  std::vector<Diagnostic>& diags_;
  std::set<std::string> used_;
};

// ---------------------------------------------------------------------------

struct Abort {};

using Scope = std::vector<std::pair<std::string, int>>;

struct FormulaContext {
  std::optional<Theory> theory;  // fluents restricted to this theory
  bool allow_member = false;
  bool allow_labels = false;
};

class Builder {
 public:
  Builder(Signature& sig, std::vector<Diagnostic>& diags) : sig_(sig), diags_(diags) {}

  std::map<std::string, int> ctors;
  bool any_ctor = false;

  [[noreturn]] void fail(const SExpr& at, ErrorKind kind, std::string msg) {
    diags_.push_back({kind, at.span, std::move(msg)});
    throw Abort{};
  }
  void report(const SExpr& at, ErrorKind kind, std::string msg) { diags_.push_back({kind, at.span, std::move(msg)}); }

  const std::string& symbol(const SExpr& e, const char* what) {
    if (!e.is_atom()) fail(e, ErrorKind::SyntaxError, std::string("expected ") + what);
    return e.atom;
  }

  const SExpr& list(const SExpr& e, const char* what) {
    if (!e.is_list) fail(e, ErrorKind::SyntaxError, std::string("expected ") + what);
    return e;
  }

  void arity(const SExpr& e, std::size_t n, const char* what) {
    if (e.size() != n) fail(e, ErrorKind::SyntaxError, std::string(what) + " expects " + std::to_string(n - 1) + " argument(s)");
  }

  int sort(const SExpr& e) {
    const std::string& s = symbol(e, "sort name");
    if (s == "any") return kAnySort;
    int id = sig_.find_sort(s);
    if (id < 0) fail(e, ErrorKind::UndeclaredSymbol, "sort " + s);
    return id;
  }

  static std::string var_name(const SExpr& e) { return e.atom.substr(1); }

  int lookup(const Scope& sc, const SExpr& e) {
    std::string name = var_name(e);
    for (auto it = sc.rbegin(); it != sc.rend(); ++it)
      if (it->first == name) return it->second;
    fail(e, ErrorKind::UnboundVariable, e.atom);
  }

  Object constant(const SExpr& e) {
    const std::string& s = e.atom;
    if (s.size() > 1 && s[0] == '#' && is_number(s.substr(1))) return object_from_token(s);
    Object o = ObjectTable::global().find(s);
    if (!o.is_unset() && std::binary_search(sig_.constants().begin(), sig_.constants().end(), o)) return o;
    if (is_numeric_literal(s)) {
      o = ObjectTable::global().intern(s);
      sig_.add_constant(o);
      return o;
    }
    fail(e, ErrorKind::UndeclaredSymbol, "object " + s);
  }

  Term term(const SExpr& e, const Scope& sc) {
    if (e.is_atom()) {
      if (is_var(e)) return Term::variable(lookup(sc, e));
      return Term::constant_of(constant(e));
    }
    if (e.items.empty()) fail(e, ErrorKind::SyntaxError, "empty term");
    const std::string& name = symbol(e[0], "constructor name");
    auto it = ctors.find(name);
    if (it == ctors.end() && !any_ctor) fail(e[0], ErrorKind::UndeclaredSymbol, "constructor " + name);
    if (it != ctors.end() && static_cast<int>(e.size()) - 1 != it->second)
      fail(e, ErrorKind::ArityMismatch, "constructor " + name);
    std::vector<Term> args;
    for (std::size_t i = 1; i < e.size(); ++i) args.push_back(term(e[i], sc));
    return Term::constructed(name, std::move(args));
  }

  Object ground(const SExpr& e) {
    Term t = term(e, {});
    return eval_term(t, {});
  }

  std::vector<Term> terms(const SExpr& e, std::size_t from, const Scope& sc) {
    std::vector<Term> out;
    for (std::size_t i = from; i < e.size(); ++i) out.push_back(term(e[i], sc));
    return out;
  }

  int fluent(const SExpr& at, const std::string& name, std::size_t nargs, const FormulaContext& ctx) {
    int f = sig_.find_fluent(name);
    if (f < 0) fail(at, ErrorKind::UndeclaredSymbol, "fluent " + name);
    if (Signature::is_reserved(name) && !ctx.allow_labels)
      fail(at, ErrorKind::UndeclaredSymbol, name + " is a reserved labelling predicate");
    const FluentSchema& fs = sig_.fluent(f);
    if (fs.arg_sorts.size() != nargs) fail(at, ErrorKind::ArityMismatch, "fluent " + name);
    if (ctx.theory && !Signature::is_reserved(name) && fs.theory != *ctx.theory)
      fail(at, ErrorKind::InvalidProblem, "fluent " + name + " is not a " + std::string(to_string(*ctx.theory)) + " fluent");
    return f;
  }

  std::vector<int> binders(const SExpr& list_expr, Scope& sc) {
    std::vector<int> vars;
    for (const auto& b : list(list_expr, "binder list").items) {
      if (is_var(b)) {
        vars.push_back(sig_.add_var(var_name(b)));
      } else if (b.is_list && b.size() == 2 && is_var(b[0])) {
        vars.push_back(sig_.add_var(var_name(b[0]), sort(b[1])));
      } else {
        fail(b, ErrorKind::SyntaxError, "expected ?var or (?var sort)");
      }
      sc.push_back({sig_.var(vars.back()).name, vars.back()});
    }
    return vars;
  }

  Formula formula(const SExpr& e, Scope& sc, const FormulaContext& ctx) {
    if (e.is_atom()) {
      if (e.is("true")) return Formula::truth();
      if (e.is("false")) return Formula::falsity();
      if (is_var(e)) fail(e, ErrorKind::SyntaxError, "variable used as a formula");
      return Formula::atom(fluent(e, e.atom, 0, ctx), {});
    }
    if (e.items.empty()) fail(e, ErrorKind::SyntaxError, "empty formula");
    const std::string& head = symbol(e[0], "formula");
    auto kids = [&](std::size_t from) {
      std::vector<Formula> out;
      for (std::size_t i = from; i < e.size(); ++i) out.push_back(formula(e[i], sc, ctx));
      return out;
    };
    if (head == "not") {
      arity(e, 2, "not");
      return Formula::negate(formula(e[1], sc, ctx));
    }
    if (head == "and") return Formula::conj(kids(1));
    if (head == "or") return Formula::disj(kids(1));
    if (head == "implies") {
      arity(e, 3, "implies");
      auto k = kids(1);
      return Formula::implies(k[0], k[1]);
    }
    if (head == "iff") {
      arity(e, 3, "iff");
      auto k = kids(1);
      return Formula::conj({Formula::implies(k[0], k[1]), Formula::implies(k[1], k[0])});
    }
    if (head == "=" || head == "!=") {
      arity(e, 3, head.c_str());
      Formula f = Formula::equals(term(e[1], sc), term(e[2], sc));
      return head == "=" ? f : Formula::negate(f);
    }
    if (head == "exists" || head == "forall") {
      arity(e, 3, head.c_str());
      std::size_t mark = sc.size();
      std::vector<int> vars = binders(e[1], sc);
      Formula body = formula(e[2], sc, ctx);
      sc.resize(mark);
      return head == "exists" ? Formula::exists(std::move(vars), body) : Formula::forall(std::move(vars), body);
    }
    if (head == "in") {
      arity(e, 2, "in");
      if (!ctx.allow_member)
        fail(e, ErrorKind::MembershipOutsideActionContext, "membership atoms are only allowed in ssa and compound-poss");
      const SExpr& a = list(e[1], "(action args...)");
      if (a.items.empty()) fail(a, ErrorKind::SyntaxError, "empty action");
      int act = sig_.find_action(symbol(a[0], "action name"));
      if (act < 0) fail(a[0], ErrorKind::UndeclaredAction, a[0].atom);
      if (sig_.action(act).param_sorts.size() != a.size() - 1) fail(a, ErrorKind::ArityMismatch, "action " + a[0].atom);
      if (sig_.action(act).idle) fail(a, ErrorKind::InvalidProblem, "idle action " + a[0].atom + " in a membership atom");
      return Formula::member(act, terms(a, 1, sc));
    }
    int f = fluent(e[0], head, e.size() - 1, ctx);
    return Formula::atom(f, terms(e, 1, sc));
  }

  Signature& sig_;
  std::vector<Diagnostic>& diags_;
};

// ---------------------------------------------------------------------------

class Elaborator {
 public:
  Elaborator(const ProblemAst& ast, std::vector<Diagnostic>& diags)
      : ast_(ast), diags_(diags), p_(std::make_shared<Problem>()) {
    p_->name = ast.name;
    p_->sig = std::make_shared<Signature>();
    p_->pool = std::make_shared<ProgramPool>(p_->sig);
    b_.emplace(*p_->sig, diags_);
  }

  std::shared_ptr<Problem> run() {
    declarations();
    p_->labels = install_labelling_fluents(*p_->sig);
    initial_states();
    for (const auto& form : ast_.forms) guarded([&] { body(form); });
    finish();
    return p_;
  }

 private:
  Signature& sig() { return *p_->sig; }
  Builder& b() { return *b_; }

  template <class F>
  void guarded(F&& f) {
    try {
      f();
    } catch (const Abort&) {
    } catch (const ProblemErrors&) {
      throw;
    } catch (const Error& e) {
      diags_.push_back({e.kind(), current_, e.what()});
    }
  }

  void declarations() {
    std::set<std::string> idle;
    for (const auto& form : ast_.forms)
      if (form.headed("idle"))
        for (std::size_t i = 1; i < form.size(); ++i) idle.insert(form[i].atom);
    for (const auto& form : ast_.forms) {
      current_ = form.span;
      guarded([&] { declaration(form, idle); });
    }
    for (const auto& name : idle) {
      int a = sig().find_action(name);
      if (a < 0 || sig().action(a).theory != Theory::system)
        diags_.push_back({ErrorKind::UndeclaredSymbol, {}, "idle action " + name + " is not a declared system action"});
    }
  }

  void check_name(const SExpr& e) {
    if (Signature::is_reserved(e.atom))
      b().fail(e, ErrorKind::UndeclaredSymbol, e.atom + " is reserved for the arena labelling");
    if (e.atom.empty() || e.atom[0] == '?' || e.atom[0] == '#')
      b().fail(e, ErrorKind::SyntaxError, "invalid name " + e.atom);
  }

  Theory theory(const SExpr& e) {
    if (e.is("target")) return Theory::target;
    if (e.is("system")) return Theory::system;
    b().fail(e, ErrorKind::SyntaxError, "expected target or system");
  }

  void declaration(const SExpr& form, const std::set<std::string>& idle) {
    if (!form.is_list || form.items.empty() || !form[0].is_atom())
      b().fail(form, ErrorKind::SyntaxError, "expected a declaration");
    const std::string& head = form[0].atom;
    if (head == "sort") {
      if (form.size() != 3 && form.size() != 4) b().fail(form, ErrorKind::SyntaxError, "(sort name (members...) [open])");
      check_name(form[1]);
      if (sig().find_sort(form[1].atom) >= 0) b().fail(form[1], ErrorKind::InvalidProblem, "duplicate sort " + form[1].atom);
      Sort s;
      s.name = b().symbol(form[1], "sort name");
      for (const auto& m : b().list(form[2], "member list").items) {
        check_name(m);
        s.members.push_back(ObjectTable::global().intern(b().symbol(m, "object")));
      }
      if (form.size() == 4) {
        if (!form[3].is("open")) b().fail(form[3], ErrorKind::SyntaxError, "expected open");
        s.open = true;
      }
      sig().add_sort(std::move(s));
    } else if (head == "objects") {
      for (std::size_t i = 1; i < form.size(); ++i) {
        check_name(form[i]);
        sig().add_constant(ObjectTable::global().intern(b().symbol(form[i], "object")));
      }
    } else if (head == "ctor") {
      b().arity(form, 3, "ctor");
      if (!is_number(form[2].atom)) b().fail(form[2], ErrorKind::SyntaxError, "expected arity");
      b().ctors[b().symbol(form[1], "constructor")] = std::stoi(form[2].atom);
    } else if (head == "fluent") {
      if (form.size() < 4) b().fail(form, ErrorKind::SyntaxError, "(fluent theory name (sorts...) flags...)");
      FluentSchema f;
      f.theory = theory(form[1]);
      check_name(form[2]);
      f.name = form[2].atom;
      if (sig().find_fluent(f.name) >= 0) b().fail(form[2], ErrorKind::InvalidProblem, "duplicate fluent " + f.name);
      for (const auto& s : b().list(form[3], "sort list").items) f.arg_sorts.push_back(b().sort(s));
      for (std::size_t i = 4; i < form.size(); ++i) {
        if (form[i].is("observable"))
          f.observable = true;
        else if (form[i].is("rigid"))
          f.situation_dependent = false;
        else
          b().fail(form[i], ErrorKind::SyntaxError, "unknown fluent flag " + to_text(form[i]));
      }
      if (f.observable && f.theory != Theory::target)
        b().fail(form, ErrorKind::InvalidProblem, "only target fluents can be observable");
      sig().add_fluent(std::move(f));
    } else if (head == "action") {
      b().arity(form, 4, "action");
      ActionSchema a;
      a.theory = theory(form[1]);
      check_name(form[2]);
      a.name = form[2].atom;
      if (sig().find_action(a.name) >= 0) b().fail(form[2], ErrorKind::InvalidProblem, "duplicate action " + a.name);
      for (const auto& s : b().list(form[3], "sort list").items) a.param_sorts.push_back(b().sort(s));
      a.idle = idle.contains(a.name);
      sig().add_action(std::move(a));
    } else if (head == "config") {
      for (std::size_t i = 1; i < form.size(); ++i) config(form[i]);
    }
  }

  void config(const SExpr& e) {
    if (!e.is_list || e.size() != 2 || !e[0].is_atom() || !e[1].is_atom())
      b().fail(e, ErrorKind::SyntaxError, "expected (key value)");
    const std::string& key = e[0].atom;
    const std::string& value = e[1].atom;
    SynthesisConfig& c = p_->config;
    if (key == "bound" && is_number(value))
      c.bound = std::stoul(value);
    else if (key == "anon-pool" && is_number(value))
      c.anon_pool = std::stoi(value);
    else if (key == "strict-obs" && (value == "true" || value == "false"))
      c.strict_obs = value == "true";
    else
      b().fail(e, ErrorKind::SyntaxError, "unknown config entry " + to_text(e));
  }

  void initial_states() {
    std::vector<std::vector<Tuple>> target(sig().fluent_count()), system(sig().fluent_count());
    auto rigid = std::make_shared<RigidFacts>();
    rigid->rigid.resize(sig().fluent_count());
    rigid->ext.resize(sig().fluent_count());
    for (std::size_t f = 0; f < sig().fluent_count(); ++f)
      rigid->rigid[f] = !sig().fluent(static_cast<int>(f)).situation_dependent;
    for (const auto& form : ast_.forms) {
      if (!form.headed("init")) continue;
      current_ = form.span;
      guarded([&] {
        if (form.size() < 2) b().fail(form, ErrorKind::SyntaxError, "(init theory facts...)");
        Theory th = theory(form[1]);
        for (std::size_t i = 2; i < form.size(); ++i) {
          guarded([&] {
            const SExpr& fact = form[i];
            FormulaContext ctx;
            ctx.theory = th;
            std::string name = fact.is_list && !fact.items.empty() ? b().symbol(fact[0], "fluent") : fact.atom;
            int f = b().fluent(fact, name, fact.is_list ? fact.size() - 1 : 0, ctx);
            Tuple t;
            if (fact.is_list)
              for (std::size_t k = 1; k < fact.size(); ++k) t.push_back(b().ground(fact[k]));
            if (rigid->rigid[f]) {
              rigid->ext[f].push_back(t);
            } else {
              (th == Theory::target ? target : system)[f].push_back(t);
            }
          });
        }
      });
    }
    for (auto& ext : rigid->ext) {
      std::sort(ext.begin(), ext.end());
      ext.erase(std::unique(ext.begin(), ext.end()), ext.end());
    }
    p_->rigid = rigid;
    p_->target_theory = std::make_shared<BasicActionTheory>(Theory::target, p_->sig);
    p_->system_theory = std::make_shared<BasicActionTheory>(Theory::system, p_->sig);
    WorldState wt(rigid), ws(rigid);
    for (std::size_t f = 0; f < sig().fluent_count(); ++f) {
      if (rigid->rigid[f]) continue;
      wt.set_extension(static_cast<int>(f), std::move(target[f]));
      ws.set_extension(static_cast<int>(f), std::move(system[f]));
    }
    p_->target_theory->set_initial(std::move(wt));
    p_->system_theory->set_initial(std::move(ws));
  }

  BasicActionTheory& bat(Theory t) { return t == Theory::target ? *p_->target_theory : *p_->system_theory; }

  int action_id(const SExpr& e) {
    int a = sig().find_action(b().symbol(e, "action name"));
    if (a < 0) b().fail(e, ErrorKind::UndeclaredAction, e.atom);
    return a;
  }

  // Parameters of a head (name ?x ...) as variables with the given sorts;
  // repeated names share one variable.
  std::vector<int> params(const SExpr& head, const std::vector<int>& sorts, Scope& sc, bool allow_constants = false) {
    if (head.size() - 1 != sorts.size()) b().fail(head, ErrorKind::ArityMismatch, to_text(head[0]));
    std::vector<int> out;
    for (std::size_t i = 1; i < head.size(); ++i) {
      const SExpr& x = head[i];
      if (!is_var(x)) {
        if (allow_constants) {
          out.push_back(-1);
          continue;
        }
        b().fail(x, ErrorKind::SyntaxError, "expected a parameter variable");
      }
      std::string name = Builder::var_name(x);
      auto it = std::find_if(sc.begin(), sc.end(), [&](const auto& e) { return e.first == name; });
      if (it != sc.end()) {
        out.push_back(it->second);
        continue;
      }
      int v = sig().add_var(name, sorts[i - 1]);
      sc.push_back({name, v});
      out.push_back(v);
    }
    return out;
  }

  void body(const SExpr& form) {
    current_ = form.span;
    const std::string& head = form[0].atom;
    if (head == "poss") {
      b().arity(form, 3, "poss");
      const SExpr& h = b().list(form[1], "(action ?params...)");
      if (h.items.empty()) b().fail(h, ErrorKind::SyntaxError, "empty head");
      int a = action_id(h[0]);
      const ActionSchema& as = sig().action(a);
      Scope sc;
      PossAxiom ax;
      ax.params = params(h, as.param_sorts, sc);
      FormulaContext ctx;
      ctx.theory = as.theory;
      ax.body = b().formula(form[2], sc, ctx);
      if (bat(as.theory).poss_axiom(a)) b().fail(form, ErrorKind::InvalidProblem, "second poss axiom for " + as.name);
      bat(as.theory).set_poss(a, std::move(ax));
    } else if (head == "compound-poss") {
      b().arity(form, 3, "compound-poss");
      Scope sc;
      CompoundPossAxiom ax;
      std::optional<Theory> th;
      for (const auto& pat : b().list(form[1], "pattern list").items) {
        const SExpr& pa = b().list(pat, "(action args...)");
        if (pa.items.empty()) b().fail(pa, ErrorKind::SyntaxError, "empty pattern");
        int a = action_id(pa[0]);
        const ActionSchema& as = sig().action(a);
        if (th && *th != as.theory) b().fail(pa, ErrorKind::InvalidProblem, "pattern mixes theories");
        th = as.theory;
        params(pa, as.param_sorts, sc, true);
        ActionPattern ap;
        ap.action = a;
        ap.args = b().terms(pa, 1, sc);
        ax.pattern.push_back(std::move(ap));
      }
      if (!th) b().fail(form, ErrorKind::SyntaxError, "empty pattern list");
      FormulaContext ctx;
      ctx.theory = th;
      ctx.allow_member = true;
      ax.body = b().formula(form[2], sc, ctx);
      bat(*th).add_compound_poss(std::move(ax));
    } else if (head == "ssa") {
      if (form.size() < 2) b().fail(form, ErrorKind::SyntaxError, "(ssa (fluent ?params...) (pos f) (neg f))");
      const SExpr& h = b().list(form[1], "(fluent ?params...)");
      if (h.items.empty()) b().fail(h, ErrorKind::SyntaxError, "empty head");
      int f = sig().find_fluent(b().symbol(h[0], "fluent"));
      if (f < 0 || Signature::is_reserved(h[0].atom)) b().fail(h[0], ErrorKind::UndeclaredSymbol, "fluent " + h[0].atom);
      const FluentSchema& fs = sig().fluent(f);
      if (!fs.situation_dependent) b().fail(h[0], ErrorKind::InvalidProblem, "rigid fluent " + fs.name + " has an ssa");
      Scope sc;
      SuccessorStateAxiom ax;
      ax.params = params(h, fs.arg_sorts, sc);
      ax.pos = Formula::falsity();
      ax.neg = Formula::falsity();
      FormulaContext ctx;
      ctx.theory = fs.theory;
      ctx.allow_member = true;
      for (std::size_t i = 2; i < form.size(); ++i) {
        const SExpr& part = form[i];
        if (!(part.headed("pos") || part.headed("neg")) || part.size() != 2)
          b().fail(part, ErrorKind::SyntaxError, "expected (pos formula) or (neg formula)");
        Scope local = sc;
        Formula g = b().formula(part[1], local, ctx);
        (part.headed("pos") ? ax.pos : ax.neg) = g;
      }
      if (bat(fs.theory).ssa(f)) b().fail(form, ErrorKind::InvalidProblem, "second ssa for " + fs.name);
      bat(fs.theory).set_ssa(f, std::move(ax));
    } else if (head == "resource") {
      b().arity(form, 3, "resource");
      Scope sc;
      int prog = program(form[2], sc, Theory::system);
      p_->resources.push_back(prog);
      resource_names_.push_back(b().symbol(form[1], "resource name"));
    } else if (head == "target") {
      b().arity(form, 2, "target");
      if (p_->target_program >= 0) b().fail(form, ErrorKind::InvalidProblem, "second target program");
      Scope sc;
      target_actions_.clear();
      collecting_targets_ = true;
      p_->target_program = program(form[1], sc, Theory::target);
      collecting_targets_ = false;
      target_span_ = form.span;
    } else if (head == "map") {
      b().arity(form, 3, "map");
      const SExpr& h = b().list(form[1], "(action ?params...)");
      if (h.items.empty()) b().fail(h, ErrorKind::SyntaxError, "empty head");
      int a = action_id(h[0]);
      const ActionSchema& as = sig().action(a);
      if (as.theory != Theory::target) b().fail(h[0], ErrorKind::InvalidProblem, as.name + " is not a target action");
      if (p_->mappings.action(a)) b().fail(form, ErrorKind::InvalidProblem, "second mapping for " + as.name);
      Scope sc;
      ActionMapping m;
      m.target_action = a;
      m.params = params(h, as.param_sorts, sc);
      m.body = program(form[2], sc, Theory::system);
      for (auto v : m.params)
        if (!std::binary_search(p_->pool->node(m.body).free_vars.begin(), p_->pool->node(m.body).free_vars.end(), v))
          p_->warnings.push_back("FreeVariableWarning: parameter ?" + sig().var(v).name + " of the mapping for " +
                                 as.name + " is unused");
      p_->mappings.add_action(std::move(m));
    } else if (head == "obs") {
      b().arity(form, 3, "obs");
      const SExpr& h = b().list(form[1], "(fluent ?params...)");
      if (h.items.empty()) b().fail(h, ErrorKind::SyntaxError, "empty head");
      int f = sig().find_fluent(b().symbol(h[0], "fluent"));
      if (f < 0) b().fail(h[0], ErrorKind::UndeclaredSymbol, "fluent " + h[0].atom);
      const FluentSchema& fs = sig().fluent(f);
      if (!fs.observable) b().fail(h[0], ErrorKind::InvalidProblem, fs.name + " is not observable");
      if (p_->mappings.observation(f)) b().fail(form, ErrorKind::InvalidProblem, "second obs mapping for " + fs.name);
      Scope sc;
      ObservationMapping m;
      m.fluent = f;
      m.params = params(h, fs.arg_sorts, sc);
      FormulaContext ctx;
      ctx.theory = Theory::system;
      m.defining = b().formula(form[2], sc, ctx);
      p_->mappings.add_observation(std::move(m));
    } else if (head == "sort" || head == "objects" || head == "ctor" || head == "fluent" || head == "action" ||
               head == "idle" || head == "config" || head == "init") {
      return;
    } else {
      b().fail(form[0], ErrorKind::SyntaxError, "unknown section " + head);
    }
  }

  int infer_sort(const SExpr& body, const std::string& var) {
    if (!body.is_list || body.items.empty()) return kAnySort;
    if (body[0].is_atom() && !body.headed("test")) {
      int a = sig().find_action(body[0].atom);
      if (a >= 0)
        for (std::size_t i = 1; i < body.size(); ++i)
          if (body[i].is(var) && i - 1 < sig().action(a).param_sorts.size()) return sig().action(a).param_sorts[i - 1];
    }
    if (body.headed("test")) return kAnySort;
    for (const auto& item : body.items) {
      int s = infer_sort(item, var);
      if (s != kAnySort) return s;
    }
    return kAnySort;
  }

  ActionTerm action_term(const SExpr& e, const Scope& sc, Theory th) {
    const SExpr& name = e.is_list ? e[0] : e;
    int a = action_id(name);
    const ActionSchema& as = sig().action(a);
    if (as.theory != th)
      b().fail(name, ErrorKind::InvalidProblem, as.name + " is not a " + std::string(to_string(th)) + " action");
    std::size_t nargs = e.is_list ? e.size() - 1 : 0;
    if (nargs != as.param_sorts.size()) b().fail(e, ErrorKind::ArityMismatch, "action " + as.name);
    if (collecting_targets_) target_actions_.insert(a);
    ActionTerm t;
    t.action = a;
    if (e.is_list) t.args = b().terms(e, 1, sc);
    return t;
  }

  int program(const SExpr& e, Scope& sc, Theory th) {
    ProgramPool& pool = *p_->pool;
    if (e.is_atom()) {
      if (e.is("nil")) return pool.nil();
      return pool.action({action_term(e, sc, th)});
    }
    if (e.items.empty()) b().fail(e, ErrorKind::SyntaxError, "empty program");
    const std::string& head = b().symbol(e[0], "program");
    auto fold = [&](int (ProgramPool::*op)(int, int)) {
      if (e.size() < 2) b().fail(e, ErrorKind::SyntaxError, head + " needs at least one program");
      std::vector<int> kids;
      for (std::size_t i = 1; i < e.size(); ++i) kids.push_back(program(e[i], sc, th));
      int acc = kids.back();
      for (std::size_t i = kids.size() - 1; i-- > 0;) acc = (pool.*op)(kids[i], acc);
      return acc;
    };
    if (head == "seq") return fold(&ProgramPool::seq);
    if (head == "choice") return fold(&ProgramPool::choice);
    if (head == "conc") return fold(&ProgramPool::conc);
    if (head == "sync") return fold(&ProgramPool::sync);
    if (head == "star") {
      b().arity(e, 2, "star");
      return pool.star(program(e[1], sc, th));
    }
    if (head == "test") {
      b().arity(e, 2, "test");
      FormulaContext ctx;
      ctx.theory = th;
      return pool.test(b().formula(e[1], sc, ctx));
    }
    if (head == "pick") {
      b().arity(e, 3, "pick");
      const SExpr& binder = e[1];
      int v;
      if (is_var(binder)) {
        v = sig().add_var(Builder::var_name(binder), infer_sort(e[2], binder.atom));
      } else if (binder.is_list && binder.size() == 2 && is_var(binder[0])) {
        v = sig().add_var(Builder::var_name(binder[0]), b().sort(binder[1]));
      } else {
        b().fail(binder, ErrorKind::SyntaxError, "expected ?var or (?var sort)");
      }
      sc.push_back({sig().var(v).name, v});
      int body = program(e[2], sc, th);
      sc.pop_back();
      const auto& fv = pool.node(body).free_vars;
      if (!std::binary_search(fv.begin(), fv.end(), v))
        p_->warnings.push_back("FreeVariableWarning: pick variable ?" + sig().var(v).name + " is unused");
      return pool.pick(v, body);
    }
    if (head == "compound") {
      std::vector<ActionTerm> acts;
      for (std::size_t i = 1; i < e.size(); ++i) acts.push_back(action_term(e[i], sc, th));
      if (acts.empty()) b().fail(e, ErrorKind::SyntaxError, "empty compound action");
      return pool.action(std::move(acts));
    }
    if (head == "if" || head == "while") b().fail(e, ErrorKind::SyntaxError, "malformed " + head);
    return pool.action({action_term(e, sc, th)});
  }

  void finish() {
    if (p_->target_program < 0) diags_.push_back({ErrorKind::InvalidProblem, {}, "missing target program"});
    if (p_->resources.empty()) diags_.push_back({ErrorKind::InvalidProblem, {}, "no resource programs"});
    for (int a : target_actions_)
      if (!p_->mappings.action(a))
        diags_.push_back({ErrorKind::NoMappingForAction, target_span_, "target action " + sig().action(a).name});
    for (std::size_t f = 0; f < sig().fluent_count(); ++f) {
      const FluentSchema& fs = sig().fluent(static_cast<int>(f));
      if (fs.observable && !p_->mappings.observation(static_cast<int>(f)))
        diags_.push_back({ErrorKind::UnmappedObservableFluent, {}, fs.name});
    }
    if (!p_->resources.empty()) {
      int acc = p_->resources.back();
      for (std::size_t i = p_->resources.size() - 1; i-- > 0;) acc = p_->pool->sync(p_->resources[i], acc);
      p_->system_program = acc;
    }
  }

  const ProblemAst& ast_;
  std::vector<Diagnostic>& diags_;
  std::shared_ptr<Problem> p_;
  std::optional<Builder> b_;
  Span current_;
  std::vector<std::string> resource_names_;
  std::set<int> target_actions_;
  bool collecting_targets_ = false;
  Span target_span_;
};

std::string fnv_digest(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

ProblemAst parse_ast(std::string_view text, std::string_view origin) {
  std::vector<Diagnostic> diags;
  std::vector<SExpr> top = read_sexprs(text, diags);
  ProblemAst ast;
  if (diags.empty()) {
    if (top.size() != 1 || !top[0].headed("problem") || top[0].size() < 2 || !top[0][1].is_atom())
      diags.push_back({ErrorKind::SyntaxError, top.empty() ? Span{1, 1} : top[0].span,
                       "expected a single (problem name ...) form"});
  }
  if (!diags.empty()) throw ProblemErrors(std::move(diags), origin);
  ast.name = top[0][1].atom;
  Normalizer norm(diags);
  for (std::size_t i = 2; i < top[0].size(); ++i) {
    const SExpr& form = top[0][i];
    if (!form.is_list || form.items.empty() || !form[0].is_atom()) {
      diags.push_back({ErrorKind::SyntaxError, form.span, "expected a section"});
      continue;
    }
    ast.forms.push_back(norm.top(form));
  }
  if (!diags.empty()) throw ProblemErrors(std::move(diags), origin);
  return ast;
}

std::string print(const ProblemAst& ast) {
  std::string out = "(problem " + ast.name;
  for (const auto& f : ast.forms) {
    std::string p = pretty(f, 98);
    std::string indented;
    for (char c : p) {
      indented += c;
      if (c == '\n') indented += "  ";
    }
    out += "\n  " + indented;
  }
  return out + ")\n";
}

std::shared_ptr<Problem> elaborate(const ProblemAst& ast, std::string_view origin) {
  std::vector<Diagnostic> diags;
  Elaborator e(ast, diags);
  auto p = e.run();
  if (!diags.empty()) throw ProblemErrors(std::move(diags), origin);
  p->digest = fnv_digest(print(ast));
  return p;
}

std::shared_ptr<Problem> parse_problem(std::string_view text, std::string_view origin) {
  return elaborate(parse_ast(text, origin), origin);
}

std::shared_ptr<Problem> load_problem(const std::string& path) { return parse_problem(read_file(path), path); }

namespace {

MuFormula mu_rec(const SExpr& e, Builder& b, std::vector<std::string>& bound) {
  auto is_bound = [&](const std::string& s) { return std::find(bound.begin(), bound.end(), s) != bound.end(); };
  if (e.is_atom() && (is_bound(e.atom) || (!e.atom.empty() && std::isupper(static_cast<unsigned char>(e.atom[0])) &&
                                            b.sig_.find_fluent(e.atom) < 0)))
    return MuFormula::var(e.atom);
  if (e.is_list && !e.items.empty() && e[0].is_atom()) {
    const std::string& h = e[0].atom;
    if (h == "mu" || h == "nu") {
      b.arity(e, 3, h.c_str());
      std::string name = b.symbol(e[1], "fixpoint variable");
      bound.push_back(name);
      MuFormula body = mu_rec(e[2], b, bound);
      bound.pop_back();
      return h == "mu" ? MuFormula::mu(name, body) : MuFormula::nu(name, body);
    }
    if (h == "diamond" || h == "box") {
      b.arity(e, 2, h.c_str());
      MuFormula k = mu_rec(e[1], b, bound);
      return h == "diamond" ? MuFormula::diamond(k) : MuFormula::box(k);
    }
    if (h == "not") {
      b.arity(e, 2, "not");
      return MuFormula::negate(mu_rec(e[1], b, bound));
    }
    if ((h == "and" || h == "or") && e.size() >= 2) {
      MuFormula acc = mu_rec(e.items.back(), b, bound);
      for (std::size_t i = e.size() - 1; i-- > 1;) {
        MuFormula k = mu_rec(e[i], b, bound);
        acc = h == "and" ? MuFormula::conj(k, acc) : MuFormula::disj(k, acc);
      }
      return acc;
    }
  }
  Scope sc;
  FormulaContext ctx;
  ctx.allow_labels = true;
  return MuFormula::fo(b.formula(e, sc, ctx));
}

}  // namespace

MuFormula parse_mu(std::string_view text, Problem& problem) {
  std::vector<Diagnostic> diags;
  auto top = read_sexprs(text, diags);
  if (diags.empty() && top.size() != 1) diags.push_back({ErrorKind::SyntaxError, {1, 1}, "expected one formula"});
  if (!diags.empty()) throw ProblemErrors(std::move(diags), "<formula>");
  Builder b(*problem.sig, diags);
  b.any_ctor = true;
  std::vector<std::string> bound;
  try {
    return mu_rec(top[0], b, bound);
  } catch (const Abort&) {
    throw ProblemErrors(std::move(diags), "<formula>");
  }
}

}  // namespace golsynth
