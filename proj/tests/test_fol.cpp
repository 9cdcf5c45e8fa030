#include <doctest.h>

#include <set>

#include "golsynth/model.hpp"

using namespace golsynth;

namespace {

struct Fixture {
  std::shared_ptr<Signature> sig = std::make_shared<Signature>();
  Object o1 = ObjectTable::global().intern("o1");
  Object o2 = ObjectTable::global().intern("o2");
  Object o3 = ObjectTable::global().intern("o3");
  int obj = -1, P = -1, act = -1, x = -1, y = -1;
  std::shared_ptr<RigidFacts> rigid = std::make_shared<RigidFacts>();

  Fixture() {
    Sort s;
    s.name = "obj";
    s.members = {o1, o2, o3};
    std::sort(s.members.begin(), s.members.end());
    obj = sig->add_sort(s);
    P = sig->add_fluent({"P", {obj}, true, false, Theory::system});
    act = sig->add_action({"a", {obj}, Theory::system, false});
    x = sig->add_var("x", obj);
    y = sig->add_var("y", obj);
    rigid->rigid = {0};
    rigid->ext.resize(1);
  }

  WorldState world(std::vector<Object> ps) const {
    WorldState w(rigid);
    std::vector<Tuple> ext;
    for (auto o : ps) ext.push_back({o});
    w.set_extension(P, ext);
    return w;
  }

  Formula p(int v) const { return Formula::atom(P, {Term::variable(v)}); }
};

}  // namespace

TEST_CASE("quantifiers range over the sort") {
  Fixture f;
  WorldState w = f.world({f.o1, f.o2});
  EvalContext ctx(*f.sig, w);
  CHECK(eval(Formula::exists({f.x}, f.p(f.x)), ctx));
  CHECK_FALSE(eval(Formula::forall({f.x}, f.p(f.x)), ctx));
  Formula two = Formula::exists({f.x, f.y}, Formula::conj({f.p(f.x), f.p(f.y), Formula::negate(Formula::equals(
                                                                                   Term::variable(f.x), Term::variable(f.y)))}));
  CHECK(eval(two, ctx));
  WorldState one = f.world({f.o3});
  EvalContext ctx1(*f.sig, one);
  CHECK_FALSE(eval(two, ctx1));
}

TEST_CASE("negated_nnf is the negation") {
  Fixture f;
  std::vector<Formula> fs{
      f.p(f.x),
      Formula::exists({f.y}, Formula::conj({f.p(f.y), Formula::negate(Formula::equals(Term::variable(f.x), Term::variable(f.y)))})),
      Formula::implies(f.p(f.x), Formula::forall({f.y}, f.p(f.y))),
      Formula::disj({Formula::falsity(), Formula::negate(f.p(f.x))}),
  };
  for (auto ext : {std::vector<Object>{}, {f.o1}, {f.o1, f.o3}, {f.o1, f.o2, f.o3}}) {
    WorldState w = f.world(ext);
    EvalContext ctx(*f.sig, w);
    for (const auto& g : fs)
      for (Object o : {f.o1, f.o2, f.o3}) {
        Binding b(f.sig->var_count(), kUnset);
        b[f.x] = o;
        bool v = eval(g, ctx, b);
        CHECK(eval(negated_nnf(g), ctx, b) == !v);
      }
  }
}

TEST_CASE("solve enumerates satisfying assignments") {
  Fixture f;
  WorldState w = f.world({f.o1});
  EvalContext ctx(*f.sig, w);
  Formula g = Formula::disj({f.p(f.x), Formula::equals(Term::variable(f.x), Term::constant_of(f.o3))});
  Binding b(f.sig->var_count(), kUnset);
  std::set<Object> seen;
  solve(g, ctx, b, [&] {
    seen.insert(b[f.x]);
    return true;
  });
  CHECK(seen == std::set<Object>{f.o1, f.o3});
  CHECK(b[f.x].is_unset());
}

TEST_CASE("substitution avoids capture") {
  Fixture f;
  // exists y. P(y) and x != y, then x := y
  Formula g = Formula::exists(
      {f.y}, Formula::conj({f.p(f.y), Formula::negate(Formula::equals(Term::variable(f.x), Term::variable(f.y)))}));
  Formula h = substitute(g, {{f.x, Term::variable(f.y)}}, *f.sig);
  REQUIRE(h.free_vars() == std::vector<int>{f.y});
  WorldState w = f.world({f.o1, f.o2});
  EvalContext ctx(*f.sig, w);
  Binding b(f.sig->var_count(), kUnset);
  b[f.y] = f.o1;
  CHECK(eval(h, ctx, b));
}

TEST_CASE("membership atoms need an action") {
  Fixture f;
  WorldState w = f.world({});
  Formula m = Formula::member(f.act, {Term::variable(f.x)});
  EvalContext bare(*f.sig, w);
  Binding b(f.sig->var_count(), kUnset);
  b[f.x] = f.o1;
  CHECK_THROWS_AS(eval(m, bare, b), Error);
  CompoundAction a({GroundAction{f.act, {f.o2}}});
  EvalContext with(*f.sig, w, &a);
  Binding c(f.sig->var_count(), kUnset);
  std::vector<Object> hits;
  solve(m, with, c, [&] {
    hits.push_back(c[f.x]);
    return true;
  });
  CHECK(hits == std::vector<Object>{f.o2});
  try {
    eval(m, bare, b);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MembershipOutsideActionContext);
  }
}

TEST_CASE("unbound variables are reported") {
  Fixture f;
  Binding b(f.sig->var_count(), kUnset);
  try {
    eval_term(Term::variable(f.x), b);
    FAIL("expected UnboundVariable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundVariable);
  }
}

TEST_CASE("formulas print readably") {
  Fixture f;
  Formula g = Formula::exists({f.x}, f.p(f.x));
  std::string s = to_string(g, *f.sig);
  CHECK(s.find("P") != std::string::npos);
  CHECK(s.find("exists") != std::string::npos);
  CHECK(Formula::conj({f.p(f.x)}) == Formula::conj({f.p(f.x)}));
}
