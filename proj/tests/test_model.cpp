#include <doctest.h>

#include "golsynth/frontend.hpp"
#include "support.hpp"

using namespace golsynth;

namespace {

GroundAction act(const Problem& p, const char* name, std::vector<const char*> args) {
  GroundAction g{p.sig->find_action(name), {}};
  for (auto a : args) g.args.push_back(ObjectTable::global().intern(a));
  return g;
}

const char* kJoint = R"(
(problem joint
  (sort obj (o1 o2))
  (sort slot (1 2))
  (fluent system P (obj))
  (fluent system busy ())
  (action system a (obj)) (action system b (obj)) (action system c ())
  (action system nop (slot)) (idle nop)
  (poss (b ?x) (P ?x))
  (compound-poss ((a ?x) (b ?y)) (!= ?x ?y))
  (compound-poss ((a ?x)) (not busy))
  (ssa (P ?x) (pos (in (a ?x))) (neg (in (b ?x))))
  (ssa (busy) (pos (in (c))))
  (init system (P o2))
  (resource R1 nil)
  (target nil)))";

}  // namespace

TEST_CASE("simple preconditions and progression") {
  auto p = testing::bundled("micro.gsp");
  const auto& bat = *p->system_theory;
  WorldState w = bat.initial();
  CHECK(bat.poss_simple(act(*p, "a1", {"p"}), w));
  CHECK_FALSE(bat.poss_simple(act(*p, "a2", {"p"}), w));
  WorldState w1 = bat.progress(CompoundAction({act(*p, "a1", {"p"})}), w);
  CHECK(world_text(w1, *p->sig) == "(done1 p)");
  CHECK(bat.poss_simple(act(*p, "a2", {"p"}), w1));
  WorldState w2 = bat.progress(CompoundAction({act(*p, "a2", {"p"}), act(*p, "nop", {"1"})}), w1);
  CHECK(world_text(w2, *p->sig) == "(done1 p) (done2 p)");
  CHECK(active_domain(w2).size() == 1);
}

TEST_CASE("the first matching compound axiom decides") {
  auto p = parse_problem(kJoint);
  const auto& bat = *p->system_theory;
  WorldState w = bat.initial();
  // {a(o1), b(o2)}: first axiom matches, o1 != o2
  CHECK(bat.poss_compound(CompoundAction({act(*p, "a", {"o1"}), act(*p, "b", {"o2"})}), w));
  // {a(o2), b(o2)}: first axiom fails and the second is not consulted
  CHECK_FALSE(bat.poss_compound(CompoundAction({act(*p, "a", {"o2"}), act(*p, "b", {"o2"})}), w));
  // {a(o1)} alone: second axiom
  CHECK(bat.poss_compound(CompoundAction({act(*p, "a", {"o1"})}), w));
  WorldState busy = bat.progress(CompoundAction({act(*p, "c", {})}), w);
  CHECK_FALSE(bat.poss_compound(CompoundAction({act(*p, "a", {"o1"})}), busy));
  // idle members are ignored when matching
  CHECK(bat.poss_compound(CompoundAction({act(*p, "a", {"o1"}), act(*p, "nop", {"1"})}), w));
  // simple preconditions still apply to every member
  CHECK_FALSE(bat.poss_compound(CompoundAction({act(*p, "b", {"o1"})}), w));
}

TEST_CASE("joint effects follow the successor-state axioms") {
  auto p = parse_problem(kJoint);
  const auto& bat = *p->system_theory;
  WorldState w = bat.initial();
  WorldState w1 = bat.progress(CompoundAction({act(*p, "a", {"o1"}), act(*p, "b", {"o2"})}), w);
  CHECK(world_text(w1, *p->sig) == "(P o1)");
  CHECK(w1 == bat.progress(CompoundAction({act(*p, "b", {"o2"}), act(*p, "a", {"o1"})}), w));
  CHECK(w1.hash() == bat.progress(CompoundAction({act(*p, "a", {"o1"}), act(*p, "b", {"o2"})}), w).hash());
}

TEST_CASE("malformed ground actions are rejected") {
  auto p = parse_problem(kJoint);
  GroundAction bad{p->sig->find_action("a"), {}};
  try {
    p->system_theory->check_action(bad);
    FAIL("expected ArityMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ArityMismatch);
  }
}

TEST_CASE("worlds rename and compare by value") {
  auto p = parse_problem(R"(
(problem anon
  (sort part () open)
  (fluent system held (part))
  (action system grab (part))
  (init system (held #0) (held #1))
  (resource R1 nil)
  (target nil)))");
  WorldState w = p->system_theory->initial();
  WorldState swapped = w.renamed([](Object o) {
    if (o == anonymous(0)) return anonymous(1);
    if (o == anonymous(1)) return anonymous(0);
    return o;
  });
  CHECK(swapped == w);
  WorldState shifted = w.renamed([](Object o) { return o.is_anonymous() ? anonymous(o.anon_index() + 5) : o; });
  CHECK_FALSE(shifted == w);
  CHECK(world_text(shifted, *p->sig) == "(held #5) (held #6)");
}
