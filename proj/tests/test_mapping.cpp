#include <doctest.h>

#include "support.hpp"

using namespace golsynth;

namespace {

GroundAction ground(const Problem& p, const char* name, std::vector<Object> args) {
  return GroundAction{p.sig->find_action(name), std::move(args)};
}

std::shared_ptr<Problem> parts() { return testing::bundled("parts.gsp"); }

}  // namespace

TEST_CASE("lookup binds the mapping parameters") {
  auto p = testing::bundled("micro.gsp");
  Object part = ObjectTable::global().intern("p");
  auto [body, env] = p->mappings.lookup(CompoundAction({ground(*p, "A", {part})}), *p->pool);
  CHECK(body == p->mappings.action(p->sig->find_action("A"))->body);
  REQUIRE(env.size() == 1);
  CHECK(env[0].second == part);
  CHECK(p->pool->text(body) == "(seq (a1 ?p) (a2 ?p))");
}

TEST_CASE("unmapped or compound target actions have no mapping") {
  auto p = parts();
  auto expect = [&](const CompoundAction& a) {
    try {
      p->mappings.lookup(a, *p->pool);
      FAIL("expected NoMappingForAction");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NoMappingForAction);
    }
  };
  expect(CompoundAction({ground(*p, "grab", {anonymous(0)})}));
  expect(CompoundAction({ground(*p, "Proc", {anonymous(0)}), ground(*p, "Proc", {anonymous(1)})}));
}

TEST_CASE("observable fluents are read through the system world") {
  auto p = parts();
  int tlast = p->sig->find_fluent("tlast");
  WorldState target = p->target_theory->progress(CompoundAction({ground(*p, "Proc", {anonymous(0)})}),
                                                 p->target_theory->initial());
  WorldState system = p->system_theory->progress(CompoundAction({ground(*p, "work", {anonymous(1)})}),
                                                 p->system_theory->initial());
  CHECK(target.holds(tlast, {anonymous(0)}));
  ObsView view(*p->sig, p->mappings, target, system);
  CHECK(view.holds(tlast, {anonymous(1)}));
  CHECK_FALSE(view.holds(tlast, {anonymous(0)}));
  CHECK(view.observed(tlast) == std::vector<Tuple>{{anonymous(1)}});
  CHECK(view.holds(p->sig->find_fluent("last"), {anonymous(1)}));

  MappingTable empty;
  ObsView bare(*p->sig, empty, target, system);
  try {
    bare.holds(tlast, {anonymous(1)});
    FAIL("expected UnmappedObservableFluent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnmappedObservableFluent);
  }
}

TEST_CASE("joint view keeps each theory's own fluents") {
  auto p = parts();
  int tlast = p->sig->find_fluent("tlast");
  WorldState target = p->target_theory->progress(CompoundAction({ground(*p, "Proc", {anonymous(0)})}),
                                                 p->target_theory->initial());
  WorldState system = p->system_theory->progress(CompoundAction({ground(*p, "work", {anonymous(1)})}),
                                                 p->system_theory->initial());
  JointView view(*p->sig, target, system);
  CHECK(view.holds(tlast, {anonymous(0)}));
  CHECK_FALSE(view.holds(tlast, {anonymous(1)}));
  CHECK(view.holds(p->sig->find_fluent("last"), {anonymous(1)}));
}

TEST_CASE("observable atoms are rewritten to their definitions") {
  auto p = parts();
  int tlast = p->sig->find_fluent("tlast");
  Formula f = Formula::negate(Formula::atom(tlast, {Term::constant_of(anonymous(1))}));
  Formula g = rewrite_observables(f, p->mappings, *p->sig);
  std::string text = to_string(g, *p->sig);
  CHECK(text.find("tlast") == std::string::npos);
  CHECK(text.find("last") != std::string::npos);
  WorldState system = p->system_theory->progress(CompoundAction({ground(*p, "work", {anonymous(1)})}),
                                                 p->system_theory->initial());
  EvalContext ctx(*p->sig, system);
  CHECK_FALSE(eval(g, ctx));
}

TEST_CASE("target tests are evaluated through observations") {
  auto p = parse_problem(R"(
(problem observed
  (sort part () open)
  (fluent target tlast (part) observable)
  (fluent system last (part))
  (action target Proc (part))
  (action system work (part))
  (ssa (last ?x) (pos (in (work ?x))))
  (resource R1 (star (pick ?b (work ?b))))
  (target (pick ?x (seq (test (tlast ?x)) (Proc ?x))))
  (map (Proc ?p) (work ?p))
  (obs (tlast ?x) (last ?x))))");
  WorldState system = p->system_theory->progress(CompoundAction({ground(*p, "work", {anonymous(1)})}),
                                                 p->system_theory->initial());
  Configuration target{p->target_program, {}, p->target_theory->initial()};
  TransContext ctx(*p->target_theory);
  ctx.known_anon = {anonymous(1)};
  auto steps = trans_obs(*p->pool, target, system, p->mappings, ctx);
  REQUIRE(steps.size() == 1);
  CHECK(p->sig->action_text(steps[0].action) == "{Proc(#1)}");
  CHECK_FALSE(final_obs(*p->pool, target, system, p->mappings, ctx));
}
