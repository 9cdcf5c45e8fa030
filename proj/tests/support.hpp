#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "golsynth/controller.hpp"
#include "golsynth/frontend.hpp"

namespace golsynth::testing {

inline std::string problem_path(const std::string& name) { return std::string(GOLSYNTH_PROBLEMS_DIR) + "/" + name; }

inline std::shared_ptr<Problem> bundled(const std::string& name) { return load_problem(problem_path(name)); }

// Small instances over an open sort of parts. Every variant keeps the
// active domain below the bound of 6.
enum class PartsVariant {
  base,           // grab then work the processed part
  chosen_part,    // the mapping picks which part to grab and work
  no_worker,      // resource R2 missing: never realizable
  finite_target,  // two target steps, then final
  seeded,         // anonymous objects in the initial states
  held_obs,       // observation routed to held instead of last
};

inline const std::vector<PartsVariant>& all_parts_variants() {
  static const std::vector<PartsVariant> v{PartsVariant::base,          PartsVariant::chosen_part,
                                           PartsVariant::no_worker,     PartsVariant::finite_target,
                                           PartsVariant::seeded,        PartsVariant::held_obs};
  return v;
}

inline std::string variant_name(PartsVariant v) {
  switch (v) {
    case PartsVariant::base: return "base";
    case PartsVariant::chosen_part: return "chosen_part";
    case PartsVariant::no_worker: return "no_worker";
    case PartsVariant::finite_target: return "finite_target";
    case PartsVariant::seeded: return "seeded";
    case PartsVariant::held_obs: return "held_obs";
  }
  return "?";
}

// seed_names replaces the anonymous objects #0 and #1 of the seeded variant.
inline std::string parts_instance(PartsVariant v, int anon_pool, bool strict,
                                  std::pair<std::string, std::string> seed_names = {"#0", "#1"}) {
  std::string s = "(problem parts-" + variant_name(v) + "\n";
  s += "  (sort part () open) (sort slot (1 2))\n";
  s += "  (fluent target tlast (part) observable)\n";
  s += "  (fluent system held (part)) (fluent system last (part))\n";
  s += "  (action target Proc (part))\n";
  s += "  (action system grab (part)) (action system work (part)) (action system nop (slot)) (idle nop)\n";
  s += "  (config (bound 6) (anon-pool " + std::to_string(anon_pool) + ") (strict-obs " + (strict ? "true" : "false") +
       "))\n";
  s += "  (poss (work ?x) (held ?x))\n";
  s += "  (ssa (tlast ?x) (pos (in (Proc ?x))) (neg (exists (?y) (and (in (Proc ?y)) (!= ?x ?y)))))\n";
  s += "  (ssa (held ?x) (pos (in (grab ?x))) (neg (in (work ?x))))\n";
  s += "  (ssa (last ?x) (pos (in (work ?x))) (neg (exists (?y) (and (in (work ?y)) (!= ?x ?y)))))\n";
  if (v == PartsVariant::seeded) {
    s += "  (init system (held " + seed_names.first + ") (last " + seed_names.second + "))\n";
    s += "  (init target (tlast " + seed_names.second + "))\n";
  }
  s += "  (resource R1 (star (choice (pick ?a (grab ?a)) (nop 1))))\n";
  if (v != PartsVariant::no_worker) s += "  (resource R2 (star (choice (pick ?b (work ?b)) (nop 2))))\n";
  if (v == PartsVariant::finite_target)
    s += "  (target (seq (pick ?x (Proc ?x)) (pick ?y (Proc ?y))))\n";
  else
    s += "  (target (star (pick ?x (Proc ?x))))\n";
  if (v == PartsVariant::chosen_part)
    s += "  (map (Proc ?p) (pick ?q (seq (grab ?q) (work ?q))))\n";
  else
    s += "  (map (Proc ?p) (seq (grab ?p) (work ?p)))\n";
  if (v == PartsVariant::held_obs)
    s += "  (obs (tlast ?x) (held ?x)))\n";
  else
    s += "  (obs (tlast ?x) (last ?x)))\n";
  return s;
}

struct Instance {
  std::string label;
  std::string text;
};

// Every variant with anonymous pool 1..3 in both observation modes.
inline std::vector<Instance> parts_family() {
  std::vector<Instance> out;
  for (auto v : all_parts_variants())
    for (int pool = 1; pool <= 3; ++pool)
      for (bool strict : {true, false})
        out.push_back({variant_name(v) + "/pool" + std::to_string(pool) + (strict ? "/strict" : "/loose"),
                       parts_instance(v, pool, strict)});
  return out;
}

inline ArenaOptions options_of(const Problem& p) { return ArenaOptions::from(p.config); }

// Canonical edge set of a quotient: (from form, kind, action, to form).
inline std::vector<std::string> quotient_edges(const Arena& arena, const FiniteArena& fa) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < fa.size(); ++i)
    for (const auto& e : fa.edges[i])
      out.push_back(fa.forms[i] + " " + (e.kind == Move::Kind::target ? "T " : "S ") +
                    arena.problem().sig->action_text(e.action) + " " + fa.forms[e.to]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace golsynth::testing
