#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "golsynth/arena.hpp"

namespace golsynth {

using Renaming = std::map<Object, Object>;

struct CanonicalForm {
  std::string text;
  // Maps each anonymous object of the state to its canonical name. Empty
  // when objects were pinned.
  Renaming renaming;
};

// Applies r to every anonymous object of q (objects outside r are kept).
ArenaState rename(const ArenaState& q, const Renaming& r);

// Serialization with anonymous objects renumbered by an exact canonical
// labeling. Pinned anonymous objects keep their identity.
CanonicalForm canonicalize(const Arena& arena, const ArenaState& q, const std::vector<Object>& pinned = {});

// Serialization without renumbering.
std::string serialize(const Arena& arena, const ArenaState& q);

// A bijection h on anonymous objects with rename(q1, h) == q2, if any.
std::optional<Renaming> isomorphic(const Arena& arena, const ArenaState& q1, const ArenaState& q2);

struct FiniteArena {
  struct Edge {
    int to = -1;
    Move::Kind kind = Move::Kind::target;
    CompoundAction action;
  };

  std::vector<ArenaState> states;  // representatives
  std::vector<std::string> forms;
  std::vector<Labels> labels;
  std::vector<std::vector<Edge>> edges;
  std::unordered_map<std::string, int> index;
  int initial = 0;

  std::size_t size() const { return states.size(); }
  std::size_t edge_count() const;
  int find(const std::string& form) const;
  std::vector<std::vector<int>> successor_lists() const;
};

struct BuildOptions {
  // Concrete arena: states keyed by exact serialization, no renumbering.
  bool concrete = false;
  std::size_t max_states = 2000000;
};

// Reachable part of the arena. Throws BoundExceeded (with the offending
// trace) when a state's active domain exceeds the bound.
FiniteArena build_finite_arena(const Arena& arena, const BuildOptions& options = {});

// Deterministic text listing of states and edges.
std::string dump(const Arena& arena, const FiniteArena& fa);

// Follows a concrete run and maintains the per-step renaming into an
// abstract run whose states have the quotient's canonical forms. Objects
// that persist or have just disappeared keep their abstract names.
class PBisimTracker {
 public:
  PBisimTracker(const Arena& arena, const ArenaState& initial);

  // Records the concrete step to next; expected_form is the canonical form
  // of the quotient state the step should correspond to. Throws
  // BisimulationBroken on any violated invariant.
  void step(const ArenaState& next, const std::string& expected_form);

  const ArenaState& concrete() const { return concrete_; }
  const ArenaState& abstract() const { return abstract_; }
  const Renaming& mapping() const { return h_; }
  std::size_t checks() const { return checks_; }

 private:
  const Arena& arena_;
  ArenaState concrete_;
  ArenaState abstract_;
  Renaming h_;          // concrete -> abstract, current objects
  Renaming departed_;   // objects that disappeared in the last step
  std::size_t checks_ = 0;
};

}  // namespace golsynth
