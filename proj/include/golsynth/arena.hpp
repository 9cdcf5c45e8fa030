#pragma once

#include <memory>
#include <string>
#include <vector>

#include "golsynth/problem.hpp"

namespace golsynth {

enum class Turn : std::uint8_t { T, S };

inline char turn_char(Turn t) { return t == Turn::T ? 'T' : 'S'; }

// <turn, target configuration, system configuration, pending fragment>.
// The pending fragment always shares the system world.
struct ArenaState {
  Turn turn = Turn::T;
  Configuration target;
  Configuration system;
  Configuration pending;

  friend bool operator==(const ArenaState&, const ArenaState&) = default;
};

struct ArenaOptions {
  int anon_pool = 1;
  bool strict_obs = true;
  std::size_t bound = 100;

  static ArenaOptions from(const SynthesisConfig& c) { return {c.anon_pool, c.strict_obs, c.bound}; }
};

struct Labels {
  Turn turn = Turn::T;
  bool final_t = false;
  bool final_s = false;
  bool obs_eq = true;
};

struct Move {
  enum class Kind : std::uint8_t { target, system };
  Kind kind = Kind::target;
  CompoundAction action;
  ArenaState next;
};

class Arena {
 public:
  Arena(std::shared_ptr<Problem> problem, ArenaOptions options);

  const Problem& problem() const { return *problem_; }
  const ArenaOptions& options() const { return options_; }

  ArenaState initial_state() const;
  // T-states: one move per TransObs step of the target. S-states: joint
  // steps of the available program and the pending fragment on the same
  // (idle-stripped) compound action.
  std::vector<Move> successors(const ArenaState& q) const;

  Labels labels(const ArenaState& q) const;
  bool final_t(const ArenaState& q) const;
  bool final_s(const ArenaState& q) const;
  bool obs_eq(const ArenaState& q) const;

  // Labelling interpretation of q, for first-order sentences over the
  // labelling predicates and the fluents of both theories.
  std::unique_ptr<Interpretation> labelling(const ArenaState& q) const;

  std::vector<Object> active_domain(const ArenaState& q) const;
  std::vector<Object> anonymous_objects(const ArenaState& q) const;

  TransContext target_context(const ArenaState& q) const;
  TransContext system_context(const ArenaState& q) const;

  // Multi-line human-readable rendering.
  std::string describe(const ArenaState& q) const;

 private:
  std::shared_ptr<Problem> problem_;
  ArenaOptions options_;
};

}  // namespace golsynth
