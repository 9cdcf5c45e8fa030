#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "golsynth/mucheck.hpp"

namespace golsynth {

// Winning strategy on the quotient, keyed by canonical forms.
struct StrategyTable {
  std::string initial;
  std::map<std::string, int> ann;           // winning states
  std::map<std::string, std::string> next;  // winning S-states -> chosen successor

  static StrategyTable from(const FiniteArena& fa, const AnnotatedWinningSet& win, const Strategy& strategy);
  bool winning(const std::string& form) const { return ann.contains(form); }
};

// Quotient construction, winning set and strategy for one problem.
struct Synthesis {
  std::unique_ptr<Arena> arena;
  FiniteArena quotient;
  AnnotatedWinningSet win;
  bool realizable = false;
  Strategy strategy;    // empty unless realizable
  StrategyTable table;  // empty unless realizable
  std::string approximants;
};

// Throws BoundExceeded from the arena construction.
Synthesis synthesize(std::shared_ptr<Problem> problem, const ArenaOptions& options, bool dump_approximants = false);

struct BundleManifest {
  int version = 1;
  std::string problem;
  std::string digest;
  std::size_t bound = 0;
  int anon_pool = 1;
  bool strict_obs = true;
  std::size_t arena_states = 0;
};

// Versioned line-oriented text container: manifest, then one entry per
// winning state with its annotation and chosen successor.
std::string write_bundle(const BundleManifest& manifest, const StrategyTable& table);
// Throws InvalidProblem on malformed input.
StrategyTable read_bundle(std::string_view text, BundleManifest* manifest = nullptr);

struct Response {
  Move target;
  std::vector<Move> system;  // excludes the unchanged starting configuration
};

// Executes the strategy on the concrete arena, tracking the renaming into
// the quotient after every move.
class Controller {
 public:
  // Throws NotInWinningRelation if the initial state is not winning.
  Controller(const Arena& arena, const StrategyTable& table);

  const ArenaState& state() const { return state_; }
  const std::string& form() const { return form_; }
  const PBisimTracker& tracker() const { return tracker_; }

  // Legal target moves from the current T-state.
  std::vector<Move> target_moves() const;

  // Throws IllegalTargetMove if move is not a legal target step from the
  // current state, NotInWinningRelation if the strategy has no entry.
  Response respond(const Move& target_move);
  // First legal target move with the given action text; braces are optional
  // for a single action.
  Response respond(const std::string& action_text);

 private:
  const Arena* arena_;
  const StrategyTable* table_;
  ArenaState state_;
  std::string form_;
  PBisimTracker tracker_;
};

struct TraceReport {
  std::vector<std::string> lines;
  bool pass = true;
  std::string reason;
  std::size_t runs = 0;
  std::size_t responses = 0;

  std::string text() const;
};

// Checks one response: every system move is a Trans step of the previous
// system configuration, the reached system world is a complete execution of
// the mapped program, and finalT implies finalS at the reached T-state.
// Returns an empty string on success.
std::string check_response(const Arena& arena, const ArenaState& before, const Response& r);

TraceReport playout_scripted(const Arena& arena, const StrategyTable& table, const std::vector<std::string>& actions);
TraceReport playout_random(const Arena& arena, const StrategyTable& table, std::uint64_t seed, std::size_t runs,
                           std::size_t max_steps);
// Enumerates every target choice up to depth target moves.
TraceReport playout_exhaustive(const Arena& arena, const StrategyTable& table, std::size_t depth);

}  // namespace golsynth
