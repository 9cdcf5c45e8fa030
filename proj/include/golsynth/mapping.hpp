#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "golsynth/program.hpp"

namespace golsynth {

// Act(params) <-> body, where body is a system program over params.
struct ActionMapping {
  int target_action = -1;
  std::vector<int> params;
  int body = -1;
};

// f(params) <-> defining formula over system fluents.
struct ObservationMapping {
  int fluent = -1;
  std::vector<int> params;
  Formula defining;
};

class MappingTable {
 public:
  void add_action(ActionMapping m);
  void add_observation(ObservationMapping m);

  const ActionMapping* action(int target_action) const;
  const ObservationMapping* observation(int fluent) const;
  const std::map<int, ActionMapping>& actions() const { return actions_; }
  const std::map<int, ObservationMapping>& observations() const { return observations_; }

  // Body of the mapping for a single-member target action, with its
  // parameters bound to the action's arguments.
  std::pair<int, Env> lookup(const CompoundAction& a, const ProgramPool& pool) const;

 private:
  std::map<int, ActionMapping> actions_;
  std::map<int, ObservationMapping> observations_;
};

// Target fluents read from the target world, except observable ones, which
// are read through their defining formulas on the system world. System
// fluents are read from the system world.
class ObsView : public Interpretation {
 public:
  ObsView(const Signature& sig, const MappingTable& maps, const WorldState& target, const WorldState& system);

  bool holds(int fluent, const Tuple& args) const override;
  bool for_each(int fluent, const std::function<bool(const Tuple&)>& visit) const override;
  void active_domain(std::vector<Object>& out) const override;

  // Extension of an observable fluent as defined on the system world.
  std::vector<Tuple> observed(int fluent) const;

 private:
  const ObservationMapping& mapping_of(int fluent) const;

  const Signature& sig_;
  const MappingTable& maps_;
  const WorldState& target_;
  const WorldState& system_;
};

// Target fluents from the target world and system fluents from the system
// world, with no observation routing.
class JointView : public Interpretation {
 public:
  JointView(const Signature& sig, const WorldState& target, const WorldState& system)
      : sig_(sig), target_(target), system_(system) {}

  bool holds(int fluent, const Tuple& args) const override;
  bool for_each(int fluent, const std::function<bool(const Tuple&)>& visit) const override;
  void active_domain(std::vector<Object>& out) const override;

 private:
  const WorldState& pick(int fluent) const;

  const Signature& sig_;
  const WorldState& target_;
  const WorldState& system_;
};

bool final_obs(const ProgramPool& pool, const Configuration& target, const WorldState& system,
               const MappingTable& maps, TransContext ctx);
std::vector<Step> trans_obs(ProgramPool& pool, const Configuration& target, const WorldState& system,
                            const MappingTable& maps, TransContext ctx);

// Replaces each observable atom f(t) by its defining formula instantiated at t.
Formula rewrite_observables(const Formula& f, const MappingTable& maps, Signature& sig);

}  // namespace golsynth
