#pragma once

#include <memory>
#include <string>
#include <vector>

#include "golsynth/mapping.hpp"

namespace golsynth {

struct SynthesisConfig {
  std::size_t bound = 100;  // maximum active-domain size of any arena state
  int anon_pool = 1;
  bool strict_obs = true;
};

// Fluent ids of the labelling predicates added on top of the user signature.
struct LabellingFluents {
  int turn = -1, turn_t = -1, turn_s = -1;
  int final_t = -1, final_s = -1, obs_eq = -1;
  int prog_t = -1, prog_s = -1, env_t = -1, env_s = -1;
};

// Registers the labelling predicates; call once after user fluents are declared.
LabellingFluents install_labelling_fluents(Signature& sig);

struct Problem {
  std::string name;
  std::string digest;  // hash of the normalized problem text
  std::shared_ptr<Signature> sig;
  std::shared_ptr<ProgramPool> pool;
  std::shared_ptr<const RigidFacts> rigid;
  std::shared_ptr<BasicActionTheory> target_theory;
  std::shared_ptr<BasicActionTheory> system_theory;
  int target_program = -1;
  std::vector<int> resources;  // one program per resource index, in order
  int system_program = -1;     // resources combined with |||
  MappingTable mappings;
  LabellingFluents labels;
  SynthesisConfig config;
  std::vector<std::string> warnings;
};

}  // namespace golsynth
