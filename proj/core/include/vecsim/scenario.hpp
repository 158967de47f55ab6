#pragma once

#include <vector>

#include "vecsim/config.hpp"
#include "vecsim/rng.hpp"
#include "vecsim/types.hpp"

namespace vecsim {

struct WorldState {
  ScenarioConfig cfg;
  std::vector<VehicleState> vehicles;
  std::vector<ServerState> servers;  // edge servers, ids 1..E at index id-1
  ServerState cloud;                 // id 0
  Slot slot = 0;
  Rng rng;

  explicit WorldState(const ScenarioConfig& c) : cfg(c), rng(c.rng_seed) {}

  const ServerState& server_by_id(int id) const {
    return id == kCloudServerId ? cloud : servers[id - 1];
  }
  ServerState& server_by_id(int id) {
    return id == kCloudServerId ? cloud : servers[id - 1];
  }

  double wrap_x(double x) const;

  /// Edge server whose cell contains x (nearest center, ties to lower id).
  int nearest_server_id(double x) const;
  bool in_coverage(const VehicleState& v, const ServerState& s) const;
};

/// Builds the initial world: evenly spaced servers, uniformly placed
/// vehicles, one cloud server. Deterministic given cfg.rng_seed.
WorldState build_scenario(const ScenarioConfig& cfg);

/// Bernoulli task generation for one slot; at most one task per vehicle.
std::vector<TaskSpec> sample_tasks(WorldState& world, Slot slot);

}  // namespace vecsim
