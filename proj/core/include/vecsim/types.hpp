#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace vecsim {

using Slot = std::int64_t;

constexpr double kInfiniteDelay = std::numeric_limits<double>::infinity();

/// Offloading schemes selectable per run.
enum class Scheme { BargainMatch, Elo, Exo, Nvo, Eco, Nco, Opora };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

/// Server ids: 0 is the cloud, 1..E are edge servers.
constexpr int kCloudServerId = 0;

enum class DestKind { Local, Edge, Cloud };

/// One computation task: input/output sizes, intensity, deadline, owner.
struct TaskSpec {
  int owner = -1;       // vehicle id
  Slot gen_slot = 0;
  double input_bits = 0;    // D_in
  double output_bits = 0;   // D_out
  double intensity = 0;     // cycles per bit
  double cycles = 0;        // C_req = input_bits * intensity
  double deadline_s = 0;    // T_max
};

struct VehicleState {
  int id = -1;
  double x = 0;             // position along the road, meters
  double y = 0;             // lane offset, meters
  double speed_mps = 0;
  int heading = 1;          // +1 toward increasing x, -1 opposite
  double cpu_hz = 0;        // f_i^max
  double weight = 0.5;      // w_i
  double payment_budget = 0;    // C_i^max, per task
  double energy_budget_j = 0;   // E_i^max
  double energy_used_j = 0;
  double tx_power_w = 0;
  Slot core_busy_until = -1;    // last slot (inclusive) the single core is held
  double prev_epoch_x = 0;      // position at the previous epoch boundary

  bool core_idle(Slot t) const { return core_busy_until < t; }
};

struct ServerState {
  int id = 0;               // 0 cloud, 1..E edge
  bool cloud = false;
  double x = 0;
  double y = 0;
  double radius_m = 0;      // edge only
  double cpu_hz = 0;        // f_j^max
  int cores = 1;
  double committed_hz = 0;  // sum of in-flight allocations (C8)
  int busy_cores = 0;       // in-flight tasks holding a core (C9)
  double energy_budget_j = 0;   // E_j^max
  double energy_used_j = 0;
  double price_ceiling_per_hz = 0;  // C_j^max
  double weight = 0.5;      // w_j
  int sic_capacity = 1;     // S_j

  double available_hz() const { return cpu_hz - committed_hz; }
  int idle_cores() const { return cores - busy_cores; }
  double energy_left_j() const { return energy_budget_j - energy_used_j; }
};

/// Attachment prediction when a task's result becomes available.
struct ArrivalEstimate {
  int server = -1;
  double sojourn_s = std::numeric_limits<double>::infinity();
};

/// Negotiated (f*, c*) pair plus both parties' utilities.
struct Deal {
  int vehicle = -1;
  int server = -1;          // 0 cloud, 1..E edge
  double cpu_hz = 0;        // f*
  double price_per_hz = 0;  // c*
  double vehicle_utility = 0;
  double server_utility = 0;
  double total_delay_s = 0;     // from task generation to result delivery
  double compute_delay_s = 0;
  double transmit_delay_s = 0;
  double payment = 0;           // c* . f*
  double energy_j = 0;          // server-side execution energy
  int arrival_server = -1;      // predicted attachment when the result is ready
};

}  // namespace vecsim
