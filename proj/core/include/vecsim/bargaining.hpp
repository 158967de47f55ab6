#pragma once

#include <functional>
#include <optional>

#include "vecsim/config.hpp"
#include "vecsim/types.hpp"

namespace vecsim {

// Intra-server resource allocation and pricing: closed-form optimal
// allocation, price bounds, discount factors, finite-horizon partitions,
// and the alternating-offers negotiation loop.

/// Economic snapshot of the selling server.
struct ServerEcon {
  double cpu_hz = 0;               // f_j^max
  double price_ceiling_per_hz = 0; // C_j^max
  double energy_budget_j = 0;      // E_j^max
  double weight = 0.5;             // w_j
  double alpha = 0;
  double tau = 3;
};

/// Economic snapshot of the buying vehicle.
struct VehicleEcon {
  double payment_budget = 0;  // C_i^max
  double weight = 0.5;        // w_i
};

/// Expected optimal resource request at a given unit price. var1 is the
/// non-computation part of the service delay (uplink plus handover or
/// backhaul legs, plus any waiting already incurred). Returns nothing when
/// no interior optimum exists (nonpositive denominator or radicand).
std::optional<double> optimal_allocation(double price_per_hz,
                                         const TaskSpec& task, double var1_s,
                                         const VehicleEcon& veh);

struct PriceBounds {
  double c_min = 0;
  double c_max = 0;
  double spread() const { return c_max - c_min; }
};

/// Unit-price window [c_min, c_max]: the seller breaks even at c_min, the
/// buyer at c_max. total_delay_s must not exceed the deadline.
PriceBounds price_bounds(double alloc_hz, const TaskSpec& task,
                         double total_delay_s, const ServerEcon& srv,
                         const VehicleEcon& veh);

struct Discounts {
  double vehicle = 0;  // eps_i
  double server = 0;   // eps_j
};

/// Patience levels 1 - T_tran/T_max and 1 - T_comp/T_max, clamped into
/// [0, 1 - 1e-9] to keep the partition denominators regular.
Discounts discount_factors(double transmit_s, double compute_s,
                           double deadline_s);

struct Split {
  double vehicle = 0;
  double server = 0;
};

/// Perfect-partition shares for both proposer roles at horizon T^b.
/// With clamping on, each share is clipped to [0, 1] and clip events are
/// counted; the raw formulas can leave [0, 1] for small discount factors.
struct Partitions {
  Split vehicle_proposes;  // delta_i^i, delta_j^i
  Split server_proposes;   // delta_i^j, delta_j^j
};

Partitions optimal_partitions(double eps_vehicle, double eps_server,
                              int horizon, bool clamp,
                              int* clamp_events = nullptr);

/// c* = c_max - spread * (vehicle share of the proposer in effect).
double optimal_price(const PriceBounds& bounds, double vehicle_share);

enum class NoDealReason {
  None,
  NoUplink,
  NoResource,
  UploadExceedsSojourn,         // C5
  DeadlineInfeasible,           // C4
  ResultDispatchExceedsSojourn, // C6
  EmptyPriceRange,
  PaymentCapExceeded,           // C12
  NoAgreement,
};

std::string to_string(NoDealReason r);

/// Frozen per-(task, server) context for one slot's negotiation.
struct NegotiationContext {
  TaskSpec task;
  double elapsed_s = 0;  // waiting since generation (deferred slots)
  VehicleEcon vehicle;
  double uplink_bps = 0;
  double sojourn_current_s = kInfiniteDelay;
  int server_id = -1;  // 0 cloud, 1..E edge
  bool cloud = false;
  bool task_handover = false;  // target differs from the attached server
  ServerEcon server;
  double available_hz = 0;
  double server_energy_left_j = 0;
  BackhaulConfig backhaul;
  std::function<ArrivalEstimate(double t_move_s)> arrival;  // optional
  int bargain_rounds = 10;
  bool clamp_partitions = true;
};

struct NegotiationOutcome {
  bool agreed = false;
  Deal deal;
  NoDealReason reason = NoDealReason::None;
  int rounds = 0;
  int clamp_events = 0;
};

/// Migration legs and the non-computation delay at a given allocation.
struct DelayLeg {
  double t_move_s = 0;  // until the result is generated
  int arrival = -1;
  double sojourn_arrival_s = kInfiniteDelay;
  bool result_handover = false;
  double dispatch_s = 0;  // result dispatch duration
  double var1_s = 0;      // total delay minus computation
};

DelayLeg make_delay_leg(const NegotiationContext& ctx, double transmit_s,
                        double alloc_hz);

/// Alternating refinement of allocation (at the current price) and price
/// (at the current allocation's bounds) for at most T^b rounds; the sign
/// pattern of the two utilities selects the proposer. A deal requires both
/// utilities strictly positive and the payment within the vehicle budget.
NegotiationOutcome negotiate(const NegotiationContext& ctx);

}  // namespace vecsim
