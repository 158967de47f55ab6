#include "vecsim/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace vecsim {

double direction_indicator(const WorldState& world, const VehicleState& v,
                           const ServerState& s) {
  const double dd = std::abs(v.x - s.x) - std::abs(v.prev_epoch_x - s.x);
  if (world.slot > 0 && dd != 0.0) return dd > 0.0 ? 1.0 : -1.0;
  const auto& m = world.cfg.mobility;
  const double p = m.prior == MobilityPrior::Heading
                       ? m.prior_confidence
                       : 2.0 * m.markov_stay_prob - 1.0;
  return v.heading * p;
}

double sojourn_time(const VehicleState& v, const ServerState& s, double zeta) {
  if (v.speed_mps <= 0.0) return kInfiniteDelay;
  const double d = std::abs(v.x - s.x);
  // Negative values can only arise out of coverage or with a fractional
  // prior; they are clamped and treated as "already leaving".
  return std::max(0.0, (s.radius_m + zeta * d) / v.speed_mps);
}

int arrival_server(const WorldState& world, const VehicleState& v,
                   int current_server_id, double zeta, double t_move_s) {
  const ServerState& s = world.server_by_id(current_server_id);
  const int E = static_cast<int>(world.servers.size());
  long steps;
  int dir;
  if (world.cfg.mobility.arrival_mode == ArrivalMode::Literal) {
    const double d = std::abs(v.x - s.x);
    const double excess = v.speed_mps * t_move_s - (s.radius_m + zeta * d);
    steps = static_cast<long>(std::ceil(excess / v.speed_mps));
    dir = zeta >= 0 ? 1 : -1;
  } else {
    // Exit distance from signed geometry; excess travel crosses one cell
    // per coverage diameter.
    dir = v.heading >= 0 ? 1 : -1;
    const double exit_dist = s.radius_m - dir * (v.x - s.x);
    const double excess = v.speed_mps * t_move_s - exit_dist;
    steps = std::max(0L, static_cast<long>(std::ceil(excess / (2.0 * s.radius_m))));
  }
  const long j = current_server_id + static_cast<long>(dir) * steps;
  return static_cast<int>(std::clamp(j, 1L, static_cast<long>(E)));
}

ArrivalEstimate arrival_with_sojourn(const WorldState& world,
                                     const VehicleState& v,
                                     int current_server_id, double zeta,
                                     double t_move_s) {
  ArrivalEstimate est;
  est.server = arrival_server(world, v, current_server_id, zeta, t_move_s);
  VehicleState probe = v;
  if (world.cfg.mobility.arrival_mode == ArrivalMode::Corrected)
    probe.x = world.wrap_x(v.x + v.heading * v.speed_mps * t_move_s);
  const ServerState& s = world.server_by_id(est.server);
  est.sojourn_s = sojourn_time(probe, s, direction_indicator(world, probe, s));
  return est;
}

void advance_epoch(WorldState& world) {
  const double step = world.cfg.epoch_slots * world.cfg.slot_duration_s;
  for (auto& v : world.vehicles) {
    v.prev_epoch_x = v.x;
    v.x = world.wrap_x(v.x + v.heading * v.speed_mps * step);
  }
}

}  // namespace vecsim
