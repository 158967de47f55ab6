#pragma once

#include "vecsim/scenario.hpp"

namespace vecsim {

// Direction estimation, sojourn prediction and arrival-server prediction.
// The direction indicator follows the epoch-difference rule: +1 when the
// horizontal distance to the server grew since the previous epoch, -1 when
// it shrank, and the configured prior (a value in [-1, 1]) at t = 0 or when
// the difference is exactly zero.

double direction_indicator(const WorldState& world, const VehicleState& v,
                           const ServerState& s);

/// Remaining sojourn time (R + zeta*|X_i - X_j|) / v, clamped at 0.
/// A parked vehicle (v = 0) never leaves: returns +inf.
double sojourn_time(const VehicleState& v, const ServerState& s, double zeta);

/// Server the vehicle is attached to after t_move seconds.
/// Literal mode evaluates the index-stepping formula with the speed as the
/// divisor; corrected mode divides the excess travel past the cell exit by
/// the coverage diameter and steps along the vehicle heading. The result is
/// clamped to [1, E].
int arrival_server(const WorldState& world, const VehicleState& v,
                   int current_server_id, double zeta, double t_move_s);

/// Arrival server plus the remaining sojourn there. In corrected mode the
/// sojourn is evaluated at the position the vehicle will occupy after
/// t_move; literal mode keeps the current position.
ArrivalEstimate arrival_with_sojourn(const WorldState& world,
                                     const VehicleState& v,
                                     int current_server_id, double zeta,
                                     double t_move_s);

/// Moves every vehicle by heading*speed*T0*dt with wrap-around and stores
/// the previous-epoch positions used by direction_indicator.
void advance_epoch(WorldState& world);

}  // namespace vecsim
