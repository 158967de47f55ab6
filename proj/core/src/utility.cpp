#include "vecsim/utility.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "vecsim/mobility.hpp"

namespace vecsim {

double satisfaction(double total_delay_s, double deadline_s) {
  if (total_delay_s > deadline_s)
    return -std::numeric_limits<double>::infinity();
  return std::log1p(deadline_s - total_delay_s) / std::log1p(deadline_s);
}

double vehicle_utility_local(double psi, double energy_j,
                             double energy_budget_j, double weight) {
  return weight * psi - (1.0 - weight) * energy_j / energy_budget_j;
}

double vehicle_utility_remote(double psi, double payment,
                              double payment_budget, double weight) {
  return weight * psi - (1.0 - weight) * payment / payment_budget;
}

double server_utility(double price_per_hz, double alloc_hz,
                      double price_ceiling_per_hz, double server_cpu_hz,
                      double energy_j, double energy_budget_j, double weight) {
  const double revenue =
      price_per_hz * alloc_hz / (price_ceiling_per_hz * server_cpu_hz);
  return weight * revenue - (1.0 - weight) * energy_j / energy_budget_j;
}

double social_welfare(const std::vector<Decision>& decisions) {
  double sw = 0;
  for (const auto& d : decisions) sw += d.vehicle_utility + d.server_utility;
  return sw;
}

bool ConstraintReport::all_pass() const {
  for (const auto& e : c)
    if (!e.pass) return false;
  return true;
}

std::string ConstraintReport::summary() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    out << "C" << k + 1 << "=" << (c[k].pass ? "pass" : "FAIL");
    if (!c[k].pass) {
      out << "(";
      for (std::size_t i = 0; i < c[k].offenders.size(); ++i)
        out << (i ? "," : "") << c[k].offenders[i];
      out << ")";
    }
    if (k + 1 < c.size()) out << " ";
  }
  return out.str();
}

ConstraintReport check_constraints(const WorldState& world,
                                   const std::vector<Decision>& decisions) {
  ConstraintReport r;
  constexpr double kSlack = 1.0 + 1e-9;
  auto flag = [&r](int number, int offender) {
    r.at(number).pass = false;
    r.at(number).offenders.push_back(offender);
  };

  // C1/C2/C3: one destination per task, one task per vehicle per slot.
  std::set<std::pair<int, Slot>> seen;
  for (const auto& d : decisions) {
    const auto key = std::make_pair(d.task.owner, d.task.gen_slot);
    if (!seen.insert(key).second) {
      flag(2, d.task.owner);
      flag(3, d.task.owner);
    }
  }

  for (const auto& d : decisions) {
    const VehicleState& veh = world.vehicles[d.task.owner];
    // C4: completion before the deadline.
    if (d.total_delay_s > d.task.deadline_s * kSlack) flag(4, d.task.owner);
    if (d.kind != DestKind::Local) {
      const ServerState& cur = world.server_by_id(world.nearest_server_id(veh.x));
      const double zeta = direction_indicator(world, veh, cur);
      // C5: upload finished inside the current cell.
      const double soj = sojourn_time(veh, cur, zeta);
      if (d.deal.transmit_delay_s > soj * kSlack) flag(5, d.task.owner);
      // C6: result dispatched before the vehicle leaves the arrival cell.
      if (d.kind == DestKind::Edge &&
          d.deal.arrival_server == d.deal.server) {
        // no result handover; trivially satisfied
      } else {
        double t_move = d.deal.transmit_delay_s + d.deal.compute_delay_s;
        double dispatch;
        if (d.kind == DestKind::Cloud) {
          t_move += d.task.input_bits / world.cfg.backhaul.cloud_rate_bps;
          dispatch = d.task.output_bits / world.cfg.backhaul.cloud_rate_bps;
        } else {
          if (d.deal.server != cur.id)
            t_move += 2.0 * d.task.input_bits / world.cfg.backhaul.fiber_rate_bps;
          dispatch = 2.0 * d.task.output_bits / world.cfg.backhaul.fiber_rate_bps;
        }
        const ArrivalEstimate est =
            arrival_with_sojourn(world, veh, cur.id, zeta, t_move);
        if (dispatch > est.sojourn_s * kSlack) flag(6, d.task.owner);
      }
      // C12: payment within the vehicle budget.
      if (d.deal.payment > veh.payment_budget * kSlack) flag(12, d.task.owner);
    }
  }

  // C7: speed bounds.
  for (const auto& v : world.vehicles)
    if (v.speed_mps < world.cfg.speed_min_mps / kSlack ||
        v.speed_mps > world.cfg.speed_max_mps * kSlack)
      flag(7, v.id);

  // C8/C9/C11 against the post-commit server states; C10 per vehicle.
  auto check_server = [&](const ServerState& s) {
    if (s.committed_hz > s.cpu_hz * kSlack) flag(8, s.id);
    if (s.busy_cores > s.cores) flag(9, s.id);
    if (s.energy_used_j > s.energy_budget_j * kSlack) flag(11, s.id);
  };
  for (const auto& s : world.servers) check_server(s);
  check_server(world.cloud);
  for (const auto& v : world.vehicles)
    if (v.energy_used_j > v.energy_budget_j * kSlack) flag(10, v.id);

  return r;
}

}  // namespace vecsim
