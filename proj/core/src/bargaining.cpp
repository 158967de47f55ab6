#include "vecsim/bargaining.hpp"

#include <algorithm>
#include <cmath>

#include "vecsim/costmodel.hpp"
#include "vecsim/utility.hpp"

namespace vecsim {

std::optional<double> optimal_allocation(double price_per_hz,
                                         const TaskSpec& task, double var1_s,
                                         const VehicleEcon& veh) {
  if (price_per_hz <= 0 || veh.weight >= 1.0 || veh.weight <= 0.0)
    return std::nullopt;
  const double loge = std::log1p(task.deadline_s);
  const double a = 1.0 + task.deadline_s - var1_s;  // radicand geometry term
  const double k = loge * price_per_hz * (1.0 - veh.weight);
  const double radicand =
      k * (k * task.cycles + 4.0 * veh.payment_budget * veh.weight * a) /
      task.cycles;
  if (radicand < 0) return std::nullopt;
  const double denom = std::sqrt(radicand) - k;
  if (denom <= 0) return std::nullopt;
  return 2.0 * veh.weight * veh.payment_budget / denom;
}

PriceBounds price_bounds(double alloc_hz, const TaskSpec& task,
                         double total_delay_s, const ServerEcon& srv,
                         const VehicleEcon& veh) {
  PriceBounds b;
  b.c_min = (1.0 - srv.weight) * srv.alpha *
            std::pow(alloc_hz, srv.tau - 2.0) * task.cycles *
            srv.price_ceiling_per_hz * srv.cpu_hz /
            (srv.weight * srv.energy_budget_j);
  b.c_max = veh.weight * std::log1p(task.deadline_s - total_delay_s) *
            veh.payment_budget /
            ((1.0 - veh.weight) * alloc_hz * std::log1p(task.deadline_s));
  return b;
}

Discounts discount_factors(double transmit_s, double compute_s,
                           double deadline_s) {
  constexpr double kTop = 1.0 - 1e-9;
  Discounts d;
  d.vehicle = std::clamp(1.0 - transmit_s / deadline_s, 0.0, kTop);
  d.server = std::clamp(1.0 - compute_s / deadline_s, 0.0, kTop);
  return d;
}

Partitions optimal_partitions(double eps_vehicle, double eps_server,
                              int horizon, bool clamp, int* clamp_events) {
  const double ei = eps_vehicle;
  const double ej = eps_server;
  const double prod = ei * ej;
  const double x = std::pow(prod, std::ceil(horizon / 2.0));
  const double den = 1.0 - prod;

  Partitions p;
  p.vehicle_proposes.vehicle = ei - (1.0 - ei) * (1.0 - x) / den;
  p.vehicle_proposes.server = (1.0 - ei) * (2.0 - prod - x) / den;
  p.server_proposes.vehicle = (1.0 - ej) * (1.0 - x) / den;
  p.server_proposes.server = (ej * (1.0 - ei) - (1.0 - ej) * x) / den;

  if (clamp) {
    auto clip = [&](double& v) {
      if (v < 0.0 || v > 1.0) {
        v = std::clamp(v, 0.0, 1.0);
        if (clamp_events) ++*clamp_events;
      }
    };
    clip(p.vehicle_proposes.vehicle);
    clip(p.vehicle_proposes.server);
    clip(p.server_proposes.vehicle);
    clip(p.server_proposes.server);
  }
  return p;
}

double optimal_price(const PriceBounds& bounds, double vehicle_share) {
  return bounds.c_max - bounds.spread() * vehicle_share;
}

std::string to_string(NoDealReason r) {
  switch (r) {
    case NoDealReason::None: return "none";
    case NoDealReason::NoUplink: return "no_uplink";
    case NoDealReason::NoResource: return "no_resource";
    case NoDealReason::UploadExceedsSojourn: return "upload_exceeds_sojourn";
    case NoDealReason::DeadlineInfeasible: return "deadline_infeasible";
    case NoDealReason::ResultDispatchExceedsSojourn:
      return "result_dispatch_exceeds_sojourn";
    case NoDealReason::EmptyPriceRange: return "empty_price_range";
    case NoDealReason::PaymentCapExceeded: return "payment_cap_exceeded";
    case NoDealReason::NoAgreement: return "no_agreement";
  }
  return "?";
}

DelayLeg make_delay_leg(const NegotiationContext& ctx, double t_tran,
                        double alloc_hz) {
  DelayLeg leg;
  const TaskSpec& task = ctx.task;
  const double t_comp = task.cycles / alloc_hz;
  double pre = t_tran;
  if (ctx.cloud) {
    pre += task.input_bits / ctx.backhaul.cloud_rate_bps;
  } else if (ctx.task_handover) {
    pre += 2.0 * task.input_bits / ctx.backhaul.fiber_rate_bps;
  }
  leg.t_move_s = pre + t_comp;
  if (ctx.arrival) {
    const ArrivalEstimate est = ctx.arrival(leg.t_move_s);
    leg.arrival = est.server;
    leg.sojourn_arrival_s = est.sojourn_s;
  } else {
    leg.arrival = ctx.server_id;
  }
  leg.var1_s = ctx.elapsed_s + t_tran;
  if (ctx.cloud) {
    leg.result_handover = true;
    leg.dispatch_s = task.output_bits / ctx.backhaul.cloud_rate_bps;
    leg.var1_s += (task.input_bits + task.output_bits) / ctx.backhaul.cloud_rate_bps;
  } else {
    if (ctx.task_handover)
      leg.var1_s += 2.0 * task.input_bits / ctx.backhaul.fiber_rate_bps;
    leg.result_handover = leg.arrival != ctx.server_id;
    if (leg.result_handover) {
      leg.dispatch_s = 2.0 * task.output_bits / ctx.backhaul.fiber_rate_bps;
      leg.var1_s += leg.dispatch_s;
    }
  }
  return leg;
}

NegotiationOutcome negotiate(const NegotiationContext& ctx) {
  NegotiationOutcome out;
  const TaskSpec& task = ctx.task;
  auto no_deal = [&](NoDealReason r) {
    out.agreed = false;
    out.reason = r;
    return out;
  };

  if (ctx.uplink_bps <= 0) return no_deal(NoDealReason::NoUplink);
  const double t_tran = task.input_bits / ctx.uplink_bps;
  if (t_tran > ctx.sojourn_current_s)
    return no_deal(NoDealReason::UploadExceedsSojourn);

  // Resource cap: availability and the server's remaining energy.
  double f_cap = ctx.available_hz;
  if (ctx.server.alpha > 0) {
    if (ctx.server_energy_left_j <= 0) return no_deal(NoDealReason::NoResource);
    const double f_energy = std::pow(
        ctx.server_energy_left_j / (ctx.server.alpha * task.cycles),
        1.0 / (ctx.server.tau - 1.0));
    f_cap = std::min(f_cap, f_energy);
  }
  if (!(f_cap > 0)) return no_deal(NoDealReason::NoResource);

  // Anchor: the server opens with its whole available resource on the
  // table; the first price is quoted at that allocation's own bounds.
  double f = f_cap;
  double c = -1;
  bool vehicle_proposes = true;  // initial proposer
  double prev_c = -1, prev_f = -1;
  bool payment_blocked = false;

  for (int round = 0; round <= ctx.bargain_rounds; ++round) {
    out.rounds = round;

    // Refine the allocation at the current price, then price at the
    // refined allocation's own bounds; agreement is only tested on
    // refined rounds.
    if (round > 0) {
      const auto f_star = optimal_allocation(c, task, make_delay_leg(ctx, t_tran, f).var1_s,
                                             ctx.vehicle);
      f = f_star ? std::min(f_cap, *f_star) : f_cap;
    }

    DelayLeg leg = make_delay_leg(ctx, t_tran, f);
    const double slack = task.deadline_s - leg.var1_s;
    if (slack <= 0) return no_deal(NoDealReason::DeadlineInfeasible);
    const double f_floor = task.cycles / slack;
    if (f_floor > f_cap) return no_deal(NoDealReason::DeadlineInfeasible);
    if (f < f_floor || f > f_cap) {
      f = std::clamp(f, f_floor, f_cap);
      leg = make_delay_leg(ctx, t_tran, f);
    }
    if (leg.dispatch_s > leg.sojourn_arrival_s)
      return no_deal(NoDealReason::ResultDispatchExceedsSojourn);

    const double t_comp = task.cycles / f;
    const double t_total = leg.var1_s + t_comp;
    const PriceBounds bounds = price_bounds(f, task, t_total, ctx.server, ctx.vehicle);
    if (bounds.spread() < 0) return no_deal(NoDealReason::EmptyPriceRange);

    const Discounts eps = discount_factors(t_tran, t_comp, task.deadline_s);
    const Partitions parts =
        optimal_partitions(eps.vehicle, eps.server, ctx.bargain_rounds,
                           ctx.clamp_partitions, &out.clamp_events);
    const double share = vehicle_proposes ? parts.vehicle_proposes.vehicle
                                          : parts.server_proposes.vehicle;
    c = optimal_price(bounds, share);

    const double payment = c * f;
    const double energy = exec_energy(f, task.cycles, ctx.server.alpha, ctx.server.tau);
    const double psi = satisfaction(t_total, task.deadline_s);
    const double u_veh =
        vehicle_utility_remote(psi, payment, ctx.vehicle.payment_budget, ctx.vehicle.weight);
    const double u_srv =
        server_utility(c, f, ctx.server.price_ceiling_per_hz, ctx.server.cpu_hz,
                       energy, ctx.server.energy_budget_j, ctx.server.weight);

    const bool within_budget = payment <= ctx.vehicle.payment_budget;
    payment_blocked = u_veh > 0 && u_srv > 0 && !within_budget;
    if (round > 0 && u_veh > 0 && u_srv > 0 && within_budget &&
        energy <= ctx.server_energy_left_j) {
      Deal d;
      d.vehicle = task.owner;
      d.server = ctx.server_id;
      d.cpu_hz = f;
      d.price_per_hz = c;
      d.vehicle_utility = u_veh;
      d.server_utility = u_srv;
      d.total_delay_s = t_total;
      d.compute_delay_s = t_comp;
      d.transmit_delay_s = t_tran;
      d.payment = payment;
      d.energy_j = energy;
      d.arrival_server = leg.arrival;
      out.agreed = true;
      out.deal = d;
      return out;
    }

    // Definition-1 proposer selection; on a joint refusal either side may
    // move, the vehicle is used deterministically.
    if (u_veh > 0 && u_srv <= 0) vehicle_proposes = true;
    else if (u_veh <= 0 && u_srv > 0) vehicle_proposes = false;
    else if (!within_budget) vehicle_proposes = true;  // lower price shrinks payment
    else vehicle_proposes = true;

    const double c_scale = std::max(std::abs(c), 1e-300);
    if (round >= 1 && prev_c >= 0 && std::abs(c - prev_c) <= 1e-6 * c_scale &&
        std::abs(f - prev_f) <= 1e-6 * f)
      break;  // stalled fixed point without agreement
    prev_c = c;
    prev_f = f;
  }
  return no_deal(payment_blocked ? NoDealReason::PaymentCapExceeded
                                 : NoDealReason::NoAgreement);
}

}  // namespace vecsim
