#include "vecsim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vecsim/costmodel.hpp"
#include "vecsim/matching.hpp"
#include "vecsim/utility.hpp"

namespace vecsim {

namespace {

Decision decision_from_deal(const TaskSpec& task, const Deal& deal) {
  Decision d;
  d.task = task;
  d.kind = deal.server == kCloudServerId ? DestKind::Cloud : DestKind::Edge;
  d.deal = deal;
  d.total_delay_s = deal.total_delay_s;
  d.energy_j = deal.energy_j;
  d.vehicle_utility = deal.vehicle_utility;
  d.server_utility = deal.server_utility;
  return d;
}

std::vector<int> active_pending(Engine& e) {
  std::vector<int> idx;
  auto& pool = e.pending();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const PendingTask& p = pool[i];
    if (p.status != PendingTask::Status::Pending) continue;
    idx.push_back(static_cast<int>(i));
  }
  return idx;
}

bool rate_capable(const PendingTask& p) {
  return !p.deferred && p.in_coverage && p.uplink_bps > 0;
}

/// Offers restricted to one destination per task; running the matcher on
/// them degenerates into per-server greedy admission by server preference.
void admit_and_commit(Engine& e, const std::vector<int>& tasks,
                      std::vector<CandidateOffer> offers,
                      bool fail_rejected) {
  if (tasks.empty()) return;
  PreferenceLists prefs =
      PreferenceLists::build(static_cast<int>(tasks.size()), std::move(offers));
  const Matching m = run_matching(prefs, e.live_budgets(), e.trace());
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    PendingTask& p = e.pending()[tasks[k]];
    if (m.assignment[k] >= 0) {
      const Deal* deal = prefs.deal(static_cast<int>(k), m.assignment[k]);
      e.commit_remote(p, decision_from_deal(p.task, *deal));
    } else if (fail_rejected) {
      e.fail_task(p);
    }
  }
}

}  // namespace

void decide_bargain_match(Engine& e) {
  auto& pool = e.pending();
  const auto idx = active_pending(e);

  // Predicted deals for every (pending task, server) pair with an idle core.
  std::vector<std::vector<std::pair<int, Deal>>> offers_of(idx.size());
  std::vector<double> best_remote(idx.size(),
                                  -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    PendingTask& p = pool[idx[k]];
    if (!rate_capable(p)) continue;
    auto consider = [&](const ServerState& srv) {
      if (srv.idle_cores() < 1) return;
      const NegotiationOutcome out = e.negotiate_pair(p, srv.id);
      if (!out.agreed) return;
      offers_of[k].emplace_back(srv.id, out.deal);
      best_remote[k] = std::max(best_remote[k], out.deal.vehicle_utility);
    };
    for (const auto& srv : e.world().servers) consider(srv);
    consider(e.world().cloud);
  }

  // Local-vs-remote screening: local wins only when feasible, nonnegative
  // and strictly better than every predicted remote utility.
  std::vector<int> match_tasks;
  std::vector<CandidateOffer> match_offers;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    PendingTask& p = pool[idx[k]];
    if (p.status != PendingTask::Status::Pending) continue;
    if (p.deferred) continue;  // SIC-deferred: wait out the slot
    const auto local = e.local_candidate(p);
    const bool local_ok = local && local->vehicle_utility >= 0;
    if (local_ok && local->vehicle_utility > best_remote[k]) {
      e.commit_local(p, *local);
      continue;
    }
    if (offers_of[k].empty()) {
      if (!p.in_coverage) continue;  // no uplink here; retry next slot
      // In coverage yet rejected by every server before matching starts.
      if (local_ok) e.commit_local(p, *local);
      else e.fail_task(p);
      continue;
    }
    const int dense = static_cast<int>(match_tasks.size());
    match_tasks.push_back(idx[k]);
    for (auto& [srv, deal] : offers_of[k])
      match_offers.push_back({dense, srv, deal});
  }

  if (!match_tasks.empty()) {
    PreferenceLists prefs = PreferenceLists::build(
        static_cast<int>(match_tasks.size()), std::move(match_offers));
    const Matching m = run_matching(prefs, e.live_budgets(), e.trace());
    for (std::size_t k = 0; k < match_tasks.size(); ++k) {
      PendingTask& p = e.pending()[match_tasks[k]];
      if (m.assignment[k] >= 0) {
        const Deal* deal = prefs.deal(static_cast<int>(k), m.assignment[k]);
        e.commit_remote(p, decision_from_deal(p.task, *deal));
      } else {
        const auto local = e.local_candidate(p);
        if (local && local->vehicle_utility >= 0) e.commit_local(p, *local);
        else e.fail_task(p);
      }
    }
  }
}

void decide_elo(Engine& e) {
  for (int i : active_pending(e)) {
    PendingTask& p = e.pending()[i];
    const VehicleState& veh = e.world().vehicles[p.task.owner];
    if (!veh.core_idle(e.now())) continue;  // wait for the own core
    const auto local = e.local_candidate(p);
    if (local) e.commit_local(p, *local);
    else e.fail_task(p);
  }
}

void decide_exo(Engine& e) {
  struct Option {
    double utility = 0;
    int server = -1;  // -1 local
  };
  for (int i : active_pending(e)) {
    PendingTask& p = e.pending()[i];
    // Evaluate all destinations against the current state, then commit in
    // task order; a stale choice spills to the next-best one.
    std::vector<Option> options;
    const auto local = e.local_candidate(p);
    if (local && local->vehicle_utility >= 0)
      options.push_back({local->vehicle_utility, -1});
    if (rate_capable(p)) {
      auto consider = [&](const ServerState& srv) {
        if (srv.idle_cores() < 1) return;
        const NegotiationOutcome out = e.negotiate_pair(p, srv.id);
        if (out.agreed) options.push_back({out.deal.vehicle_utility, srv.id});
      };
      for (const auto& srv : e.world().servers) consider(srv);
      consider(e.world().cloud);
    }
    std::sort(options.begin(), options.end(), [](const Option& a, const Option& b) {
      if (a.utility != b.utility) return a.utility > b.utility;
      return a.server < b.server;
    });
    bool placed = false;
    for (const auto& opt : options) {
      if (opt.server < 0) {
        const auto again = e.local_candidate(p);
        if (again && again->vehicle_utility >= 0) {
          e.commit_local(p, *again);
          placed = true;
          break;
        }
      } else {
        const NegotiationOutcome out = e.negotiate_pair(p, opt.server);
        const ServerState& srv = e.world().server_by_id(opt.server);
        if (out.agreed && srv.idle_cores() >= 1) {
          e.commit_remote(p, decision_from_deal(p.task, out.deal));
          placed = true;
          break;
        }
      }
    }
    if (!placed && !p.deferred && p.in_coverage) e.fail_task(p);
  }
}

void decide_nvo(Engine& e) {
  std::vector<int> tasks;
  std::vector<CandidateOffer> offers;
  for (int i : active_pending(e)) {
    PendingTask& p = e.pending()[i];
    if (p.deferred || !p.in_coverage) continue;  // retry next slot
    const ServerState& srv = e.world().server_by_id(p.attached);
    const NegotiationOutcome out =
        srv.idle_cores() >= 1 ? e.negotiate_pair(p, srv.id) : NegotiationOutcome{};
    if (!out.agreed) {
      e.fail_task(p);
      continue;
    }
    offers.push_back({static_cast<int>(tasks.size()), srv.id, out.deal});
    tasks.push_back(i);
  }
  admit_and_commit(e, tasks, std::move(offers), /*fail_rejected=*/true);
}

void decide_eco(Engine& e) {
  std::vector<int> tasks;
  std::vector<CandidateOffer> offers;
  for (int i : active_pending(e)) {
    PendingTask& p = e.pending()[i];
    if (p.deferred || !p.in_coverage) continue;
    const NegotiationOutcome out = e.negotiate_pair(p, kCloudServerId);
    if (!out.agreed) {
      e.fail_task(p);
      continue;
    }
    offers.push_back({static_cast<int>(tasks.size()), kCloudServerId, out.deal});
    tasks.push_back(i);
  }
  admit_and_commit(e, tasks, std::move(offers), /*fail_rejected=*/true);
}

void decide_nco(Engine& e) {
  std::vector<int> tasks;
  std::vector<CandidateOffer> offers;
  for (int i : active_pending(e)) {
    PendingTask& p = e.pending()[i];
    const bool offload = e.world().rng.bernoulli(e.nco_probability(p.task.owner));
    if (!offload) {
      const VehicleState& veh = e.world().vehicles[p.task.owner];
      if (!veh.core_idle(e.now())) continue;
      const auto local = e.local_candidate(p);
      if (local) e.commit_local(p, *local);
      else e.fail_task(p);
      continue;
    }
    if (p.deferred || !p.in_coverage) continue;
    const ServerState& srv = e.world().server_by_id(p.attached);
    const NegotiationOutcome out =
        srv.idle_cores() >= 1 ? e.negotiate_pair(p, srv.id) : NegotiationOutcome{};
    if (!out.agreed) {
      e.fail_task(p);
      continue;
    }
    offers.push_back({static_cast<int>(tasks.size()), srv.id, out.deal});
    tasks.push_back(i);
  }
  admit_and_commit(e, tasks, std::move(offers), /*fail_rejected=*/true);
}

std::optional<Deal> opora_deal(const NegotiationContext& ctx, double eta,
                               int price_level) {
  const TaskSpec& task = ctx.task;
  if (ctx.uplink_bps <= 0) return std::nullopt;
  const double t_tran = task.input_bits / ctx.uplink_bps;
  if (t_tran > ctx.sojourn_current_s) return std::nullopt;
  double f_cap = ctx.available_hz;
  if (ctx.server.alpha > 0) {
    if (ctx.server_energy_left_j <= 0) return std::nullopt;
    f_cap = std::min(f_cap, std::pow(ctx.server_energy_left_j /
                                         (ctx.server.alpha * task.cycles),
                                     1.0 / (ctx.server.tau - 1.0)));
  }
  if (!(f_cap > 0)) return std::nullopt;

  // No demand-side refinement here: the server puts its whole available
  // resource on the table and sells it at the asked price level.
  const double f = f_cap;
  const DelayLeg leg = make_delay_leg(ctx, t_tran, f);
  const double slack = task.deadline_s - leg.var1_s;
  if (slack <= 0 || task.cycles / slack > f_cap) return std::nullopt;
  if (leg.dispatch_s > leg.sojourn_arrival_s) return std::nullopt;

  const double t_total = leg.var1_s + task.cycles / f;
  const PriceBounds bounds = price_bounds(f, task, t_total, ctx.server, ctx.vehicle);
  if (bounds.spread() <= 0) return std::nullopt;

  // Price after `price_level` rises of eta * spread above the floor.
  const double c = bounds.c_min + price_level * eta * bounds.spread();
  if (c > bounds.c_max * (1 + 1e-12)) return std::nullopt;

  const double energy = exec_energy(f, task.cycles, ctx.server.alpha, ctx.server.tau);
  const double u_srv = server_utility(c, f, ctx.server.price_ceiling_per_hz,
                                      ctx.server.cpu_hz, energy,
                                      ctx.server.energy_budget_j, ctx.server.weight);
  if (u_srv <= 0) return std::nullopt;
  const double payment = c * f;
  if (payment > ctx.vehicle.payment_budget) return std::nullopt;
  if (energy > ctx.server_energy_left_j) return std::nullopt;
  const double psi = satisfaction(t_total, task.deadline_s);
  const double u_veh = vehicle_utility_remote(psi, payment,
                                              ctx.vehicle.payment_budget,
                                              ctx.vehicle.weight);
  if (u_veh < 0) return std::nullopt;

  Deal d;
  d.vehicle = task.owner;
  d.server = ctx.server_id;
  d.cpu_hz = f;
  d.price_per_hz = c;
  d.vehicle_utility = u_veh;
  d.server_utility = u_srv;
  d.total_delay_s = t_total;
  d.compute_delay_s = task.cycles / f;
  d.transmit_delay_s = t_tran;
  d.payment = payment;
  d.energy_j = energy;
  d.arrival_server = leg.arrival;
  return d;
}

void decide_opora(Engine& e) {
  // Ascending-price one-to-one assignment: every price starts one rise
  // above the per-pair floor (the first level the seller profits at) and a
  // contested server keeps rising until at most one bidder remains or all
  // prices pass their caps.
  const double eta = e.world().cfg.baselines.opora_price_step;
  const int max_level = static_cast<int>(std::ceil(1.0 / eta));

  std::vector<int> tasks;
  for (int i : active_pending(e)) {
    PendingTask& p = e.pending()[i];
    if (p.deferred || !p.in_coverage) continue;
    tasks.push_back(i);
  }
  if (tasks.empty()) return;

  std::vector<const ServerState*> servers;
  for (const auto& srv : e.world().servers)
    if (srv.idle_cores() >= 1) servers.push_back(&srv);
  if (e.world().cloud.idle_cores() >= 1) servers.push_back(&e.world().cloud);

  std::vector<int> level(servers.size(), 1);
  std::vector<int> holder(servers.size(), -1);  // index into tasks
  std::vector<char> resolved(tasks.size(), 0);

  auto deal_at = [&](int k, std::size_t s) {
    return opora_deal(e.make_context(e.pending()[tasks[k]], servers[s]->id),
                      eta, level[s]);
  };

  // Each round every unassigned bidder points at its best affordable
  // server; over-demanded servers keep the best offer and raise the price.
  const int round_cap = static_cast<int>(servers.size()) * (max_level + 2) +
                        static_cast<int>(tasks.size()) + 8;
  for (int round = 0; round < round_cap; ++round) {
    std::vector<std::vector<int>> bids(servers.size());
    bool any_bid = false;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      if (resolved[k]) continue;
      bool held = false;
      for (std::size_t s = 0; s < servers.size(); ++s)
        if (holder[s] == static_cast<int>(k)) held = true;
      if (held) continue;
      double best_u = 0;
      int best_s = -1;
      for (std::size_t s = 0; s < servers.size(); ++s) {
        const auto d = deal_at(static_cast<int>(k), s);
        if (!d) continue;
        if (best_s < 0 || d->vehicle_utility > best_u) {
          best_u = d->vehicle_utility;
          best_s = static_cast<int>(s);
        }
      }
      if (best_s < 0) {
        resolved[k] = 1;  // priced out everywhere
        e.fail_task(e.pending()[tasks[k]]);
        continue;
      }
      bids[best_s].push_back(static_cast<int>(k));
      any_bid = true;
    }
    if (!any_bid) break;

    for (std::size_t s = 0; s < servers.size(); ++s) {
      if (bids[s].empty()) continue;
      std::vector<int> contenders = bids[s];
      if (holder[s] >= 0) contenders.push_back(holder[s]);
      int best = -1;
      double best_u = 0;
      for (int k : contenders) {
        const auto d = deal_at(k, s);
        if (!d) continue;
        if (best < 0 || d->server_utility > best_u ||
            (d->server_utility == best_u && k < best)) {
          best = k;
          best_u = d->server_utility;
        }
      }
      holder[s] = best;
      if (contenders.size() > 1 && level[s] < max_level) ++level[s];
    }
  }

  for (std::size_t s = 0; s < servers.size(); ++s) {
    if (holder[s] < 0) continue;
    const auto d = deal_at(holder[s], s);
    PendingTask& p = e.pending()[tasks[holder[s]]];
    if (d) {
      e.commit_remote(p, decision_from_deal(p.task, *d));
      resolved[holder[s]] = 1;
    }
  }
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    if (resolved[k]) continue;
    e.fail_task(e.pending()[tasks[k]]);
  }
}

}  // namespace vecsim
