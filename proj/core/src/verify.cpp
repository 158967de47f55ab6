#include "vecsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vecsim/costmodel.hpp"
#include "vecsim/utility.hpp"

namespace vecsim {

namespace {

TaskSpec random_task(Rng& rng) {
  TaskSpec t;
  t.owner = 0;
  t.input_bits = rng.uniform(400e3 * 8, 1000e3 * 8);
  t.output_bits = rng.uniform(0.1e3 * 8, 1e3 * 8);
  t.intensity = rng.uniform(500, 1500);
  t.cycles = t.input_bits * t.intensity;
  t.deadline_s = rng.uniform(0.1, 5.0);
  return t;
}

ServerEcon random_server_econ(Rng& rng) {
  ServerEcon s;
  const double f_ghz = rng.uniform(2.0, 10.0);
  s.cpu_hz = f_ghz * 1e9;
  s.price_ceiling_per_hz = f_ghz * 1e-9;  // 1 $/GHz of capacity
  s.energy_budget_j = f_ghz * 3600.0;
  s.weight = rng.uniform(0.1, 0.9);
  s.alpha = 7.8e-28;
  s.tau = 3.0;
  return s;
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

// The vehicle-side objective assembled directly from the model formulas;
// deliberately not routed through optimal_allocation.
double vehicle_objective(double f, double c, const TaskSpec& task,
                         double var1, const VehicleEcon& veh) {
  const double t_total = var1 + task.cycles / f;
  const double psi =
      std::log1p(task.deadline_s - t_total) / std::log1p(task.deadline_s);
  return veh.weight * psi -
         (1.0 - veh.weight) * c * f / veh.payment_budget;
}

double golden_section_max(double lo, double hi,
                          const std::function<double(double)>& fn) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int i = 0; i < 200; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = fn(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = fn(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

NegotiationContext random_context(Rng& rng) {
  NegotiationContext ctx;
  ctx.task = random_task(rng);
  ctx.elapsed_s = 0;
  ctx.vehicle.payment_budget = 20.0;
  ctx.vehicle.weight = rng.uniform(0.1, 0.9);
  ctx.uplink_bps = log_uniform(rng, 1e6, 1e9);
  ctx.sojourn_current_s = rng.uniform(0.05, 60.0);
  ctx.cloud = rng.bernoulli(0.2);
  ctx.server_id = ctx.cloud ? kCloudServerId : 1 + static_cast<int>(rng.uniform_int(0, 3));
  ctx.task_handover = !ctx.cloud && rng.bernoulli(0.3);
  ctx.server = random_server_econ(rng);
  ctx.available_hz = ctx.server.cpu_hz * rng.uniform(0.3, 1.0);
  ctx.server_energy_left_j = ctx.server.energy_budget_j * rng.uniform(0.2, 1.0);
  const int arrival = ctx.cloud ? 1 : ctx.server_id + (rng.bernoulli(0.3) ? 1 : 0);
  const double sojourn = rng.uniform(0.05, 60.0);
  ctx.arrival = [arrival, sojourn](double) {
    return ArrivalEstimate{arrival, sojourn};
  };
  ctx.bargain_rounds = 10;
  ctx.clamp_partitions = true;
  return ctx;
}

MatchInstance random_match_instance(Rng& rng, int max_tasks, int max_servers) {
  MatchInstance inst;
  inst.task_count = 1 + static_cast<int>(rng.uniform_int(0, max_tasks - 1));
  const int n_edge = 1 + static_cast<int>(rng.uniform_int(0, max_servers - 1));
  const bool with_cloud = n_edge < max_servers && rng.bernoulli(0.5);

  struct Srv {
    int id;
    bool cloud;
    ServerEcon econ;
    ServerBudget budget;
  };
  std::vector<Srv> servers;
  for (int j = 1; j <= n_edge; ++j) {
    Srv s;
    s.id = j;
    s.cloud = false;
    s.econ = random_server_econ(rng);
    s.budget.server = j;
    s.budget.idle_cores = 1 + static_cast<int>(rng.uniform_int(0, 3));
    s.budget.cpu_hz = s.econ.cpu_hz * rng.uniform(0.3, 1.0);
    s.budget.energy_j = s.econ.energy_budget_j * rng.uniform(0.2, 1.0);
    servers.push_back(s);
  }
  if (with_cloud) {
    Srv s;
    s.id = kCloudServerId;
    s.cloud = true;
    s.econ = random_server_econ(rng);
    s.econ.cpu_hz = 30e9;
    s.econ.price_ceiling_per_hz = 30e-9;
    s.econ.energy_budget_j = 30 * 3600.0;
    s.budget.server = kCloudServerId;
    s.budget.idle_cores = 1 + static_cast<int>(rng.uniform_int(0, 7));
    s.budget.cpu_hz = s.econ.cpu_hz * rng.uniform(0.3, 1.0);
    s.budget.energy_j = s.econ.energy_budget_j * rng.uniform(0.2, 1.0);
    servers.push_back(s);
  }

  for (int k = 0; k < inst.task_count; ++k) {
    const TaskSpec task = random_task(rng);
    const double uplink = log_uniform(rng, 1e6, 1e9);
    const double sojourn_cur = rng.uniform(0.05, 60.0);
    const double veh_weight = rng.uniform(0.1, 0.9);
    for (const auto& s : servers) {
      NegotiationContext ctx;
      ctx.task = task;
      ctx.task.owner = k;
      ctx.vehicle.payment_budget = 20.0;
      ctx.vehicle.weight = veh_weight;
      ctx.uplink_bps = uplink;
      ctx.sojourn_current_s = sojourn_cur;
      ctx.server_id = s.id;
      ctx.cloud = s.cloud;
      ctx.task_handover = !s.cloud && rng.bernoulli(0.3);
      ctx.server = s.econ;
      ctx.available_hz = s.budget.cpu_hz;
      ctx.server_energy_left_j = s.budget.energy_j;
      const double sojourn_arr = rng.uniform(0.05, 60.0);
      const int arr = s.id;
      ctx.arrival = [arr, sojourn_arr](double) {
        return ArrivalEstimate{arr, sojourn_arr};
      };
      const NegotiationOutcome out = negotiate(ctx);
      if (out.agreed) inst.offers.push_back({k, s.id, out.deal});
    }
  }
  for (const auto& s : servers) inst.budgets.push_back(s.budget);
  return inst;
}

VerifyReport::Suite verify_matching_stability(Rng& rng, int instances) {
  VerifyReport::Suite suite;
  suite.name = "matching_stability";
  long pairs = 0;
  for (int i = 0; i < instances; ++i) {
    const MatchInstance inst = random_match_instance(rng, 10, 4);
    PreferenceLists prefs = PreferenceLists::build(inst.task_count, inst.offers);
    const Matching m = run_matching(prefs, inst.budgets);
    const auto blocking = verify_stability(prefs, inst.budgets, m);
    pairs += static_cast<long>(blocking.size());
    if (!blocking.empty() || m.proposal_cap_hit) ++suite.failures;
    ++suite.checked;
  }
  std::ostringstream d;
  d << pairs << " blocking pairs across " << instances << " instances";
  suite.detail = d.str();
  return suite;
}

VerifyReport::Suite verify_matching_pareto(Rng& rng, int instances) {
  VerifyReport::Suite suite;
  suite.name = "matching_weak_pareto";
  for (int i = 0; i < instances; ++i) {
    const MatchInstance inst = random_match_instance(rng, 6, 3);
    PreferenceLists prefs = PreferenceLists::build(inst.task_count, inst.offers);
    const Matching m = run_matching(prefs, inst.budgets);
    if (verify_weak_pareto(prefs, inst.budgets, m)) ++suite.failures;
    ++suite.checked;
  }
  suite.detail = "exhaustive search for a matching dominating every task";
  return suite;
}

VerifyReport::Suite verify_deal_soundness(Rng& rng, int negotiations) {
  VerifyReport::Suite suite;
  suite.name = "deal_soundness";
  long agreed = 0;
  for (int i = 0; i < negotiations; ++i) {
    const NegotiationContext ctx = random_context(rng);
    const NegotiationOutcome out = negotiate(ctx);
    ++suite.checked;
    if (!out.agreed) continue;
    ++agreed;
    const Deal& d = out.deal;
    const PriceBounds b = price_bounds(d.cpu_hz, ctx.task, d.total_delay_s,
                                       ctx.server, ctx.vehicle);
    bool ok = d.vehicle_utility >= 0 && d.server_utility >= 0;
    ok = ok && d.cpu_hz <= ctx.available_hz * (1 + 1e-9);
    ok = ok && d.payment <= ctx.vehicle.payment_budget * (1 + 1e-9);
    ok = ok && d.price_per_hz >= b.c_min * (1 - 1e-6) - 1e-300;
    ok = ok && d.price_per_hz <= b.c_max * (1 + 1e-6);
    if (!ok) ++suite.failures;

    // Lemma-1 root checks at the deal's allocation.
    const double energy =
        exec_energy(d.cpu_hz, ctx.task.cycles, ctx.server.alpha, ctx.server.tau);
    const double u_min =
        server_utility(b.c_min, d.cpu_hz, ctx.server.price_ceiling_per_hz,
                       ctx.server.cpu_hz, energy, ctx.server.energy_budget_j,
                       ctx.server.weight);
    const double rev_scale = ctx.server.weight * b.c_min * d.cpu_hz /
                             (ctx.server.price_ceiling_per_hz * ctx.server.cpu_hz);
    const double cost_scale =
        (1 - ctx.server.weight) * energy / ctx.server.energy_budget_j;
    if (std::abs(u_min) >
        1e-9 * std::max({std::abs(rev_scale), std::abs(cost_scale), 1e-300}))
      ++suite.failures;

    const double psi = satisfaction(d.total_delay_s, ctx.task.deadline_s);
    const double u_max = vehicle_utility_remote(
        psi, b.c_max * d.cpu_hz, ctx.vehicle.payment_budget, ctx.vehicle.weight);
    const double psi_scale = ctx.vehicle.weight * std::abs(psi);
    if (std::abs(u_max) > 1e-9 * std::max(psi_scale, 1e-300)) ++suite.failures;
  }
  std::ostringstream d;
  d << agreed << " deals out of " << negotiations << " negotiations";
  suite.detail = d.str();
  return suite;
}

VerifyReport::Suite verify_allocation_stationarity(Rng& rng, int draws) {
  VerifyReport::Suite suite;
  suite.name = "allocation_stationarity";
  for (int i = 0; i < draws; ++i) {
    const TaskSpec task = random_task(rng);
    VehicleEcon veh;
    veh.payment_budget = 20.0;
    veh.weight = rng.uniform(0.1, 0.9);
    const double var1 = rng.uniform(0.0, 0.8) * task.deadline_s;
    const double c = log_uniform(rng, 1e-12, 1e-8);
    const auto f_star = optimal_allocation(c, task, var1, veh);
    if (!f_star) continue;
    ++suite.checked;
    const double f = *f_star;

    // Central finite differences with the mandated 1e-6 relative step.
    const double h = 1e-6 * f;
    const double up = vehicle_objective(f + h, c, task, var1, veh);
    const double dn = vehicle_objective(f - h, c, task, var1, veh);
    const double deriv = (up - dn) / (2.0 * h);
    const double psi_term = veh.weight;  // |psi| <= 1 near the optimum
    const double cost_term = (1.0 - veh.weight) * c * f / veh.payment_budget;
    // First-order residual relative to the utility's natural scale.
    const double scale = std::max({psi_term, cost_term, 1e-12});
    if (std::abs(deriv) * f > 1e-6 * scale) {
      ++suite.failures;
      continue;
    }

    // Golden-section maximizer agreement within 1e-4 relative.
    const double f_lo = task.cycles / (task.deadline_s - var1) * (1 + 1e-9);
    const double f_hi = 8.0 * f;
    const double f_gs = golden_section_max(
        std::min(f_lo, f * 0.5), f_hi,
        [&](double x) { return vehicle_objective(x, c, task, var1, veh); });
    if (std::abs(f_gs - f) > 1e-4 * f) ++suite.failures;
  }
  std::ostringstream d;
  d << suite.checked << " interior optima of " << draws << " draws";
  suite.detail = d.str();
  return suite;
}

VerifyReport::Suite verify_partition_identities() {
  VerifyReport::Suite suite;
  suite.name = "partition_identities";
  const int horizons[] = {1, 2, 3, 4, 5, 10, 50, 200};
  const int n = 50;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double ei = (1.0 - 1e-9) * a / (n - 1);
      const double ej = (1.0 - 1e-9) * b / (n - 1);
      for (int tb : horizons) {
        const Partitions p = optimal_partitions(ei, ej, tb, /*clamp=*/false);
        ++suite.checked;
        if (std::abs(p.vehicle_proposes.vehicle + p.vehicle_proposes.server -
                     1.0) > 1e-12)
          ++suite.failures;
      }
    }
  }
  // Long-horizon limit at eps_i = eps_j = 0.9.
  const double limit = 0.9 - 0.1 / 0.19;
  for (int tb : {200, 500, 1000}) {
    const Partitions p = optimal_partitions(0.9, 0.9, tb, false);
    ++suite.checked;
    if (std::abs(p.vehicle_proposes.vehicle - limit) > 1e-9) ++suite.failures;
  }
  suite.detail = "share identity on a 50x50x8 grid plus the long-horizon limit";
  return suite;
}

VerifyReport run_verification(const VerifyOptions& opt) {
  VerifyReport report;
  Rng rng(opt.seed);
  report.suites.push_back(verify_matching_stability(rng, opt.stability_instances));
  report.suites.push_back(verify_matching_pareto(rng, opt.pareto_instances));
  report.suites.push_back(verify_deal_soundness(rng, opt.deal_negotiations));
  report.suites.push_back(
      verify_allocation_stationarity(rng, opt.stationarity_draws));
  report.suites.push_back(verify_partition_identities());
  return report;
}

}  // namespace vecsim
