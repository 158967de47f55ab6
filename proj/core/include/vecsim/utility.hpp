#pragma once

#include <array>
#include <string>
#include <vector>

#include "vecsim/scenario.hpp"
#include "vecsim/types.hpp"

namespace vecsim {

/// Normalized delay satisfaction log(1 + (T_max - T)) / log(1 + T_max).
/// 1 at T = 0, 0 at T = T_max, -inf sentinel past the deadline (the caller
/// must prune deadline-infeasible offloads before scoring).
double satisfaction(double total_delay_s, double deadline_s);

double vehicle_utility_local(double psi, double energy_j,
                             double energy_budget_j, double weight);

double vehicle_utility_remote(double psi, double payment,
                              double payment_budget, double weight);

/// Server utility: normalized revenue minus normalized execution energy.
double server_utility(double price_per_hz, double alloc_hz,
                      double price_ceiling_per_hz, double server_cpu_hz,
                      double energy_j, double energy_budget_j, double weight);

/// One committed offloading decision within a slot.
struct Decision {
  TaskSpec task;
  DestKind kind = DestKind::Local;
  Deal deal;                // kind != Local only
  double total_delay_s = 0; // generation to completion, waiting included
  double energy_j = 0;      // vehicle energy (local) or server energy (remote)
  double vehicle_utility = 0;
  double server_utility = 0;  // 0 for local
};

/// Social welfare of one slot's committed decisions (Eq. 22 form: every
/// committed decision contributes U_i + U_a, with U_0 = 0 for local).
double social_welfare(const std::vector<Decision>& decisions);

/// Feasibility report for the constraint set C1..C12.
struct ConstraintReport {
  struct Entry {
    bool pass = true;
    std::vector<int> offenders;  // vehicle ids (server ids for C8/C9/C11)
  };
  std::array<Entry, 12> c;

  Entry& at(int number) { return c[number - 1]; }
  const Entry& at(int number) const { return c[number - 1]; }
  bool all_pass() const;
  std::string summary() const;
};

/// Evaluates every constraint against the committed decisions and the
/// post-commit world. Reporting only; never throws on violations.
ConstraintReport check_constraints(const WorldState& world,
                                   const std::vector<Decision>& decisions);

}  // namespace vecsim
