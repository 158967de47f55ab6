#pragma once

#include <cmath>
#include <vector>

#include "vecsim/config.hpp"
#include "vecsim/types.hpp"

namespace vecsim {

/// Per-slot event counts and the streaming aggregates as of that slot.
struct SlotRecord {
  Slot slot = 0;
  double sw = 0;
  double sw_cum = 0;
  double vehicle_utility = 0;  // this slot's committed vehicle utilities
  double server_utility = 0;
  int generated = 0;
  int committed = 0;
  int completed = 0;
  int failed = 0;
  double completed_delay_s = 0;  // sums over this slot's completions
  double completed_cycles = 0;
  double completed_bits = 0;
  double apr = NAN;  // streaming values; NAN renders as NA
  double acd = NAN;
  double acr = NAN;
};

struct RunMetrics {
  std::vector<SlotRecord> slots;
  double sw_cum = 0;
  double vehicle_utility_cum = 0;
  double server_utility_cum = 0;
  long n_gen = 0;
  long n_succ = 0;
  long n_failed = 0;
  double sum_delay_s = 0;  // over completed tasks
  double sum_cycles = 0;
  double sum_bits = 0;
  double runtime_ms = 0;
  long clamp_events = 0;
  long deals = 0;
  long no_deals = 0;

  /// Average processing rate: completed work per unit completion time.
  /// Cycles mode divides C_req sums, bits mode divides D_in sums.
  double apr(AprMode mode) const {
    if (sum_delay_s <= 0) return NAN;
    return (mode == AprMode::Cycles ? sum_cycles : sum_bits) / sum_delay_s;
  }
  /// Mean completion delay over successfully completed tasks.
  double acd() const { return n_succ > 0 ? sum_delay_s / n_succ : NAN; }
  /// Completed share of all generated tasks.
  double acr() const {
    return n_gen > 0 ? static_cast<double>(n_succ) / n_gen : NAN;
  }
};

/// Rebuilds the aggregates from the raw per-slot log; must reproduce the
/// streaming values exactly.
RunMetrics recompute_from_slots(const std::vector<SlotRecord>& slots);

}  // namespace vecsim
