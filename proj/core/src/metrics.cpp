#include "vecsim/metrics.hpp"

namespace vecsim {

RunMetrics recompute_from_slots(const std::vector<SlotRecord>& slots) {
  RunMetrics m;
  m.slots = slots;
  for (const auto& r : slots) {
    m.sw_cum += r.sw;
    m.vehicle_utility_cum += r.vehicle_utility;
    m.server_utility_cum += r.server_utility;
    m.n_gen += r.generated;
    m.n_succ += r.completed;
    m.n_failed += r.failed;
    m.sum_delay_s += r.completed_delay_s;
    m.sum_cycles += r.completed_cycles;
    m.sum_bits += r.completed_bits;
  }
  return m;
}

}  // namespace vecsim
