#include "vecsim/costmodel.hpp"

#include <cmath>

namespace vecsim {

double local_delay(const TaskSpec& task, double cpu_hz) {
  if (cpu_hz <= 0.0) return kInfiniteDelay;
  return task.cycles / cpu_hz;
}

double edge_delay(const TaskSpec& task, double uplink_bps, double alloc_hz,
                  bool task_handover, bool result_handover,
                  const BackhaulConfig& bh) {
  double t = task.input_bits / uplink_bps + task.cycles / alloc_hz;
  if (task_handover) t += 2.0 * task.input_bits / bh.fiber_rate_bps;
  if (result_handover) t += 2.0 * task.output_bits / bh.fiber_rate_bps;
  return t;
}

double cloud_delay(const TaskSpec& task, double uplink_bps, double alloc_hz,
                   const BackhaulConfig& bh) {
  return task.input_bits / uplink_bps + task.cycles / alloc_hz +
         (task.input_bits + task.output_bits) / bh.cloud_rate_bps;
}

double exec_energy(double cpu_hz, double cycles, double alpha, double tau) {
  return alpha * std::pow(cpu_hz, tau - 1.0) * cycles;
}

}  // namespace vecsim
