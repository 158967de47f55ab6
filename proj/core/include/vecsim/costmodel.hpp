#pragma once

#include "vecsim/config.hpp"
#include "vecsim/types.hpp"

namespace vecsim {

/// Compute delay C_req / f; f = 0 yields the infinite-delay sentinel.
double local_delay(const TaskSpec& task, double cpu_hz);

/// Uplink + computation + task/result handover over the fiber backhaul.
/// The factor 2 on handovers reflects the pass through the controller.
double edge_delay(const TaskSpec& task, double uplink_bps, double alloc_hz,
                  bool task_handover, bool result_handover,
                  const BackhaulConfig& bh);

/// Uplink + computation + edge-cloud backhaul for task and result.
double cloud_delay(const TaskSpec& task, double uplink_bps, double alloc_hz,
                   const BackhaulConfig& bh);

/// Execution energy alpha * f^(tau-1) * C_req.
double exec_energy(double cpu_hz, double cycles, double alpha, double tau);

}  // namespace vecsim
