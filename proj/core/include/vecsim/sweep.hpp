#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "vecsim/config.hpp"
#include "vecsim/metrics.hpp"

namespace vecsim {

/// Cartesian experiment grid over one config key.
struct SweepSpec {
  std::string param_key;  // full config key, e.g. scenario.vehicle_count
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<Scheme> schemes;

  void validate(const ScenarioConfig& base) const;
};

struct SweepRow {
  Scheme scheme = Scheme::BargainMatch;
  std::uint64_t seed = 0;
  double value = 0;
  RunMetrics metrics;
};

/// Runs values x schemes x seeds, parallelized across a worker pool; each
/// run owns its state and rows come back in deterministic grid order.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base,
                                const SweepSpec& spec, int workers = 0);

void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);

/// Renders a value the way apply_override expects (integral doubles print
/// without a decimal point).
std::string format_value(double v);

}  // namespace vecsim
