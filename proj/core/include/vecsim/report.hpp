#pragma once

#include <ostream>
#include <string>

#include "vecsim/config.hpp"
#include "vecsim/metrics.hpp"

namespace vecsim {

/// Run identity attached to every CSV row.
struct RunInfo {
  std::string scheme;
  std::uint64_t seed = 0;
  std::string param_key;   // empty for plain runs
  double param_value = NAN;
};

/// "%.9g" rendering; non-finite values become the literal token NA.
std::string csv_cell(double v);

inline const char* kRunCsvHeader =
    "scheme,seed,param_key,param_value,slot,sw,sw_cum,veh_util,srv_util,apr,"
    "acd,acr,runtime_ms";

/// One row per slot. The runtime cell is NA here so identical (config,
/// seed) runs stay byte-identical; wall-clock lives in summary.json and in
/// sweep rows.
void write_run_csv(std::ostream& out, const RunInfo& info,
                   const RunMetrics& metrics);

/// One aggregate row per run (sweep output; same column set).
void write_sweep_row(std::ostream& out, const RunInfo& info,
                     const RunMetrics& metrics);

void write_summary_json(std::ostream& out, const RunInfo& info,
                        const ScenarioConfig& cfg, const RunMetrics& metrics);

}  // namespace vecsim
