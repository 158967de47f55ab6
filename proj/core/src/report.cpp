#include "vecsim/report.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace vecsim {

std::string csv_cell(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

void write_prefix(std::ostream& out, const RunInfo& info) {
  out << info.scheme << ',' << info.seed << ','
      << (info.param_key.empty() ? "-" : info.param_key) << ','
      << csv_cell(info.param_value) << ',';
}

}  // namespace

void write_run_csv(std::ostream& out, const RunInfo& info,
                   const RunMetrics& metrics) {
  out << kRunCsvHeader << '\n';
  for (const auto& r : metrics.slots) {
    write_prefix(out, info);
    out << r.slot << ',' << csv_cell(r.sw) << ',' << csv_cell(r.sw_cum) << ','
        << csv_cell(r.vehicle_utility) << ',' << csv_cell(r.server_utility)
        << ',' << csv_cell(r.apr) << ',' << csv_cell(r.acd) << ','
        << csv_cell(r.acr) << ",NA\n";
  }
}

void write_sweep_row(std::ostream& out, const RunInfo& info,
                     const RunMetrics& metrics) {
  write_prefix(out, info);
  const Slot last = metrics.slots.empty() ? 0 : metrics.slots.back().slot;
  out << last << ',' << csv_cell(metrics.slots.empty() ? 0.0 : metrics.slots.back().sw)
      << ',' << csv_cell(metrics.sw_cum) << ','
      << csv_cell(metrics.vehicle_utility_cum) << ','
      << csv_cell(metrics.server_utility_cum) << ','
      << csv_cell(metrics.apr(AprMode::Cycles)) << ','
      << csv_cell(metrics.acd()) << ',' << csv_cell(metrics.acr()) << ','
      << csv_cell(metrics.runtime_ms) << '\n';
}

void write_summary_json(std::ostream& out, const RunInfo& info,
                        const ScenarioConfig& cfg, const RunMetrics& metrics) {
  nlohmann::json j;
  j["scheme"] = info.scheme;
  j["seed"] = info.seed;
  if (!info.param_key.empty()) {
    j["param_key"] = info.param_key;
    j["param_value"] = info.param_value;
  }
  j["slots"] = cfg.slots;
  j["vehicles"] = cfg.vehicle_count;
  j["servers"] = cfg.server_count;
  j["sw_cum"] = metrics.sw_cum;
  j["vehicle_utility_cum"] = metrics.vehicle_utility_cum;
  j["server_utility_cum"] = metrics.server_utility_cum;
  j["n_generated"] = metrics.n_gen;
  j["n_completed"] = metrics.n_succ;
  j["n_failed"] = metrics.n_failed;
  auto cell = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  j["apr_cycles_per_s"] = cell(metrics.apr(AprMode::Cycles));
  j["apr_bits_per_s"] = cell(metrics.apr(AprMode::Bits));
  j["acd_s"] = cell(metrics.acd());
  j["acr"] = cell(metrics.acr());
  j["runtime_ms"] = metrics.runtime_ms;
  j["bargain_clamp_events"] = metrics.clamp_events;
  j["deals"] = metrics.deals;
  j["no_deals"] = metrics.no_deals;
  out << j.dump(2) << '\n';
}

}  // namespace vecsim
