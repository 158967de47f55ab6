// vecsim command line: single runs, parameter sweeps and the property
// verification suite. Outputs land in --out as run.csv / summary.json
// (plain runs), sweep.csv (sweeps) and optional trace.txt.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vecsim/engine.hpp"
#include "vecsim/report.hpp"
#include "vecsim/sweep.hpp"
#include "vecsim/verify.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int cmd_verify() {
  const vecsim::VerifyReport report = vecsim::run_verification({});
  for (const auto& s : report.suites)
    std::cout << (s.failures == 0 ? "[PASS] " : "[FAIL] ") << s.name << ": "
              << s.checked << " checks, " << s.failures << " failures ("
              << s.detail << ")\n";
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vehicular edge computing offloading simulator"};
  std::string config_path;
  std::string scheme_arg;
  std::string seed_arg;
  std::string out_dir = ".";
  std::string sweep_arg;
  long slots = -1;
  int vehicles = -1;
  bool verify = false;
  app.add_option("--config", config_path, "config file (structured text)");
  app.add_option("--scheme", scheme_arg,
                 "scheme name or comma list (BARGAIN_MATCH, ELO, EXO, NVO, "
                 "ECO, NCO, OPORA)");
  app.add_option("--seed", seed_arg, "rng seed or comma list");
  app.add_option("--slots", slots, "horizon in slots");
  app.add_option("--vehicles", vehicles, "vehicle count");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--sweep", sweep_arg, "KEY=v1,v2,... parameter sweep");
  app.add_flag("--verify", verify, "run the property verification suite");
  CLI11_PARSE(app, argc, argv);

  try {
    if (verify) return cmd_verify();

    vecsim::ScenarioConfig cfg;
    if (!config_path.empty()) {
      if (!std::filesystem::exists(config_path)) {
        std::cerr << "config file not found: " << config_path << "\n";
        return 2;
      }
      cfg = vecsim::load_config_file(config_path);
    }
    if (slots >= 0) cfg.slots = slots;
    if (vehicles >= 0) cfg.vehicle_count = vehicles;

    std::vector<vecsim::Scheme> schemes;
    for (const auto& s : split(scheme_arg, ','))
      if (!s.empty()) schemes.push_back(vecsim::scheme_from_string(s));
    std::vector<std::uint64_t> seeds;
    for (const auto& s : split(seed_arg, ','))
      if (!s.empty()) seeds.push_back(std::stoull(s));

    std::filesystem::create_directories(out_dir);

    if (!sweep_arg.empty()) {
      const auto eq = sweep_arg.find('=');
      if (eq == std::string::npos) {
        std::cerr << "--sweep expects KEY=v1,v2,...\n";
        return 2;
      }
      vecsim::SweepSpec spec;
      spec.param_key = sweep_arg.substr(0, eq);
      for (const auto& v : split(sweep_arg.substr(eq + 1), ','))
        spec.values.push_back(std::stod(v));
      spec.seeds = seeds.empty() ? std::vector<std::uint64_t>{cfg.rng_seed} : seeds;
      spec.schemes = schemes.empty() ? std::vector<vecsim::Scheme>{cfg.scheme}
                                     : schemes;
      const auto rows = vecsim::run_sweep(cfg, spec);
      const auto path = std::filesystem::path(out_dir) / "sweep.csv";
      std::ofstream out(path);
      vecsim::write_sweep_csv(out, spec, rows);
      std::cout << "sweep: " << rows.size() << " runs -> " << path.string() << "\n";
      return 0;
    }

    if (!schemes.empty()) cfg.scheme = schemes.front();
    if (!seeds.empty()) cfg.rng_seed = seeds.front();
    cfg.validate();

    std::ofstream trace;
    if (cfg.output.trace)
      trace.open(std::filesystem::path(out_dir) / "trace.txt");
    vecsim::Engine engine(cfg, cfg.output.trace ? &trace : nullptr);
    const vecsim::RunMetrics metrics = engine.run();

    vecsim::RunInfo info;
    info.scheme = vecsim::to_string(cfg.scheme);
    info.seed = cfg.rng_seed;
    {
      std::ofstream out(std::filesystem::path(out_dir) / "run.csv");
      vecsim::write_run_csv(out, info, metrics);
    }
    {
      std::ofstream out(std::filesystem::path(out_dir) / "summary.json");
      vecsim::write_summary_json(out, info, cfg, metrics);
    }
    std::cout << "scheme=" << info.scheme << " seed=" << info.seed
              << " slots=" << cfg.slots << " sw_cum=" << metrics.sw_cum
              << " acr=" << vecsim::csv_cell(metrics.acr())
              << " acd=" << vecsim::csv_cell(metrics.acd())
              << " apr=" << vecsim::csv_cell(metrics.apr(cfg.output.apr_mode))
              << " runtime_ms=" << metrics.runtime_ms << "\n";
    return 0;
  } catch (const vecsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
