#include "vecsim/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <thread>

#include "vecsim/engine.hpp"
#include "vecsim/report.hpp"

namespace vecsim {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void SweepSpec::validate(const ScenarioConfig& base) const {
  if (param_key.empty() || values.empty() || seeds.empty() || schemes.empty())
    throw ConfigError("sweep spec needs a key and nonempty value/seed/scheme lists");
  ScenarioConfig probe = base;
  apply_override(probe, param_key, format_value(values.front()));
  probe.validate();
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& base,
                                const SweepSpec& spec, int workers) {
  spec.validate(base);
  struct Cell {
    double value;
    Scheme scheme;
    std::uint64_t seed;
  };
  std::vector<Cell> grid;
  for (double v : spec.values)
    for (Scheme s : spec.schemes)
      for (std::uint64_t seed : spec.seeds) grid.push_back({v, s, seed});

  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      ScenarioConfig cfg = base;
      apply_override(cfg, spec.param_key, format_value(grid[i].value));
      cfg.scheme = grid[i].scheme;
      cfg.rng_seed = grid[i].seed;
      cfg.validate();
      rows[i].scheme = grid[i].scheme;
      rows[i].seed = grid[i].seed;
      rows[i].value = grid[i].value;
      rows[i].metrics = run_simulation(cfg);
    }
  };

  int n = workers > 0 ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, std::min<int>(n, static_cast<int>(grid.size())));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows) {
  out << kRunCsvHeader << '\n';
  for (const auto& r : rows) {
    RunInfo info;
    info.scheme = to_string(r.scheme);
    info.seed = r.seed;
    info.param_key = spec.param_key;
    info.param_value = r.value;
    write_sweep_row(out, info, r.metrics);
  }
}

}  // namespace vecsim
