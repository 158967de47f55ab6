#include "vecsim/scenario.hpp"

#include <cmath>

namespace vecsim {

namespace {
constexpr double kLaneWidthM = 3.5;
constexpr double kWhToJoule = 3600.0;
}  // namespace

double WorldState::wrap_x(double x) const {
  const double L = cfg.road_length_m;
  double r = std::fmod(x, L);
  if (r < 0) r += L;
  return r;
}

int WorldState::nearest_server_id(double x) const {
  int best = 1;
  double best_d = std::abs(x - servers[0].x);
  for (std::size_t k = 1; k < servers.size(); ++k) {
    const double d = std::abs(x - servers[k].x);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(k) + 1;
    }
  }
  return best;
}

bool WorldState::in_coverage(const VehicleState& v, const ServerState& s) const {
  return !s.cloud && std::abs(v.x - s.x) <= s.radius_m;
}

WorldState build_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  WorldState w(cfg);

  const double spacing = cfg.road_length_m / cfg.server_count;
  w.servers.reserve(cfg.server_count);
  for (int j = 0; j < cfg.server_count; ++j) {
    ServerState s;
    s.id = j + 1;
    s.x = (j + 0.5) * spacing;
    s.y = 0;
    s.radius_m = cfg.server_radius_m;
    const double f_ghz = w.rng.uniform(cfg.server_cpu_min_ghz, cfg.server_cpu_max_ghz);
    s.cpu_hz = f_ghz * 1e9;
    s.cores = static_cast<int>(w.rng.uniform_int(cfg.server_cores_min, cfg.server_cores_max));
    s.energy_budget_j = f_ghz * cfg.energy.server_energy_wh_per_ghz * kWhToJoule;
    s.price_ceiling_per_hz = cfg.pricing.max_unit_price_per_ghz * f_ghz * 1e-9;
    s.weight = w.rng.uniform(cfg.server_weight_min, cfg.server_weight_max);
    s.sic_capacity = cfg.channel.sic_capacity;
    w.servers.push_back(s);
  }

  {
    ServerState o;
    o.id = kCloudServerId;
    o.cloud = true;
    o.cpu_hz = cfg.cloud_cpu_ghz * 1e9;
    o.cores = cfg.cloud_cores;
    o.energy_budget_j = cfg.cloud_cpu_ghz * cfg.energy.server_energy_wh_per_ghz * kWhToJoule;
    o.price_ceiling_per_hz = cfg.pricing.max_unit_price_per_ghz * cfg.cloud_cpu_ghz * 1e-9;
    o.weight = 0.5 * (cfg.server_weight_min + cfg.server_weight_max);
    w.cloud = o;
  }

  const int lanes_per_dir = std::max(1, cfg.lane_count / 2);
  const double tx_w = cfg.channel.tx_power_w();
  w.vehicles.reserve(cfg.vehicle_count);
  for (int i = 0; i < cfg.vehicle_count; ++i) {
    VehicleState v;
    v.id = i;
    v.x = w.rng.uniform(0.0, cfg.road_length_m);
    v.prev_epoch_x = v.x;
    v.heading = w.rng.bernoulli(0.5) ? 1 : -1;
    const int lane = static_cast<int>(w.rng.uniform_int(0, lanes_per_dir - 1));
    v.y = v.heading * (lane + 0.5) * kLaneWidthM;
    v.speed_mps = w.rng.uniform(cfg.speed_min_mps, cfg.speed_max_mps);
    const double f_ghz = w.rng.uniform(cfg.vehicle_cpu_min_ghz, cfg.vehicle_cpu_max_ghz);
    v.cpu_hz = f_ghz * 1e9;
    v.weight = w.rng.uniform(cfg.vehicle_weight_min, cfg.vehicle_weight_max);
    v.payment_budget = cfg.pricing.vehicle_budget;
    v.energy_budget_j = f_ghz * cfg.energy.vehicle_energy_wh_per_ghz * kWhToJoule;
    v.tx_power_w = tx_w;
    w.vehicles.push_back(v);
  }
  return w;
}

std::vector<TaskSpec> sample_tasks(WorldState& world, Slot slot) {
  std::vector<TaskSpec> out;
  const auto& p = world.cfg.task;
  // Generation is independent of the core state: a vehicle whose core is
  // busy can still request remote offloading (C3 limits generation count,
  // not the destination).
  for (auto& v : world.vehicles) {
    if (!world.rng.bernoulli(world.cfg.task_gen_probability)) continue;
    TaskSpec t;
    t.owner = v.id;
    t.gen_slot = slot;
    t.input_bits = world.rng.uniform(p.size_min_bits, p.size_max_bits);
    t.output_bits = world.rng.uniform(p.result_min_bits, p.result_max_bits);
    t.intensity = world.rng.uniform(p.intensity_min, p.intensity_max);
    t.cycles = t.input_bits * t.intensity;
    t.deadline_s = world.rng.uniform(p.deadline_min_s, p.deadline_max_s);
    out.push_back(t);
  }
  return out;
}

}  // namespace vecsim
