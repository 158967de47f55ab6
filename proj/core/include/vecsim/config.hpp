#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "vecsim/types.hpp"

namespace vecsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ArrivalMode { Literal, Corrected };
enum class MobilityPrior { Heading, Markov };
enum class LosModel { Constant, ExpDecay };
enum class TxPowerPolicy { LinearMidpoint, DbmMidpoint, Fixed };
enum class AprMode { Cycles, Bits };

struct MobilityConfig {
  ArrivalMode arrival_mode = ArrivalMode::Corrected;
  MobilityPrior prior = MobilityPrior::Heading;
  double prior_confidence = 1.0;   // P(zeta) when prior = heading
  double markov_stay_prob = 0.9;   // P(keep direction) when prior = markov
};

struct ChannelConfig {
  double bandwidth_hz = 40e6;
  double carrier_hz = 5.9e9;
  double reference_distance_m = 1.0;
  double pathloss_exp_los = 3.0;
  double pathloss_exp_nlos = 4.0;
  double nakagami_m_los = 2.0;
  double nakagami_m_nlos = 1.0;
  double shadowing_db_los = 3.0;
  double shadowing_db_nlos = 4.0;
  double noise_dbm = -98.0;
  LosModel los_model = LosModel::Constant;
  double los_probability = 0.8;      // constant model
  double los_decay_scale_m = 100.0;  // exp-decay model: p_L = exp(-d/scale)
  double tx_power_min_dbm = -85.0;
  double tx_power_max_dbm = 44.8;
  TxPowerPolicy tx_power_policy = TxPowerPolicy::LinearMidpoint;
  double tx_power_fixed_dbm = 23.0;
  int sic_capacity = 6;  // S_j
  double light_speed_mps = 3e8;

  double noise_w() const;
  double tx_power_w() const;
};

struct BackhaulConfig {
  double fiber_rate_bps = 4e9;    // r_f
  double cloud_rate_bps = 100e6;  // r_c
};

struct EnergyConfig {
  double alpha_vehicle = 7.8e-28;  // switched capacitance
  double alpha_server = 7.8e-28;
  double cpu_exponent = 3.0;  // tau
  double vehicle_energy_wh_per_ghz = 1.0;
  double server_energy_wh_per_ghz = 1.0;
};

struct PricingConfig {
  double vehicle_budget = 20.0;         // C_i^max, dollars per task
  double max_unit_price_per_ghz = 1.0;  // C_j^max scale, $/GHz of capacity
};

struct BargainConfig {
  int rounds = 10;  // T^b
  bool clamp_partitions = true;
};

struct BaselineConfig {
  double nco_init_prob = 0.5;
  double nco_learning_rate = 0.3;
  double opora_price_step = 0.1;  // eta, fraction of the bid-ask spread
};

struct OutputConfig {
  bool trace = false;
  AprMode apr_mode = AprMode::Cycles;
};

/// Task distribution parameters; defaults or a 5GAA application preset.
struct TaskProfile {
  double size_min_bits = 400e3 * 8;
  double size_max_bits = 1000e3 * 8;
  double result_min_bits = 0.1e3 * 8;
  double result_max_bits = 1e3 * 8;
  double intensity_min = 500;   // cycles/bit
  double intensity_max = 1500;
  double deadline_min_s = 0.1;
  double deadline_max_s = 5.0;
};

/// Returns the task distribution of one of the 5GAA vehicular applications.
/// Known names: collision_warning, emergency_break, traffic_jam,
/// hazardous_location, speed_harmonization.
TaskProfile load_app_preset(const std::string& name);

struct ScenarioConfig {
  double road_length_m = 10000;
  int lane_count = 6;
  double slot_duration_s = 0.1;  // dt
  Slot epoch_slots = 10;         // T0
  Slot slots = 200;              // horizon T
  int vehicle_count = 100;
  int server_count = 30;
  double server_radius_m = 166;
  double speed_min_mps = 2;
  double speed_max_mps = 30;
  double task_gen_probability = 0.04;
  std::uint64_t rng_seed = 1;
  Scheme scheme = Scheme::BargainMatch;
  std::string app_preset;  // empty = default task profile

  TaskProfile task;
  double vehicle_cpu_min_ghz = 0.5;
  double vehicle_cpu_max_ghz = 1.0;
  double server_cpu_min_ghz = 2.0;
  double server_cpu_max_ghz = 10.0;
  double cloud_cpu_ghz = 30.0;
  int server_cores_min = 2;
  int server_cores_max = 8;
  int cloud_cores = 1 << 14;  // effectively unconstrained
  double vehicle_weight_min = 0.5;
  double vehicle_weight_max = 0.5;
  double server_weight_min = 0.5;
  double server_weight_max = 0.5;

  MobilityConfig mobility;
  ChannelConfig channel;
  BackhaulConfig backhaul;
  EnergyConfig energy;
  PricingConfig pricing;
  BargainConfig bargain;
  BaselineConfig baselines;
  OutputConfig output;

  /// Throws ConfigError when any invariant is violated (overlapping
  /// coverage, degenerate weights, inverted ranges, ...).
  void validate() const;
};

/// Parses the flat key/value config format with [section] headers.
/// Unknown keys and malformed values are errors.
ScenarioConfig load_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

/// Applies a "section.key=value" override (CLI and sweep hook).
void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value);

}  // namespace vecsim
