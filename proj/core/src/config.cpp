#include "vecsim/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace vecsim {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::BargainMatch: return "BARGAIN_MATCH";
    case Scheme::Elo: return "ELO";
    case Scheme::Exo: return "EXO";
    case Scheme::Nvo: return "NVO";
    case Scheme::Eco: return "ECO";
    case Scheme::Nco: return "NCO";
    case Scheme::Opora: return "OPORA";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "BARGAIN_MATCH") return Scheme::BargainMatch;
  if (name == "ELO") return Scheme::Elo;
  if (name == "EXO") return Scheme::Exo;
  if (name == "NVO") return Scheme::Nvo;
  if (name == "ECO") return Scheme::Eco;
  if (name == "NCO") return Scheme::Nco;
  if (name == "OPORA") return Scheme::Opora;
  throw ConfigError("unknown scheme: " + name);
}

double ChannelConfig::noise_w() const {
  return std::pow(10.0, noise_dbm / 10.0) * 1e-3;
}

double ChannelConfig::tx_power_w() const {
  const double lo_w = std::pow(10.0, tx_power_min_dbm / 10.0) * 1e-3;
  const double hi_w = std::pow(10.0, tx_power_max_dbm / 10.0) * 1e-3;
  switch (tx_power_policy) {
    case TxPowerPolicy::LinearMidpoint: return 0.5 * (lo_w + hi_w);
    case TxPowerPolicy::DbmMidpoint:
      return std::pow(10.0, 0.5 * (tx_power_min_dbm + tx_power_max_dbm) / 10.0) * 1e-3;
    case TxPowerPolicy::Fixed:
      return std::pow(10.0, tx_power_fixed_dbm / 10.0) * 1e-3;
  }
  return lo_w;
}

TaskProfile load_app_preset(const std::string& name) {
  TaskProfile p;
  // Shared across all 5GAA presets.
  p.intensity_min = 1e3;
  p.intensity_max = 1e4;
  p.result_min_bits = 0.1e3 * 8;
  p.result_max_bits = 1e3 * 8;
  if (name == "collision_warning") {
    p.size_min_bits = 300 * 8;
    p.size_max_bits = 1000 * 8;
    p.deadline_min_s = p.deadline_max_s = 0.100;
  } else if (name == "emergency_break") {
    p.size_min_bits = 200 * 8;
    p.size_max_bits = 400 * 8;
    p.deadline_min_s = p.deadline_max_s = 0.120;
  } else if (name == "traffic_jam") {
    p.size_min_bits = p.size_max_bits = 300 * 8;
    p.deadline_min_s = p.deadline_max_s = 2.000;
  } else if (name == "hazardous_location") {
    // Safety variant; the route-obstruction variant has a [10^4, 2x10^5] ms
    // deadline and can be expressed through the plain config keys.
    p.size_min_bits = 300 * 8;
    p.size_max_bits = 1000 * 8;
    p.deadline_min_s = 1.000;
    p.deadline_max_s = 2.000;
  } else if (name == "speed_harmonization") {
    p.size_min_bits = 300 * 8;
    p.size_max_bits = 1000 * 8;
    p.deadline_min_s = 0.400;
    p.deadline_max_s = 1.500;
  } else {
    throw ConfigError("unknown application preset: " + name);
  }
  return p;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (road_length_m <= 0) fail("road_length_m must be > 0");
  if (lane_count < 2) fail("lane_count must be >= 2");
  if (slot_duration_s <= 0) fail("slot_duration_s must be > 0");
  if (epoch_slots < 1) fail("epoch_slots must be >= 1");
  if (slots < 0) fail("slots must be >= 0");
  if (vehicle_count < 0) fail("vehicle_count must be >= 0");
  if (server_count < 1) fail("server_count must be >= 1");
  if (task_gen_probability < 0 || task_gen_probability > 1)
    fail("task_gen_probability must be in [0, 1]");
  if (speed_min_mps > speed_max_mps) fail("speed_min_mps > speed_max_mps");
  if (speed_min_mps < 0) fail("speed_min_mps must be >= 0");
  if (2.0 * server_radius_m * server_count > road_length_m)
    fail("overlapping server coverage: 2*radius*count exceeds road length");
  if (task.size_min_bits <= 0 || task.size_min_bits > task.size_max_bits)
    fail("task size range invalid");
  if (task.result_min_bits <= 0 || task.result_min_bits > task.result_max_bits)
    fail("task result range invalid");
  if (task.intensity_min <= 0 || task.intensity_min > task.intensity_max)
    fail("task intensity range invalid");
  if (task.deadline_min_s <= 0 || task.deadline_min_s > task.deadline_max_s)
    fail("task deadline range invalid");
  if (vehicle_cpu_min_ghz <= 0 || vehicle_cpu_min_ghz > vehicle_cpu_max_ghz)
    fail("vehicle cpu range invalid");
  if (server_cpu_min_ghz <= 0 || server_cpu_min_ghz > server_cpu_max_ghz)
    fail("server cpu range invalid");
  if (cloud_cpu_ghz <= 0) fail("cloud_cpu_ghz must be > 0");
  if (server_cores_min < 1 || server_cores_min > server_cores_max)
    fail("server core range invalid");
  if (cloud_cores < 1) fail("cloud_cores must be >= 1");
  // w_i = 1 and w_j = 0 make the Lemma-1 price bounds divide by zero.
  if (vehicle_weight_min < 0 || vehicle_weight_max >= 1.0 ||
      vehicle_weight_min > vehicle_weight_max)
    fail("vehicle weight must lie in [0, 1)");
  if (server_weight_min <= 0 || server_weight_max > 1.0 ||
      server_weight_min > server_weight_max)
    fail("server weight must lie in (0, 1]");
  if (mobility.prior_confidence < 0 || mobility.prior_confidence > 1)
    fail("mobility.prior_confidence must be in [0, 1]");
  if (mobility.markov_stay_prob < 0 || mobility.markov_stay_prob > 1)
    fail("mobility.markov_stay_prob must be in [0, 1]");
  if (channel.nakagami_m_los < 0.5 || channel.nakagami_m_los > 5 ||
      channel.nakagami_m_nlos < 0.5 || channel.nakagami_m_nlos > 5)
    fail("nakagami m must be in [0.5, 5]");
  if (channel.pathloss_exp_los > channel.pathloss_exp_nlos)
    fail("pathloss_exp_los must be <= pathloss_exp_nlos");
  if (channel.los_probability < 0 || channel.los_probability > 1)
    fail("los_probability must be in [0, 1]");
  if (channel.bandwidth_hz <= 0 || channel.carrier_hz <= 0 ||
      channel.reference_distance_m <= 0)
    fail("channel bandwidth/carrier/reference distance must be > 0");
  if (channel.sic_capacity < 1) fail("sic_capacity must be >= 1");
  if (backhaul.fiber_rate_bps <= 0 || backhaul.cloud_rate_bps <= 0)
    fail("backhaul rates must be > 0");
  if (energy.alpha_vehicle < 0 || energy.alpha_server < 0)
    fail("switched capacitance must be >= 0");
  if (energy.cpu_exponent <= 0) fail("cpu_exponent must be > 0");
  if (energy.vehicle_energy_wh_per_ghz <= 0 ||
      energy.server_energy_wh_per_ghz <= 0)
    fail("energy budgets must be > 0");
  if (pricing.vehicle_budget <= 0) fail("vehicle_budget must be > 0");
  if (pricing.max_unit_price_per_ghz <= 0)
    fail("max_unit_price_per_ghz must be > 0");
  if (bargain.rounds < 1) fail("bargain.rounds must be >= 1");
  if (baselines.opora_price_step <= 0) fail("opora_price_step must be > 0");
  if (baselines.nco_learning_rate < 0 || baselines.nco_learning_rate > 1)
    fail("nco_learning_rate must be in [0, 1]");
  if (baselines.nco_init_prob < 0 || baselines.nco_init_prob > 1)
    fail("nco_init_prob must be in [0, 1]");
}

namespace {

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

double parse_double(const std::string& v) {
  std::size_t pos = 0;
  const double d = std::stod(v, &pos);
  if (pos != v.size()) throw ConfigError("malformed number: " + v);
  return d;
}

std::int64_t parse_int(const std::string& v) {
  std::size_t pos = 0;
  const long long i = std::stoll(v, &pos);
  if (pos != v.size()) throw ConfigError("malformed integer: " + v);
  return i;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("malformed boolean: " + v);
}

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& k, double ScenarioConfig::* p) {
      t[k] = [p](ScenarioConfig& c, const std::string& v) { c.*p = parse_double(v); };
    };
    num("scenario.road_length_m", &ScenarioConfig::road_length_m);
    t["scenario.lane_count"] = [](ScenarioConfig& c, const std::string& v) {
      c.lane_count = static_cast<int>(parse_int(v));
    };
    num("scenario.slot_duration_s", &ScenarioConfig::slot_duration_s);
    t["scenario.epoch_slots"] = [](ScenarioConfig& c, const std::string& v) {
      c.epoch_slots = parse_int(v);
    };
    t["scenario.slots"] = [](ScenarioConfig& c, const std::string& v) {
      c.slots = parse_int(v);
    };
    t["scenario.vehicle_count"] = [](ScenarioConfig& c, const std::string& v) {
      c.vehicle_count = static_cast<int>(parse_int(v));
    };
    t["scenario.server_count"] = [](ScenarioConfig& c, const std::string& v) {
      c.server_count = static_cast<int>(parse_int(v));
    };
    num("scenario.server_radius_m", &ScenarioConfig::server_radius_m);
    num("scenario.speed_min_mps", &ScenarioConfig::speed_min_mps);
    num("scenario.speed_max_mps", &ScenarioConfig::speed_max_mps);
    t["scenario.speed_mean_mps"] = [](ScenarioConfig& c, const std::string& v) {
      // Shifts the window keeping its halfwidth; sweep axis for speed.
      const double mean = parse_double(v);
      const double hw = 0.5 * (c.speed_max_mps - c.speed_min_mps);
      c.speed_min_mps = std::max(0.0, mean - hw);
      c.speed_max_mps = mean + hw;
    };
    num("scenario.task_gen_probability", &ScenarioConfig::task_gen_probability);
    t["scenario.rng_seed"] = [](ScenarioConfig& c, const std::string& v) {
      c.rng_seed = static_cast<std::uint64_t>(parse_int(v));
    };
    t["scenario.scheme"] = [](ScenarioConfig& c, const std::string& v) {
      c.scheme = scheme_from_string(v);
    };
    t["scenario.app_preset"] = [](ScenarioConfig& c, const std::string& v) {
      c.app_preset = v;
      if (!v.empty() && v != "none") c.task = load_app_preset(v);
    };
    t["scenario.task_size_min_kb"] = [](ScenarioConfig& c, const std::string& v) {
      c.task.size_min_bits = parse_double(v) * 8e3;
    };
    t["scenario.task_size_max_kb"] = [](ScenarioConfig& c, const std::string& v) {
      c.task.size_max_bits = parse_double(v) * 8e3;
    };
    t["scenario.task_size_mean_kb"] = [](ScenarioConfig& c, const std::string& v) {
      const double mean = parse_double(v) * 8e3;
      const double hw = 0.5 * (c.task.size_max_bits - c.task.size_min_bits);
      c.task.size_min_bits = std::max(8.0, mean - hw);
      c.task.size_max_bits = mean + hw;
    };
    t["scenario.task_result_min_kb"] = [](ScenarioConfig& c, const std::string& v) {
      c.task.result_min_bits = parse_double(v) * 8e3;
    };
    t["scenario.task_result_max_kb"] = [](ScenarioConfig& c, const std::string& v) {
      c.task.result_max_bits = parse_double(v) * 8e3;
    };
    t["scenario.task_intensity_min"] = [](ScenarioConfig& c, const std::string& v) {
      c.task.intensity_min = parse_double(v);
    };
    t["scenario.task_intensity_max"] = [](ScenarioConfig& c, const std::string& v) {
      c.task.intensity_max = parse_double(v);
    };
    t["scenario.task_deadline_min_s"] = [](ScenarioConfig& c, const std::string& v) {
      c.task.deadline_min_s = parse_double(v);
    };
    t["scenario.task_deadline_max_s"] = [](ScenarioConfig& c, const std::string& v) {
      c.task.deadline_max_s = parse_double(v);
    };
    num("scenario.vehicle_cpu_min_ghz", &ScenarioConfig::vehicle_cpu_min_ghz);
    num("scenario.vehicle_cpu_max_ghz", &ScenarioConfig::vehicle_cpu_max_ghz);
    num("scenario.server_cpu_min_ghz", &ScenarioConfig::server_cpu_min_ghz);
    num("scenario.server_cpu_max_ghz", &ScenarioConfig::server_cpu_max_ghz);
    t["scenario.server_cpu_mean_ghz"] = [](ScenarioConfig& c, const std::string& v) {
      const double mean = parse_double(v);
      const double hw = 0.5 * (c.server_cpu_max_ghz - c.server_cpu_min_ghz);
      c.server_cpu_min_ghz = std::max(0.1, mean - hw);
      c.server_cpu_max_ghz = mean + hw;
    };
    num("scenario.cloud_cpu_ghz", &ScenarioConfig::cloud_cpu_ghz);
    t["scenario.server_cores_min"] = [](ScenarioConfig& c, const std::string& v) {
      c.server_cores_min = static_cast<int>(parse_int(v));
    };
    t["scenario.server_cores_max"] = [](ScenarioConfig& c, const std::string& v) {
      c.server_cores_max = static_cast<int>(parse_int(v));
    };
    t["scenario.cloud_cores"] = [](ScenarioConfig& c, const std::string& v) {
      c.cloud_cores = static_cast<int>(parse_int(v));
    };
    num("scenario.vehicle_weight_min", &ScenarioConfig::vehicle_weight_min);
    num("scenario.vehicle_weight_max", &ScenarioConfig::vehicle_weight_max);
    num("scenario.server_weight_min", &ScenarioConfig::server_weight_min);
    num("scenario.server_weight_max", &ScenarioConfig::server_weight_max);

    t["mobility.arrival_mode"] = [](ScenarioConfig& c, const std::string& v) {
      if (v == "literal") c.mobility.arrival_mode = ArrivalMode::Literal;
      else if (v == "corrected") c.mobility.arrival_mode = ArrivalMode::Corrected;
      else throw ConfigError("mobility.arrival_mode must be literal|corrected");
    };
    t["mobility.prior"] = [](ScenarioConfig& c, const std::string& v) {
      if (v == "heading") c.mobility.prior = MobilityPrior::Heading;
      else if (v == "markov") c.mobility.prior = MobilityPrior::Markov;
      else throw ConfigError("mobility.prior must be heading|markov");
    };
    t["mobility.prior_confidence"] = [](ScenarioConfig& c, const std::string& v) {
      c.mobility.prior_confidence = parse_double(v);
    };
    t["mobility.markov_stay_prob"] = [](ScenarioConfig& c, const std::string& v) {
      c.mobility.markov_stay_prob = parse_double(v);
    };

    auto ch = [&t](const std::string& k, double ChannelConfig::* p) {
      t["channel." + k] = [p](ScenarioConfig& c, const std::string& v) {
        c.channel.*p = parse_double(v);
      };
    };
    ch("bandwidth_hz", &ChannelConfig::bandwidth_hz);
    ch("carrier_hz", &ChannelConfig::carrier_hz);
    ch("reference_distance_m", &ChannelConfig::reference_distance_m);
    ch("pathloss_exp_los", &ChannelConfig::pathloss_exp_los);
    ch("pathloss_exp_nlos", &ChannelConfig::pathloss_exp_nlos);
    ch("nakagami_m_los", &ChannelConfig::nakagami_m_los);
    ch("nakagami_m_nlos", &ChannelConfig::nakagami_m_nlos);
    ch("shadowing_db_los", &ChannelConfig::shadowing_db_los);
    ch("shadowing_db_nlos", &ChannelConfig::shadowing_db_nlos);
    ch("noise_dbm", &ChannelConfig::noise_dbm);
    ch("los_probability", &ChannelConfig::los_probability);
    ch("los_decay_scale_m", &ChannelConfig::los_decay_scale_m);
    ch("tx_power_min_dbm", &ChannelConfig::tx_power_min_dbm);
    ch("tx_power_max_dbm", &ChannelConfig::tx_power_max_dbm);
    ch("tx_power_fixed_dbm", &ChannelConfig::tx_power_fixed_dbm);
    ch("light_speed_mps", &ChannelConfig::light_speed_mps);
    t["channel.los_model"] = [](ScenarioConfig& c, const std::string& v) {
      if (v == "constant") c.channel.los_model = LosModel::Constant;
      else if (v == "exp_decay") c.channel.los_model = LosModel::ExpDecay;
      else throw ConfigError("channel.los_model must be constant|exp_decay");
    };
    t["channel.tx_power_policy"] = [](ScenarioConfig& c, const std::string& v) {
      if (v == "linear_midpoint") c.channel.tx_power_policy = TxPowerPolicy::LinearMidpoint;
      else if (v == "dbm_midpoint") c.channel.tx_power_policy = TxPowerPolicy::DbmMidpoint;
      else if (v == "fixed") c.channel.tx_power_policy = TxPowerPolicy::Fixed;
      else throw ConfigError("channel.tx_power_policy must be linear_midpoint|dbm_midpoint|fixed");
    };
    t["channel.sic_capacity"] = [](ScenarioConfig& c, const std::string& v) {
      c.channel.sic_capacity = static_cast<int>(parse_int(v));
    };

    t["backhaul.fiber_rate_bps"] = [](ScenarioConfig& c, const std::string& v) {
      c.backhaul.fiber_rate_bps = parse_double(v);
    };
    t["backhaul.cloud_rate_bps"] = [](ScenarioConfig& c, const std::string& v) {
      c.backhaul.cloud_rate_bps = parse_double(v);
    };

    t["energy.alpha_vehicle"] = [](ScenarioConfig& c, const std::string& v) {
      c.energy.alpha_vehicle = parse_double(v);
    };
    t["energy.alpha_server"] = [](ScenarioConfig& c, const std::string& v) {
      c.energy.alpha_server = parse_double(v);
    };
    t["energy.cpu_exponent"] = [](ScenarioConfig& c, const std::string& v) {
      c.energy.cpu_exponent = parse_double(v);
    };
    t["energy.vehicle_energy_wh_per_ghz"] = [](ScenarioConfig& c, const std::string& v) {
      c.energy.vehicle_energy_wh_per_ghz = parse_double(v);
    };
    t["energy.server_energy_wh_per_ghz"] = [](ScenarioConfig& c, const std::string& v) {
      c.energy.server_energy_wh_per_ghz = parse_double(v);
    };

    t["pricing.vehicle_budget"] = [](ScenarioConfig& c, const std::string& v) {
      c.pricing.vehicle_budget = parse_double(v);
    };
    t["pricing.max_unit_price_per_ghz"] = [](ScenarioConfig& c, const std::string& v) {
      c.pricing.max_unit_price_per_ghz = parse_double(v);
    };

    t["bargain.rounds"] = [](ScenarioConfig& c, const std::string& v) {
      c.bargain.rounds = static_cast<int>(parse_int(v));
    };
    t["bargain.clamp_partitions"] = [](ScenarioConfig& c, const std::string& v) {
      c.bargain.clamp_partitions = parse_bool(v);
    };

    t["baselines.nco_init_prob"] = [](ScenarioConfig& c, const std::string& v) {
      c.baselines.nco_init_prob = parse_double(v);
    };
    t["baselines.nco_learning_rate"] = [](ScenarioConfig& c, const std::string& v) {
      c.baselines.nco_learning_rate = parse_double(v);
    };
    t["baselines.opora_price_step"] = [](ScenarioConfig& c, const std::string& v) {
      c.baselines.opora_price_step = parse_double(v);
    };

    t["output.trace"] = [](ScenarioConfig& c, const std::string& v) {
      c.output.trace = parse_bool(v);
    };
    t["output.apr_mode"] = [](ScenarioConfig& c, const std::string& v) {
      if (v == "cycles") c.output.apr_mode = AprMode::Cycles;
      else if (v == "bits") c.output.apr_mode = AprMode::Bits;
      else throw ConfigError("output.apr_mode must be cycles|bits");
    };
    return t;
  }();
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value) {
  const auto& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key: " + key);
  it->second(cfg, value);
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    apply_override(cfg, section + "." + key, value);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace vecsim
