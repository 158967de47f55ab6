#include "vecsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vecsim {

double sample_small_scale(double m, Rng& rng) {
  // h^2 ~ Gamma(shape m, scale 1/m), so E[h^2] = 1.
  return std::sqrt(rng.gamma(m) / m);
}

double path_loss(double d_m, const ChannelConfig& ch, bool los) {
  if (d_m <= 0.0) throw std::domain_error("path_loss: distance must be > 0");
  const double d0 = ch.reference_distance_m;
  const double d = std::max(d_m, d0);
  const double beta = los ? ch.pathloss_exp_los : ch.pathloss_exp_nlos;
  const double ref = 4.0 * M_PI * d0 * ch.carrier_hz / ch.light_speed_mps;
  return ref * ref * std::pow(d / d0, beta);
}

double los_probability(double d_m, const ChannelConfig& ch) {
  if (ch.los_model == LosModel::Constant) return ch.los_probability;
  return std::exp(-std::max(0.0, d_m) / ch.los_decay_scale_m);
}

double channel_gain(double d_m, const ChannelConfig& ch, Rng& rng) {
  const double p_los = los_probability(d_m, ch);
  const double h_l = sample_small_scale(ch.nakagami_m_los, rng);
  const double chi_l = rng.normal(0.0, ch.shadowing_db_los);
  const double g_l = h_l * h_l / path_loss(d_m, ch, true) * std::pow(10.0, -chi_l / 10.0);
  const double h_nl = sample_small_scale(ch.nakagami_m_nlos, rng);
  const double chi_nl = rng.normal(0.0, ch.shadowing_db_nlos);
  const double g_nl = h_nl * h_nl / path_loss(d_m, ch, false) * std::pow(10.0, -chi_nl / 10.0);
  return p_los * g_l + (1.0 - p_los) * g_nl;
}

void sort_uploaders(std::vector<Uploader>& uploaders) {
  std::sort(uploaders.begin(), uploaders.end(), [](const Uploader& a, const Uploader& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    return a.vehicle < b.vehicle;
  });
}

std::vector<double> noma_uplink_rates(std::vector<Uploader> uploaders,
                                      const ChannelConfig& ch) {
  sort_uploaders(uploaders);
  const double n0 = ch.noise_w();
  std::vector<double> rates(uploaders.size());
  double tail = 0;  // sum of received powers weaker than the current rank
  for (std::size_t k = uploaders.size(); k-- > 0;) {
    const double p_rx = uploaders[k].power_w * uploaders[k].gain;
    rates[k] = ch.bandwidth_hz * std::log2(1.0 + p_rx / (n0 + tail));
    tail += p_rx;
  }
  return rates;
}

double noma_uplink_rate(const std::vector<Uploader>& uploaders, int vehicle,
                        const ChannelConfig& ch) {
  std::vector<Uploader> sorted = uploaders;
  sort_uploaders(sorted);
  const auto rates = noma_uplink_rates(sorted, ch);
  for (std::size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k].vehicle == vehicle) return rates[k];
  throw std::invalid_argument("noma_uplink_rate: vehicle not in uploader set");
}

}  // namespace vecsim
