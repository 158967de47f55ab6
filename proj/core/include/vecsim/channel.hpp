#pragma once

#include <vector>

#include "vecsim/config.hpp"
#include "vecsim/rng.hpp"

namespace vecsim {

/// Nakagami-m amplitude; the squared amplitude is Gamma(m, p_bar/m) with the
/// mean envelope power p_bar normalized to 1.
double sample_small_scale(double m, Rng& rng);

/// Log-distance path loss (4*pi*d0*fc/c)^2 * (d/d0)^beta as a linear
/// attenuation; distances below d0 are clamped to d0.
double path_loss(double d_m, const ChannelConfig& ch, bool los);

double los_probability(double d_m, const ChannelConfig& ch);

/// LoS/NLoS mixture gain with Nakagami fading and log-normal shadowing.
/// Strictly positive. Resample once per (link, slot).
double channel_gain(double d_m, const ChannelConfig& ch, Rng& rng);

/// One NOMA uplink sharing a band at the same receiver.
struct Uploader {
  int vehicle = -1;
  double gain = 0;
  double power_w = 0;
};

/// SIC decoding order: descending gain, ties by vehicle id. Each uploader
/// sees only strictly weaker-ranked uploaders as interference.
/// Returns per-uploader rates (bits/s) in the order of the sorted set.
std::vector<double> noma_uplink_rates(std::vector<Uploader> uploaders,
                                      const ChannelConfig& ch);

/// Rate of one member of an uploader set (must be present in the set).
double noma_uplink_rate(const std::vector<Uploader>& uploaders, int vehicle,
                        const ChannelConfig& ch);

/// Sorts by descending gain with vehicle id tie-break (the SIC order).
void sort_uploaders(std::vector<Uploader>& uploaders);

}  // namespace vecsim
