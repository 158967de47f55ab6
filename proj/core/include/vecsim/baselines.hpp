#pragma once

#include <optional>

#include "vecsim/bargaining.hpp"
#include "vecsim/engine.hpp"

namespace vecsim {

// The six comparison schemes. All share the engine's channel, cost and
// utility machinery; only the per-slot destination rule differs.

void decide_elo(Engine& e);    // everything local
void decide_exo(Engine& e);    // per-task best destination, first-come commit
void decide_nvo(Engine& e);    // nearest server only
void decide_eco(Engine& e);    // cloud only
void decide_nco(Engine& e);    // probabilistic offload, congestion response
void decide_opora(Engine& e);  // one-to-one matching with price rising

/// Price-rising deal: allocation fixed at the vehicle's request for the
/// floor price, then the price climbs from c_min in eta-sized fractions of
/// the spread until the server profits (or no deal when it passes c_max).
std::optional<Deal> opora_deal(const NegotiationContext& ctx, double eta,
                               int price_level);

}  // namespace vecsim
