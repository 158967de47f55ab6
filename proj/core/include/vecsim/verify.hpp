#pragma once

#include <string>
#include <vector>

#include "vecsim/bargaining.hpp"
#include "vecsim/matching.hpp"
#include "vecsim/rng.hpp"

namespace vecsim {

// Property suites backing `--verify`: stability and weak Pareto of the
// matcher, deal soundness of the negotiation, stationarity of the
// closed-form allocation, and the partition identities. The checkers here
// are independent of the implementation paths they exercise (exhaustive
// enumeration, finite differences, golden-section search, direct formula
// evaluation).

struct VerifyOptions {
  int stability_instances = 1000;
  int pareto_instances = 500;
  int deal_negotiations = 10000;
  int stationarity_draws = 1000;
  std::uint64_t seed = 20240901;
};

struct VerifyReport {
  struct Suite {
    std::string name;
    long checked = 0;
    long failures = 0;
    std::string detail;
  };
  std::vector<Suite> suites;
  bool ok() const {
    for (const auto& s : suites)
      if (s.failures > 0) return false;
    return true;
  }
};

VerifyReport run_verification(const VerifyOptions& opt);

/// Random negotiation context over the default parameter ranges
/// (synthetic uplink/sojourn draws; fixed arrival estimate).
NegotiationContext random_context(Rng& rng);

/// Random matching instance: tasks, servers, predicted deals and budgets.
struct MatchInstance {
  int task_count = 0;
  std::vector<CandidateOffer> offers;
  std::vector<ServerBudget> budgets;
};
MatchInstance random_match_instance(Rng& rng, int max_tasks, int max_servers);

// Individual suites (exposed for the test binaries).
VerifyReport::Suite verify_matching_stability(Rng& rng, int instances);
VerifyReport::Suite verify_matching_pareto(Rng& rng, int instances);
VerifyReport::Suite verify_deal_soundness(Rng& rng, int negotiations);
VerifyReport::Suite verify_allocation_stationarity(Rng& rng, int draws);
VerifyReport::Suite verify_partition_identities();

}  // namespace vecsim
