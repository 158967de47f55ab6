#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "vecsim/bargaining.hpp"
#include "vecsim/matching.hpp"
#include "vecsim/metrics.hpp"
#include "vecsim/scenario.hpp"
#include "vecsim/utility.hpp"

namespace vecsim {

/// A task awaiting a destination, with the slot's channel context.
struct PendingTask {
  enum class Status { Pending, Committed, Failed };
  TaskSpec task;
  Status status = Status::Pending;
  // refreshed every slot
  int attached = -1;  // current server id (1..E)
  bool in_coverage = false;
  double gain = 0;
  double uplink_bps = 0;  // 0 while deferred or out of coverage
  double zeta = 0;
  double sojourn_s = 0;
  bool deferred = false;
};

/// One slot-by-slot run of the configured scheme. Owns the world, the
/// pending pool, the in-flight ledger and the metric accumulators.
class Engine {
 public:
  explicit Engine(const ScenarioConfig& cfg, std::ostream* trace = nullptr);

  /// Executes the remaining slots and returns the collected metrics.
  RunMetrics run();

  /// Advances one slot; exposed for tests and stepwise inspection.
  SlotRecord step();

  const WorldState& world() const { return world_; }
  WorldState& world() { return world_; }
  Slot now() const { return t_; }
  const RunMetrics& metrics() const { return metrics_; }
  const std::vector<Decision>& last_commits() const { return commits_; }
  std::vector<PendingTask>& pending() { return pending_; }
  double elapsed_s(const TaskSpec& task) const {
    return (t_ - task.gen_slot) * world_.cfg.slot_duration_s;
  }

  // Shared machinery for the scheme deciders.
  NegotiationContext make_context(const PendingTask& p, int server_id) const;
  NegotiationOutcome negotiate_pair(const PendingTask& p, int server_id);
  std::optional<Decision> local_candidate(const PendingTask& p) const;
  void commit_local(PendingTask& p, const Decision& d);
  void commit_remote(PendingTask& p, const Decision& d);
  void fail_task(PendingTask& p);
  double nco_probability(int vehicle) const { return nco_prob_[vehicle]; }
  std::ostream* trace() { return trace_; }

  /// Budgets snapshot used for matching admission at this point in time.
  std::vector<ServerBudget> live_budgets() const;

 private:
  void release_resources();
  void process_completions(SlotRecord& rec);
  void expire_deadlines(SlotRecord& rec);
  void prepare_channel();
  void sweep_resolved(SlotRecord& rec);
  void update_nco_state();

  struct InFlight {
    int server = -1;  // -1 for local execution
    double alloc_hz = 0;
    TaskSpec task;
    double total_delay_s = 0;
    Slot complete_slot = 0;
    Slot release_slot = 0;
    bool completed = false;
    bool released = false;
  };

  WorldState world_;
  Slot t_ = 0;
  std::vector<PendingTask> pending_;
  std::vector<InFlight> in_flight_;
  std::vector<Decision> commits_;  // current slot
  std::vector<double> nco_prob_;
  RunMetrics metrics_;
  std::ostream* trace_ = nullptr;

  friend void decide_bargain_match(Engine&);
  friend void decide_elo(Engine&);
  friend void decide_exo(Engine&);
  friend void decide_nvo(Engine&);
  friend void decide_eco(Engine&);
  friend void decide_nco(Engine&);
  friend void decide_opora(Engine&);
};

/// Algorithm-2-over-Algorithm-1 composition with local screening.
void decide_bargain_match(Engine& e);

/// Convenience wrapper: build, run, return metrics.
RunMetrics run_simulation(const ScenarioConfig& cfg,
                          std::ostream* trace = nullptr);

}  // namespace vecsim
