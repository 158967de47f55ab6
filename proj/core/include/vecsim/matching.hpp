#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "vecsim/types.hpp"

namespace vecsim {

// Inter-server task placement: preference construction from predicted
// deals and capacity-constrained many-to-one deferred acceptance.

/// Predicted deal for one (pending task, server) pair. Tasks are indexed
/// densely 0..K-1 within a slot; servers use their world ids.
struct CandidateOffer {
  int task = -1;
  int server = -1;
  Deal deal;
};

/// Admission budgets of one server for the current slot.
struct ServerBudget {
  int server = -1;
  int idle_cores = 0;
  double cpu_hz = 0;    // remaining allocatable resource
  double energy_j = 0;  // remaining energy
};

/// Both sides' preference orders. Entries with no deal are absent; the
/// orders are strictly descending in utility with lower-id tie-breaks.
class PreferenceLists {
 public:
  static PreferenceLists build(int task_count,
                               std::vector<CandidateOffer> offers);

  int task_count() const { return static_cast<int>(task_prefs_.size()); }
  const std::vector<int>& server_ids() const { return server_ids_; }
  const std::vector<int>& task_prefs(int task) const { return task_prefs_[task]; }
  const std::vector<int>& server_prefs(int server) const;

  const Deal* deal(int task, int server) const;
  double rho_task(int task, int server) const;    // U_i^j, -inf if absent
  double rho_server(int server, int task) const;  // U_j^i, -inf if absent

  /// Rank of server j in task k's list (0 best); -1 when absent.
  int task_rank(int task, int server) const;
  /// True when the server ranks task a strictly above task b.
  bool server_prefers(int server, int a, int b) const;

 private:
  std::vector<CandidateOffer> offers_;
  std::vector<std::vector<int>> task_prefs_;    // per task: server ids desc
  std::vector<int> server_ids_;                 // ids with at least one offer
  std::vector<std::vector<int>> server_prefs_;  // per server slot: task idx desc
  std::vector<std::vector<int>> deal_idx_;      // [task][server slot] -> offer
  std::vector<int> id_to_slot_;                 // server id -> slot (-1 absent)

  int slot_of(int server) const;
};

struct Matching {
  std::vector<int> assignment;              // per task: server id or -1
  std::vector<std::vector<int>> held;       // per server slot: task indices
  std::vector<int> rejected;                // tasks matched nowhere
  long proposals = 0;
  bool proposal_cap_hit = false;
};

/// Task-proposing deferred acceptance under per-server core, resource and
/// energy budgets. Servers re-pack greedily by preference on every batch of
/// proposals; a task may re-propose to a server whose held set changed
/// since it was last rejected there, which closes the blocking pairs that
/// budget-driven evictions would otherwise leave behind.
Matching run_matching(const PreferenceLists& prefs,
                      const std::vector<ServerBudget>& budgets,
                      std::ostream* trace = nullptr);

struct BlockingPair {
  int task = -1;
  int server = -1;
};

/// Enumerates unmatched (task, server) pairs where both sides strictly
/// prefer each other and the server could admit the task within budgets,
/// outright or by displacing one strictly less preferred assignee.
std::vector<BlockingPair> verify_stability(const PreferenceLists& prefs,
                                           const std::vector<ServerBudget>& budgets,
                                           const Matching& m);

/// Exhaustively searches for a feasible matching in which every task is
/// strictly better off. Refuses instances beyond 6 tasks or 3 servers.
std::optional<std::vector<int>> verify_weak_pareto(
    const PreferenceLists& prefs, const std::vector<ServerBudget>& budgets,
    const Matching& m);

}  // namespace vecsim
