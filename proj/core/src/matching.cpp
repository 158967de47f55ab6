#include "vecsim/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace vecsim {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;
}  // namespace

PreferenceLists PreferenceLists::build(int task_count,
                                       std::vector<CandidateOffer> offers) {
  PreferenceLists p;
  p.offers_ = std::move(offers);
  p.task_prefs_.resize(task_count);

  int max_id = -1;
  for (const auto& o : p.offers_) max_id = std::max(max_id, o.server);
  p.id_to_slot_.assign(max_id + 1, -1);
  for (const auto& o : p.offers_) {
    if (o.server < 0) throw std::invalid_argument("offer with invalid server");
    if (p.id_to_slot_[o.server] == -1) {
      p.id_to_slot_[o.server] = static_cast<int>(p.server_ids_.size());
      p.server_ids_.push_back(o.server);
    }
  }
  const int n_srv = static_cast<int>(p.server_ids_.size());
  p.server_prefs_.resize(n_srv);
  p.deal_idx_.assign(task_count, std::vector<int>(n_srv, -1));

  for (std::size_t i = 0; i < p.offers_.size(); ++i) {
    const auto& o = p.offers_[i];
    const int s = p.id_to_slot_[o.server];
    if (p.deal_idx_[o.task][s] != -1)
      throw std::invalid_argument("duplicate offer for a (task, server) pair");
    p.deal_idx_[o.task][s] = static_cast<int>(i);
    p.task_prefs_[o.task].push_back(o.server);
    p.server_prefs_[s].push_back(o.task);
  }
  for (int k = 0; k < task_count; ++k) {
    auto& lst = p.task_prefs_[k];
    std::sort(lst.begin(), lst.end(), [&](int a, int b) {
      const double ra = p.rho_task(k, a), rb = p.rho_task(k, b);
      if (ra != rb) return ra > rb;
      return a < b;
    });
  }
  for (int s = 0; s < n_srv; ++s) {
    auto& lst = p.server_prefs_[s];
    const int id = p.server_ids_[s];
    std::sort(lst.begin(), lst.end(), [&](int a, int b) {
      const double ra = p.rho_server(id, a), rb = p.rho_server(id, b);
      if (ra != rb) return ra > rb;
      return a < b;
    });
  }
  return p;
}

int PreferenceLists::slot_of(int server) const {
  if (server < 0 || server >= static_cast<int>(id_to_slot_.size())) return -1;
  return id_to_slot_[server];
}

const std::vector<int>& PreferenceLists::server_prefs(int server) const {
  const int s = slot_of(server);
  if (s < 0) throw std::out_of_range("server has no offers");
  return server_prefs_[s];
}

const Deal* PreferenceLists::deal(int task, int server) const {
  const int s = slot_of(server);
  if (s < 0) return nullptr;
  const int idx = deal_idx_[task][s];
  return idx < 0 ? nullptr : &offers_[idx].deal;
}

double PreferenceLists::rho_task(int task, int server) const {
  const Deal* d = deal(task, server);
  return d ? d->vehicle_utility : kNegInf;
}

double PreferenceLists::rho_server(int server, int task) const {
  const Deal* d = deal(task, server);
  return d ? d->server_utility : kNegInf;
}

int PreferenceLists::task_rank(int task, int server) const {
  const auto& lst = task_prefs_[task];
  for (std::size_t i = 0; i < lst.size(); ++i)
    if (lst[i] == server) return static_cast<int>(i);
  return -1;
}

bool PreferenceLists::server_prefers(int server, int a, int b) const {
  const double ra = rho_server(server, a), rb = rho_server(server, b);
  if (ra != rb) return ra > rb;
  return a < b;
}

namespace {

struct ServerLoad {
  int cores = 0;
  double hz = 0;
  double energy = 0;
};

// Greedy re-pack in the server's preference order; a task is admitted only
// while cores, resource and energy all still fit.
std::vector<int> greedy_pack(const PreferenceLists& prefs, int server_id,
                             const ServerBudget& budget,
                             std::vector<int> candidates) {
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return prefs.server_prefers(server_id, a, b);
  });
  std::vector<int> admitted;
  ServerLoad load;
  for (int k : candidates) {
    const Deal* d = prefs.deal(k, server_id);
    if (!d) continue;
    if (load.cores + 1 > budget.idle_cores) continue;
    if (load.hz + d->cpu_hz > budget.cpu_hz * (1 + kEps)) continue;
    if (load.energy + d->energy_j > budget.energy_j * (1 + kEps)) continue;
    load.cores += 1;
    load.hz += d->cpu_hz;
    load.energy += d->energy_j;
    admitted.push_back(k);
  }
  return admitted;
}

ServerBudget budget_for(const std::vector<ServerBudget>& budgets, int id) {
  for (const auto& b : budgets)
    if (b.server == id) return b;
  ServerBudget none;
  none.server = id;
  return none;
}

}  // namespace

Matching run_matching(const PreferenceLists& prefs,
                      const std::vector<ServerBudget>& budgets,
                      std::ostream* trace) {
  const int K = prefs.task_count();
  const auto& ids = prefs.server_ids();
  const int S = static_cast<int>(ids.size());

  std::vector<ServerBudget> budget_of(S);
  for (int s = 0; s < S; ++s) budget_of[s] = budget_for(budgets, ids[s]);

  Matching m;
  m.assignment.assign(K, -1);
  m.held.assign(S, {});
  std::vector<long> version(S, 0);
  // tried[k][s]: server version when the task was last rejected there.
  std::vector<std::vector<long>> tried(K, std::vector<long>(S, -1));

  auto slot_of = [&](int id) {
    for (int s = 0; s < S; ++s)
      if (ids[s] == id) return s;
    return -1;
  };

  const long cap = 16L * (static_cast<long>(K) * S + 1) * (K + 1);
  bool progress = true;
  while (progress && !m.proposal_cap_hit) {
    progress = false;
    // Every task proposes to the best server above its current assignment
    // that it has not tried at the server's current state. Re-proposing
    // after a state change closes the blocking pairs that budget-driven
    // evictions would otherwise leave behind.
    std::vector<std::vector<int>> proposals(S);
    for (int k = 0; k < K; ++k) {
      const int cur_rank = m.assignment[k] < 0
                               ? std::numeric_limits<int>::max()
                               : prefs.task_rank(k, m.assignment[k]);
      const auto& lst = prefs.task_prefs(k);
      for (int r = 0; r < static_cast<int>(lst.size()) && r < cur_rank; ++r) {
        const int s = slot_of(lst[r]);
        if (tried[k][s] >= version[s]) continue;
        proposals[s].push_back(k);
        if (trace) *trace << "propose task=" << k << " server=" << lst[r] << "\n";
        break;
      }
    }

    for (int s = 0; s < S; ++s) {
      if (proposals[s].empty()) continue;
      m.proposals += static_cast<long>(proposals[s].size());
      if (m.proposals > cap) {
        m.proposal_cap_hit = true;
        break;
      }
      progress = true;

      std::vector<int> candidates = m.held[s];
      for (int k : proposals[s]) candidates.push_back(k);
      std::vector<int> admitted =
          greedy_pack(prefs, ids[s], budget_of[s], candidates);
      const bool changed = admitted != m.held[s];

      for (int k : m.held[s]) m.assignment[k] = -1;
      for (int k : admitted) {
        if (m.assignment[k] >= 0 && m.assignment[k] != ids[s]) {
          // Upgrade: the task leaves its previous server.
          const int old = slot_of(m.assignment[k]);
          auto& h = m.held[old];
          h.erase(std::remove(h.begin(), h.end(), k), h.end());
          ++version[old];
          if (trace)
            *trace << "upgrade task=" << k << " leaves server=" << ids[old] << "\n";
        }
        m.assignment[k] = ids[s];
      }
      if (changed) ++version[s];
      for (int k : candidates) {
        if (std::find(admitted.begin(), admitted.end(), k) == admitted.end()) {
          tried[k][s] = version[s];
          if (trace) *trace << "reject task=" << k << " server=" << ids[s] << "\n";
        }
      }
      m.held[s] = std::move(admitted);
    }
  }

  for (int k = 0; k < K; ++k)
    if (m.assignment[k] < 0) m.rejected.push_back(k);
  if (trace) {
    *trace << "matching done proposals=" << m.proposals << " rejected=";
    for (std::size_t i = 0; i < m.rejected.size(); ++i)
      *trace << (i ? "," : "") << m.rejected[i];
    *trace << "\n";
  }
  return m;
}

std::vector<BlockingPair> verify_stability(const PreferenceLists& prefs,
                                           const std::vector<ServerBudget>& budgets,
                                           const Matching& m) {
  std::vector<BlockingPair> blocking;
  const auto& ids = prefs.server_ids();
  for (int k = 0; k < prefs.task_count(); ++k) {
    const int cur = m.assignment[k];
    const int cur_rank =
        cur < 0 ? std::numeric_limits<int>::max() : prefs.task_rank(k, cur);
    const auto& lst = prefs.task_prefs(k);
    for (int r = 0; r < static_cast<int>(lst.size()) && r < cur_rank; ++r) {
      const int j = lst[r];
      const Deal* d = prefs.deal(k, j);
      int s = -1;
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == j) s = static_cast<int>(i);
      const ServerBudget budget = budget_for(budgets, j);
      ServerLoad load;
      for (int t : m.held[s]) {
        const Deal* dt = prefs.deal(t, j);
        load.cores += 1;
        load.hz += dt->cpu_hz;
        load.energy += dt->energy_j;
      }
      const bool vacancy =
          load.cores + 1 <= budget.idle_cores &&
          load.hz + d->cpu_hz <= budget.cpu_hz * (1 + kEps) &&
          load.energy + d->energy_j <= budget.energy_j * (1 + kEps);
      bool displacement = false;
      for (int t : m.held[s]) {
        if (!prefs.server_prefers(j, k, t)) continue;
        const Deal* dt = prefs.deal(t, j);
        if (load.hz - dt->cpu_hz + d->cpu_hz <= budget.cpu_hz * (1 + kEps) &&
            load.energy - dt->energy_j + d->energy_j <=
                budget.energy_j * (1 + kEps)) {
          displacement = true;
          break;
        }
      }
      if (vacancy || displacement) blocking.push_back({k, j});
    }
  }
  return blocking;
}

std::optional<std::vector<int>> verify_weak_pareto(
    const PreferenceLists& prefs, const std::vector<ServerBudget>& budgets,
    const Matching& m) {
  const int K = prefs.task_count();
  const auto& ids = prefs.server_ids();
  if (K > 6 || ids.size() > 3)
    throw std::invalid_argument(
        "verify_weak_pareto: instance too large for enumeration");

  std::vector<ServerBudget> budget_of(ids.size());
  for (std::size_t s = 0; s < ids.size(); ++s)
    budget_of[s] = budget_for(budgets, ids[s]);

  std::vector<int> pick(K, -1);
  std::vector<ServerLoad> load(ids.size());
  std::optional<std::vector<int>> found;

  std::function<void(int)> rec = [&](int k) {
    if (found) return;
    if (k == K) {
      for (int t = 0; t < K; ++t) {
        const int cur = m.assignment[t];
        const double now = pick[t] < 0 ? kNegInf : prefs.rho_task(t, pick[t]);
        const double before = cur < 0 ? kNegInf : prefs.rho_task(t, cur);
        if (!(now > before)) return;  // someone fails to strictly improve
      }
      found = pick;
      return;
    }
    rec(k + 1);  // task k unmatched in the alternative
    if (found) return;
    for (std::size_t s = 0; s < ids.size(); ++s) {
      const Deal* d = prefs.deal(k, ids[s]);
      if (!d) continue;
      if (load[s].cores + 1 > budget_of[s].idle_cores) continue;
      if (load[s].hz + d->cpu_hz > budget_of[s].cpu_hz * (1 + kEps)) continue;
      if (load[s].energy + d->energy_j > budget_of[s].energy_j * (1 + kEps))
        continue;
      load[s].cores += 1;
      load[s].hz += d->cpu_hz;
      load[s].energy += d->energy_j;
      pick[k] = ids[s];
      rec(k + 1);
      pick[k] = -1;
      load[s].cores -= 1;
      load[s].hz -= d->cpu_hz;
      load[s].energy -= d->energy_j;
      if (found) return;
    }
  };
  rec(0);
  return found;
}

}  // namespace vecsim
