#include "vecsim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "vecsim/baselines.hpp"
#include "vecsim/channel.hpp"
#include "vecsim/costmodel.hpp"
#include "vecsim/matching.hpp"
#include "vecsim/mobility.hpp"

namespace vecsim {

Engine::Engine(const ScenarioConfig& cfg, std::ostream* trace)
    : world_(build_scenario(cfg)), trace_(trace) {
  nco_prob_.assign(world_.vehicles.size(), cfg.baselines.nco_init_prob);
}

NegotiationContext Engine::make_context(const PendingTask& p,
                                        int server_id) const {
  const ScenarioConfig& cfg = world_.cfg;
  const VehicleState& veh = world_.vehicles[p.task.owner];
  const ServerState& srv = world_.server_by_id(server_id);

  NegotiationContext ctx;
  ctx.task = p.task;
  ctx.elapsed_s = elapsed_s(p.task);
  ctx.vehicle = {veh.payment_budget, veh.weight};
  ctx.uplink_bps = p.uplink_bps;
  ctx.sojourn_current_s = p.sojourn_s;
  ctx.server_id = server_id;
  ctx.cloud = srv.cloud;
  ctx.task_handover = !srv.cloud && server_id != p.attached;
  ctx.server = {srv.cpu_hz,          srv.price_ceiling_per_hz,
                srv.energy_budget_j, srv.weight,
                cfg.energy.alpha_server, cfg.energy.cpu_exponent};
  ctx.available_hz = srv.available_hz();
  ctx.server_energy_left_j = srv.energy_left_j();
  ctx.backhaul = cfg.backhaul;
  const WorldState* w = &world_;
  const VehicleState* vp = &veh;
  const int attached = p.attached;
  const double zeta = p.zeta;
  if (!srv.cloud && server_id == p.attached) {
    ctx.arrival = [w, vp, attached, zeta](double t_move) {
      return arrival_with_sojourn(*w, *vp, attached, zeta, t_move);
    };
  } else {
    // Horizontal/vertical migration: the result lands wherever the vehicle
    // is attached once it is ready; predict from the current cell.
    ctx.arrival = [w, vp, attached, zeta](double t_move) {
      return arrival_with_sojourn(*w, *vp, attached, zeta, t_move);
    };
  }
  ctx.bargain_rounds = cfg.bargain.rounds;
  ctx.clamp_partitions = cfg.bargain.clamp_partitions;
  return ctx;
}

NegotiationOutcome Engine::negotiate_pair(const PendingTask& p, int server_id) {
  const NegotiationOutcome out = negotiate(make_context(p, server_id));
  metrics_.clamp_events += out.clamp_events;
  if (out.agreed) ++metrics_.deals;
  else ++metrics_.no_deals;
  return out;
}

std::optional<Decision> Engine::local_candidate(const PendingTask& p) const {
  const VehicleState& veh = world_.vehicles[p.task.owner];
  if (!veh.core_idle(t_)) return std::nullopt;
  const double exec_s = local_delay(p.task, veh.cpu_hz);
  const double total = elapsed_s(p.task) + exec_s;
  if (total > p.task.deadline_s) return std::nullopt;
  const double energy = exec_energy(veh.cpu_hz, p.task.cycles,
                                    world_.cfg.energy.alpha_vehicle,
                                    world_.cfg.energy.cpu_exponent);
  if (energy > veh.energy_budget_j - veh.energy_used_j) return std::nullopt;
  Decision d;
  d.task = p.task;
  d.kind = DestKind::Local;
  d.total_delay_s = total;
  d.energy_j = energy;
  d.vehicle_utility = vehicle_utility_local(
      satisfaction(total, p.task.deadline_s), energy, veh.energy_budget_j,
      veh.weight);
  d.server_utility = 0;
  return d;
}

void Engine::commit_local(PendingTask& p, const Decision& d) {
  VehicleState& veh = world_.vehicles[p.task.owner];
  const double dt = world_.cfg.slot_duration_s;
  const double exec_s = d.total_delay_s - elapsed_s(p.task);
  const Slot held = std::max<Slot>(1, static_cast<Slot>(std::ceil(exec_s / dt)));
  veh.core_busy_until = t_ + held - 1;
  veh.energy_used_j += d.energy_j;
  InFlight f;
  f.server = -1;
  f.task = p.task;
  f.total_delay_s = d.total_delay_s;
  f.complete_slot = p.task.gen_slot + static_cast<Slot>(std::floor(d.total_delay_s / dt));
  f.release_slot = t_ + held;
  f.released = true;  // vehicle cores release via core_busy_until
  in_flight_.push_back(f);
  commits_.push_back(d);
  p.status = PendingTask::Status::Committed;
}

void Engine::commit_remote(PendingTask& p, const Decision& d) {
  ServerState& srv = world_.server_by_id(d.deal.server);
  const double dt = world_.cfg.slot_duration_s;
  const Slot held =
      std::max<Slot>(1, static_cast<Slot>(std::ceil(d.deal.compute_delay_s / dt)));
  if (srv.idle_cores() < 1 || d.deal.cpu_hz > srv.available_hz() * (1 + 1e-9) ||
      d.deal.energy_j > srv.energy_left_j() * (1 + 1e-9))
    throw std::logic_error("commit_remote: admission exceeded server budgets");
  srv.busy_cores += 1;
  srv.committed_hz += d.deal.cpu_hz;
  srv.energy_used_j += d.deal.energy_j;
  InFlight f;
  f.server = d.deal.server;
  f.alloc_hz = d.deal.cpu_hz;
  f.task = p.task;
  f.total_delay_s = d.total_delay_s;
  f.complete_slot = p.task.gen_slot + static_cast<Slot>(std::floor(d.total_delay_s / dt));
  f.release_slot = t_ + held;
  in_flight_.push_back(f);
  commits_.push_back(d);
  p.status = PendingTask::Status::Committed;
}

void Engine::fail_task(PendingTask& p) { p.status = PendingTask::Status::Failed; }

std::vector<ServerBudget> Engine::live_budgets() const {
  std::vector<ServerBudget> budgets;
  budgets.reserve(world_.servers.size() + 1);
  auto add = [&](const ServerState& s) {
    ServerBudget b;
    b.server = s.id;
    b.idle_cores = s.idle_cores();
    b.cpu_hz = s.available_hz();
    b.energy_j = s.energy_left_j();
    budgets.push_back(b);
  };
  add(world_.cloud);
  for (const auto& s : world_.servers) add(s);
  return budgets;
}

void Engine::release_resources() {
  for (auto& f : in_flight_) {
    if (f.released || f.release_slot > t_) continue;
    ServerState& srv = world_.server_by_id(f.server);
    srv.busy_cores -= 1;
    srv.committed_hz -= f.alloc_hz;
    if (srv.committed_hz < 0) srv.committed_hz = 0;
    f.released = true;
  }
}

void Engine::process_completions(SlotRecord& rec) {
  for (auto& f : in_flight_) {
    if (f.completed || f.complete_slot > t_) continue;
    f.completed = true;
    rec.completed += 1;
    rec.completed_delay_s += f.total_delay_s;
    rec.completed_cycles += f.task.cycles;
    rec.completed_bits += f.task.input_bits;
  }
  in_flight_.erase(std::remove_if(in_flight_.begin(), in_flight_.end(),
                                  [](const InFlight& f) {
                                    return f.completed && f.released;
                                  }),
                   in_flight_.end());
}

void Engine::expire_deadlines(SlotRecord& rec) {
  for (auto& p : pending_) {
    if (p.status != PendingTask::Status::Pending) continue;
    if (elapsed_s(p.task) >= p.task.deadline_s) p.status = PendingTask::Status::Failed;
  }
  sweep_resolved(rec);
}

void Engine::prepare_channel() {
  const ChannelConfig& ch = world_.cfg.channel;
  // Attachment, direction and a fresh gain per pending task.
  std::vector<int> first_of_owner(world_.vehicles.size(), -1);
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    PendingTask& p = pending_[i];
    if (p.status != PendingTask::Status::Pending) continue;
    const VehicleState& veh = world_.vehicles[p.task.owner];
    p.attached = world_.nearest_server_id(veh.x);
    const ServerState& srv = world_.server_by_id(p.attached);
    p.in_coverage = world_.in_coverage(veh, srv);
    p.zeta = direction_indicator(world_, veh, srv);
    p.sojourn_s = sojourn_time(veh, srv, p.zeta);
    const double dx = veh.x - srv.x;
    const double dy = veh.y - srv.y;
    const double dist = std::max(1e-3, std::sqrt(dx * dx + dy * dy));
    p.gain = channel_gain(dist, ch, world_.rng);
    p.uplink_bps = 0;
    p.deferred = false;
    // One radio per vehicle: only its oldest pending task may upload.
    if (first_of_owner[p.task.owner] < 0)
      first_of_owner[p.task.owner] = static_cast<int>(i);
    else
      p.deferred = true;
  }

  // Per-RSU NOMA sets capped by the SIC capacity; lowest-gain excess
  // uploaders defer one slot.
  for (const auto& srv : world_.servers) {
    std::vector<int> members;
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      const PendingTask& p = pending_[i];
      if (p.status != PendingTask::Status::Pending || p.deferred) continue;
      if (p.attached == srv.id && p.in_coverage) members.push_back(static_cast<int>(i));
    }
    if (members.empty()) continue;
    std::sort(members.begin(), members.end(), [&](int a, int b) {
      if (pending_[a].gain != pending_[b].gain)
        return pending_[a].gain > pending_[b].gain;
      return pending_[a].task.owner < pending_[b].task.owner;
    });
    if (static_cast<int>(members.size()) > srv.sic_capacity) {
      for (std::size_t k = srv.sic_capacity; k < members.size(); ++k)
        pending_[members[k]].deferred = true;
      members.resize(srv.sic_capacity);
    }
    std::vector<Uploader> set;
    set.reserve(members.size());
    for (int idx : members) {
      const PendingTask& p = pending_[idx];
      set.push_back({p.task.owner, p.gain, world_.vehicles[p.task.owner].tx_power_w});
    }
    const auto rates = noma_uplink_rates(set, ch);
    for (std::size_t k = 0; k < members.size(); ++k)
      pending_[members[k]].uplink_bps = rates[k];
  }
}

void Engine::sweep_resolved(SlotRecord& rec) {
  std::size_t kept = 0;
  for (auto& p : pending_) {
    if (p.status == PendingTask::Status::Failed) rec.failed += 1;
    if (p.status == PendingTask::Status::Pending) pending_[kept++] = std::move(p);
  }
  pending_.resize(kept);
}

void Engine::update_nco_state() {
  const double lr = world_.cfg.baselines.nco_learning_rate;
  for (const auto& veh : world_.vehicles) {
    const ServerState& srv = world_.server_by_id(world_.nearest_server_id(veh.x));
    const double busy = srv.cores > 0
                            ? static_cast<double>(srv.busy_cores) / srv.cores
                            : 1.0;
    double& p = nco_prob_[veh.id];
    p = std::clamp((1.0 - lr) * p + lr * (1.0 - busy), 0.0, 1.0);
  }
}

SlotRecord Engine::step() {
  if (t_ >= world_.cfg.slots) throw std::logic_error("step past horizon");
  world_.slot = t_;
  SlotRecord rec;
  rec.slot = t_;
  commits_.clear();

  release_resources();
  process_completions(rec);

  auto fresh = sample_tasks(world_, t_);
  rec.generated = static_cast<int>(fresh.size());
  for (auto& task : fresh) {
    PendingTask p;
    p.task = task;
    pending_.push_back(std::move(p));
  }

  expire_deadlines(rec);
  prepare_channel();

  switch (world_.cfg.scheme) {
    case Scheme::BargainMatch: decide_bargain_match(*this); break;
    case Scheme::Elo: decide_elo(*this); break;
    case Scheme::Exo: decide_exo(*this); break;
    case Scheme::Nvo: decide_nvo(*this); break;
    case Scheme::Eco: decide_eco(*this); break;
    case Scheme::Nco: decide_nco(*this); break;
    case Scheme::Opora: decide_opora(*this); break;
  }
  sweep_resolved(rec);

  rec.committed = static_cast<int>(commits_.size());
  rec.sw = social_welfare(commits_);
  for (const auto& d : commits_) {
    rec.vehicle_utility += d.vehicle_utility;
    rec.server_utility += d.server_utility;
  }

  const ConstraintReport report = check_constraints(world_, commits_);
  if (!report.all_pass())
    throw std::logic_error("scheduler committed an infeasible slot: " +
                           report.summary());

  if (world_.cfg.scheme == Scheme::Nco) update_nco_state();
  if (t_ % world_.cfg.epoch_slots == 0) advance_epoch(world_);

  // Streaming aggregates.
  metrics_.sw_cum += rec.sw;
  metrics_.vehicle_utility_cum += rec.vehicle_utility;
  metrics_.server_utility_cum += rec.server_utility;
  metrics_.n_gen += rec.generated;
  metrics_.n_succ += rec.completed;
  metrics_.n_failed += rec.failed;
  metrics_.sum_delay_s += rec.completed_delay_s;
  metrics_.sum_cycles += rec.completed_cycles;
  metrics_.sum_bits += rec.completed_bits;
  rec.sw_cum = metrics_.sw_cum;
  rec.apr = metrics_.apr(world_.cfg.output.apr_mode);
  rec.acd = metrics_.acd();
  rec.acr = metrics_.acr();
  metrics_.slots.push_back(rec);

  ++t_;
  return rec;
}

RunMetrics Engine::run() {
  const auto t0 = std::chrono::steady_clock::now();
  while (t_ < world_.cfg.slots) step();
  const auto t1 = std::chrono::steady_clock::now();
  metrics_.runtime_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return metrics_;
}

RunMetrics run_simulation(const ScenarioConfig& cfg, std::ostream* trace) {
  Engine engine(cfg, trace);
  return engine.run();
}

}  // namespace vecsim
