// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "dgnet/mcmc_kernels.hpp"

namespace dgnet {

struct McmcOptions {
  int burnin = 500;
  int samples = 1000;
  int thin = 1;
  HmcConfig hmc;
  bool adapt_step_size = true;
  double target_accept = 0.65;
  bool update_alpha = true;
  bool update_phi = true;
  bool update_tau = true;
  bool update_rho = true;
  bool joint_moves = true;

  void validate() const {
    require(burnin >= 0 && samples >= 0 && thin >= 1, "McmcOptions: bad schedule");
    hmc.validate();
    require(target_accept > 0.0 && target_accept < 1.0, "McmcOptions: bad target accept");
  }
};

struct KernelStats {
  long attempts = 0;
  long accepts = 0;
  double rate() const {
    return attempts == 0 ? 0.0 : static_cast<double>(accepts) / static_cast<double>(attempts);
  }
  void tally(bool ok) {
    ++attempts;
    if (ok) ++accepts;
  }
};

struct AcceptanceReport {
  std::map<std::string, KernelStats> kernels;
  long hmc_divergences = 0;
  std::vector<double> hmc_step_sizes;  // per time slice after adaptation
};

struct SampleRecord {
  long iteration = 0;
  double alpha = 0, phi = 0, tau = 0, rho = 0;
  std::vector<std::map<NodeId, double>> weights;  // sparse per time
  std::vector<double> w_star;
  std::vector<long> c_total;  // per count slice
  std::vector<long> c_star;
  std::map<std::string, double> accept_rates;
};

// Nesterov dual averaging of the HMC step size toward a target acceptance.
struct DualAverager {
  double mu = 0.0;
  double log_eps = 0.0;
  double log_eps_bar = 0.0;
  double h_bar = 0.0;
  long iter = 0;
  double target = 0.65;
  double gamma = 0.05, t0 = 10.0, kappa = 0.75;

  explicit DualAverager(double eps0 = 0.05, double target_ = 0.65)
      : mu(std::log(10.0 * eps0)), log_eps(std::log(eps0)),
        log_eps_bar(std::log(eps0)), target(target_) {}

  void observe(double accept_prob) {
    ++iter;
    const double it = static_cast<double>(iter);
    h_bar = (1.0 - 1.0 / (it + t0)) * h_bar + (target - accept_prob) / (it + t0);
    log_eps = mu - std::sqrt(it) / gamma * h_bar;
    const double eta = std::pow(it, -kappa);
    log_eps_bar = eta * log_eps + (1.0 - eta) * log_eps_bar;
  }
  double current() const { return std::exp(log_eps); }
  double averaged() const { return std::exp(log_eps_bar); }
};

inline SampleRecord snapshot_state(const McmcState& s, long iteration,
                                   const AcceptanceReport& rep) {
  SampleRecord rec;
  rec.iteration = iteration;
  rec.alpha = s.hp.alpha;
  rec.phi = s.hp.phi;
  rec.tau = s.hp.tau;
  rec.rho = s.hp.rho;
  rec.weights.resize(static_cast<std::size_t>(s.T));
  rec.w_star = s.w_star;
  for (int t = 0; t < s.T; ++t)
    for (int k = 0; k < s.K; ++k) {
      const double v = s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
      if (v > 0.0) rec.weights[static_cast<std::size_t>(t)][k] = v;
    }
  rec.c_total.resize(s.c.size());
  for (std::size_t t = 0; t < s.c.size(); ++t)
    rec.c_total[t] = std::accumulate(s.c[t].begin(), s.c[t].end(), 0L);
  rec.c_star = s.c_star;
  for (const auto& [name, st] : rep.kernels) rec.accept_rates[name] = st.rate();
  return rec;
}

// ---------------------------------------------------------------------------
// State initialization from data.
// ---------------------------------------------------------------------------

inline McmcState init_state(const ObservedNetwork& data, const HyperParams& hp,
                            bool no_memory = false, bool no_death = false) {
  data.validate();
  hp.validate();
  require(data.T >= 1, "init_state: empty observation (T = 0)");
  McmcState s;
  s.T = data.T;
  s.hp = hp;
  s.hp.delta = data.delta;
  s.obs_kind = data.kind;
  s.no_memory = no_memory && data.kind == ObservationKind::Counts;
  s.no_death = no_death && data.kind == ObservationKind::Binary;
  if (s.no_death) s.hp.rho = 0.0;

  NodeId max_id = -1;
  for (const auto& slice : data.data)
    for (const auto& [p, v] : slice) max_id = std::max(max_id, p.j);
  s.K = max_id + 1;

  s.obs = data.data;
  s.w.assign(static_cast<std::size_t>(s.T), std::vector<double>(static_cast<std::size_t>(s.K), 0.0));
  s.w_star.assign(static_cast<std::size_t>(s.T), 0.0);
  s.c.assign(static_cast<std::size_t>(std::max(0, s.T - 1)),
             std::vector<long>(static_cast<std::size_t>(s.K), 0));
  s.c_star.assign(static_cast<std::size_t>(std::max(0, s.T - 1)), 0);
  s.n_new.assign(static_cast<std::size_t>(s.T), {});
  s.n_old.assign(static_cast<std::size_t>(s.T), {});

  if (data.kind == ObservationKind::Counts) {
    for (int t = 0; t < s.T; ++t)
      for (const auto& [p, v] : data.data[static_cast<std::size_t>(t)])
        if (v > 0) s.n_new[static_cast<std::size_t>(t)][p] = v;
  } else {
    for (int t = 0; t < s.T; ++t) {
      for (const auto& [p, z] : data.data[static_cast<std::size_t>(t)]) {
        if (z != 1) continue;
        if (s.no_death && t > 0) {
          const long carried = s.n_total(t - 1, p);
          if (carried > 0) s.n_old[static_cast<std::size_t>(t)][p] = carried;
          if (carried == 0) s.n_new[static_cast<std::size_t>(t)][p] = 1;
        } else {
          s.n_new[static_cast<std::size_t>(t)][p] = 1;
        }
      }
      if (s.no_death && t > 0) {
        for (const auto& [p, v] : s.n_new[static_cast<std::size_t>(t - 1)])
          if (v > 0 && (!data.data[static_cast<std::size_t>(t)].count(p) ||
                        data.data[static_cast<std::size_t>(t)].at(p) != 1))
            throw std::invalid_argument(
                "init_state: edge disappears although no-death carryover is set");
      }
    }
  }

  s.refresh_caches();
  const double base_rate = hp.tau + 2.0 * hp.phi + 1.0;
  for (int t = 0; t < s.T; ++t) {
    for (int k = 0; k < s.K; ++k)
      s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] =
          (1.0 + static_cast<double>(s.mult[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)])) /
          base_rate;
    s.w_star[static_cast<std::size_t>(t)] = std::max(hp.alpha / base_rate, 1e-3);
  }
  for (int t = 0; t + 1 < s.T; ++t) {
    for (int k = 0; k < s.K; ++k) s.c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = 1;
    s.c_star[static_cast<std::size_t>(t)] =
        std::max(1L, static_cast<long>(hp.phi * s.w_star[static_cast<std::size_t>(t)]));
  }
  s.refresh_caches();
  s.check_invariants();
  return s;
}

// ---------------------------------------------------------------------------
// One full sweep over all kernels. `ratio_power` feeds the validation
// harness's corrupted-ratio negative control and stays 1 in production.
// ---------------------------------------------------------------------------

inline void run_sweep(McmcState& s, const McmcOptions& opt, const PriorConfig& prior,
                      Rng& rng, AcceptanceReport& rep,
                      std::vector<DualAverager>* averagers = nullptr,
                      double ratio_power = 1.0) {
  // 1. weights, one HMC move per time slice
  for (int t = 0; t < s.T; ++t) {
    HmcConfig cfg = opt.hmc;
    if (averagers) cfg.step_size = (*averagers)[static_cast<std::size_t>(t)].current();
    else if (!rep.hmc_step_sizes.empty())
      cfg.step_size = rep.hmc_step_sizes[static_cast<std::size_t>(t)];
    const HmcResult res = update_weights_hmc(s, t, cfg, rng);
    rep.kernels["hmc_weights"].tally(res.accepted);
    if (res.divergent) ++rep.hmc_divergences;
    if (averagers) (*averagers)[static_cast<std::size_t>(t)].observe(res.accept_prob);
  }

  // 2. latent counts at sites whose next weight is alive
  std::vector<int> order(static_cast<std::size_t>(s.K));
  std::iota(order.begin(), order.end(), 0);
  for (int t = 0; t + 1 < s.T; ++t) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int k : order) {
      if (!s.alive(t, k) || !s.alive(t + 1, k)) continue;
      rep.kernels["latent_count"].tally(update_latent_count(s, t, k, rng));
    }
    // 2b. joint refreshes where the node has no interactions at t+1; these
    // carry the death and revival transitions at the tail of the alive span.
    if (opt.joint_moves) {
      std::shuffle(order.begin(), order.end(), rng);
      for (int k : order) {
        if (!s.alive(t, k)) continue;
        if (s.mult[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)] != 0) continue;
        rep.kernels["joint_count_weight"].tally(
            update_joint_count_weight(s, t, k, rng, ratio_power));
      }
      // 2c. head moves shifting the birth slice across t <-> t+1
      std::shuffle(order.begin(), order.end(), rng);
      for (int k : order) {
        if (s.mult[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] != 0) continue;
        if (!s.alive(t + 1, k)) continue;
        if (!s.alive(t, k))
          rep.kernels["birth_shift"].tally(update_birth_move(s, t, k, rng, ratio_power));
        else if (s.born_at(t, k))
          rep.kernels["birth_shift"].tally(update_unbirth_move(s, t, k, rng, ratio_power));
      }
    }
  }

  // 3. remainder counts  4. remainder masses
  for (int t = 0; t + 1 < s.T; ++t)
    rep.kernels["root_count"].tally(update_root_count(s, t, rng));
  for (int t = 0; t < s.T; ++t)
    rep.kernels["root_weight"].tally(update_root_weight(s, t, rng, ratio_power));

  // 5. hyperparameters
  if (opt.update_alpha) {
    update_alpha(s, prior, rng);
    rep.kernels["alpha"].tally(true);
  }
  if (opt.update_phi) rep.kernels["phi"].tally(update_phi(s, prior, rng));
  if (opt.update_tau) rep.kernels["tau"].tally(update_tau(s, prior, rng));
  if (opt.update_rho && !s.no_death && !(s.obs_kind == ObservationKind::Counts && s.no_memory))
    rep.kernels["rho"].tally(update_rho(s, prior, rng));

  // 6. interaction counts
  if (s.obs_kind == ObservationKind::Binary) {
    for (int t = 0; t < s.T; ++t)
      for (const auto& [p, z] : s.obs[static_cast<std::size_t>(t)])
        if (z == 1)
          rep.kernels["interaction_counts"].tally(
              update_interaction_counts(s, t, p, rng, ratio_power));
  } else if (!s.no_memory) {
    for (int t = 1; t < s.T; ++t) {
      std::set<PairKey> support;
      for (const auto& [p, v] : s.n_new[static_cast<std::size_t>(t - 1)])
        if (v > 0) support.insert(p);
      for (const auto& [p, v] : s.n_old[static_cast<std::size_t>(t - 1)])
        if (v > 0) support.insert(p);
      for (const PairKey& p : support)
        rep.kernels["old_counts"].tally(update_old_counts(s, t, p, rng));
    }
  }
}

inline AcceptanceReport run_mcmc(McmcState& s, const PriorConfig& prior,
                                 const McmcOptions& opt, Rng& rng,
                                 const std::function<void(const SampleRecord&)>& sink) {
  opt.validate();
  prior.validate();
  s.refresh_caches();
  s.check_invariants();
  AcceptanceReport rep;

  std::vector<DualAverager> averagers;
  if (opt.adapt_step_size)
    averagers.assign(static_cast<std::size_t>(s.T),
                     DualAverager(opt.hmc.step_size, opt.target_accept));

  for (int it = 0; it < opt.burnin; ++it) {
    run_sweep(s, opt, prior, rng, rep, opt.adapt_step_size ? &averagers : nullptr);
    s.refresh_caches();
  }
  rep.hmc_step_sizes.assign(static_cast<std::size_t>(s.T), opt.hmc.step_size);
  if (opt.adapt_step_size)
    for (int t = 0; t < s.T; ++t)
      rep.hmc_step_sizes[static_cast<std::size_t>(t)] =
          averagers[static_cast<std::size_t>(t)].averaged();

  rep.kernels.clear();  // report post-burn-in acceptance
  rep.hmc_divergences = 0;
  long kept = 0;
  for (long it = 0; kept < opt.samples; ++it) {
    run_sweep(s, opt, prior, rng, rep, nullptr);
    s.check_invariants();
    s.refresh_caches();
    if ((it + 1) % opt.thin == 0) {
      sink(snapshot_state(s, kept, rep));
      ++kept;
    }
  }
  return rep;
}

}  // namespace dgnet
