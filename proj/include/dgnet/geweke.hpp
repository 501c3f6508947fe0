// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "dgnet/mcmc_run.hpp"

namespace dgnet {

// Joint-distribution ("getting it right") test. Marginal-conditional draws
// from the generative law are compared against a successive-conditional chain
// that alternates full posterior sweeps with exact data regeneration.
//
// The harness model is the finite restriction of the network model to K
// tracked nodes: initial counts are clamped (so the first slice behaves like
// an interior one), and the data law is conditioned on every interaction
// endpoint landing on a tracked node. Under that conditioning the tracked
// likelihood is exactly the one the production kernels target, the remainder
// mass acquires the factor exp(-(w*)^2 - 2 S w*) per slice (handled by
// rejection on the forward side), and new-interaction counts are independent
// Poissons over tracked pairs on the data side.
struct GewekeConfig {
  int K = 5;
  int T = 5;
  HyperParams hp;
  long c0 = 2;       // clamped initial count per node
  long c0_star = 0;  // clamped initial remainder count
  int n_samples = 10000;
  int sweeps_per_sample = 5;
  double ratio_power = 1.0;  // != 1 corrupts MH ratios (negative control)
  HmcConfig hmc{0.1, 5, 1.0};
  std::uint64_t seed = 1;

  GewekeConfig() {
    hp.alpha = 0.8;
    hp.tau = 1.0;
    hp.phi = 5.0;
    hp.rho = 0.5;
  }
};

namespace detail {

inline McmcState geweke_empty_state(const GewekeConfig& cfg) {
  McmcState s;
  s.T = cfg.T;
  s.K = cfg.K;
  s.hp = cfg.hp;
  s.obs_kind = ObservationKind::Binary;
  s.c0.assign(static_cast<std::size_t>(cfg.K), cfg.c0);
  s.c0_star = cfg.c0_star;
  s.w.assign(static_cast<std::size_t>(cfg.T),
             std::vector<double>(static_cast<std::size_t>(cfg.K), 0.0));
  s.w_star.assign(static_cast<std::size_t>(cfg.T), 0.0);
  s.c.assign(static_cast<std::size_t>(cfg.T - 1),
             std::vector<long>(static_cast<std::size_t>(cfg.K), 0));
  s.c_star.assign(static_cast<std::size_t>(cfg.T - 1), 0);
  s.n_new.assign(static_cast<std::size_t>(cfg.T), {});
  s.n_old.assign(static_cast<std::size_t>(cfg.T), {});
  s.obs.assign(static_cast<std::size_t>(cfg.T), {});
  return s;
}

// Exact redraw of the interaction data given the chains; also the
// successive-conditional data step.
inline void geweke_data_step(McmcState& s, Rng& rng) {
  for (int t = 0; t < s.T; ++t) {
    auto& nn = s.n_new[static_cast<std::size_t>(t)];
    nn.clear();
    for (int i = 0; i < s.K; ++i) {
      if (!s.alive(t, i)) continue;
      for (int j = i; j < s.K; ++j) {
        if (!s.alive(t, j)) continue;
        const PairKey p(i, j);
        const long v = sample_poisson(rng, s.pair_rate(t, p));
        if (v > 0) nn[p] = v;
      }
    }
    auto& no = s.n_old[static_cast<std::size_t>(t)];
    no.clear();
    if (t > 0) {
      PairCounts prev = s.n_new[static_cast<std::size_t>(t - 1)];
      for (const auto& [p, v] : s.n_old[static_cast<std::size_t>(t - 1)]) prev[p] += v;
      const double pi = s.forget_prob(t);
      for (const auto& [p, v] : prev) {
        const long kept = sample_binomial(rng, v, pi);
        if (kept > 0) no[p] = kept;
      }
    }
    auto& zt = s.obs[static_cast<std::size_t>(t)];
    zt.clear();
    for (const auto& [p, v] : nn) zt[p] = 1;
    for (const auto& [p, v] : no) zt[p] = 1;
  }
  s.refresh_caches();
}

// Forward draw from the harness joint; rejection handles the remainder tilt.
inline McmcState geweke_forward(const GewekeConfig& cfg, Rng& rng,
                                long* tries = nullptr) {
  const double tp = cfg.hp.tau + cfg.hp.phi;
  for (;;) {
    if (tries) ++*tries;
    McmcState s = geweke_empty_state(cfg);
    for (int k = 0; k < cfg.K; ++k)
      s.w[0][static_cast<std::size_t>(k)] =
          cfg.c0 > 0 ? sample_gamma(rng, static_cast<double>(cfg.c0), tp) : 0.0;
    s.w_star[0] = sample_gamma(rng, cfg.hp.alpha + static_cast<double>(cfg.c0_star), tp);
    for (int t = 0; t + 1 < cfg.T; ++t) {
      for (int k = 0; k < cfg.K; ++k) {
        const double wv = s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
        const long cv = wv > 0.0 ? sample_poisson(rng, cfg.hp.phi * wv) : 0;
        s.c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = cv;
        s.w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)] =
            cv > 0 ? sample_gamma(rng, static_cast<double>(cv), tp) : 0.0;
      }
      const long cs = sample_poisson(rng, cfg.hp.phi * s.w_star[static_cast<std::size_t>(t)]);
      s.c_star[static_cast<std::size_t>(t)] = cs;
      s.w_star[static_cast<std::size_t>(t + 1)] =
          sample_gamma(rng, cfg.hp.alpha + static_cast<double>(cs), tp);
    }
    double log_acc = 0.0;
    for (int t = 0; t < cfg.T; ++t) {
      double tracked = 0.0;
      for (int k = 0; k < cfg.K; ++k)
        tracked += s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
      const double ws = s.w_star[static_cast<std::size_t>(t)];
      log_acc -= ws * ws + 2.0 * tracked * ws;
    }
    if (std::log(uniform01(rng)) < log_acc) {
      geweke_data_step(s, rng);
      return s;
    }
  }
}

}  // namespace detail

struct GewekeStatistic {
  std::string name;
  std::function<double(const McmcState&)> eval;
};

inline std::vector<GewekeStatistic> default_geweke_statistics(int T) {
  std::vector<GewekeStatistic> stats;
  auto add = [&](std::string name, std::function<double(const McmcState&)> fn) {
    stats.push_back({std::move(name), std::move(fn)});
  };
  const int mid = T / 2;
  for (int t : {0, mid, T - 1}) {
    add("total_mass[" + std::to_string(t) + "]", [t](const McmcState& s) {
      return s.sum_w[static_cast<std::size_t>(t)] + s.w_star[static_cast<std::size_t>(t)];
    });
    add("w_star[" + std::to_string(t) + "]", [t](const McmcState& s) {
      return s.w_star[static_cast<std::size_t>(t)];
    });
  }
  for (int t : {0, T - 2}) {
    add("c_nodes[" + std::to_string(t) + "]", [t](const McmcState& s) {
      double v = 0;
      for (long cv : s.c[static_cast<std::size_t>(t)]) v += static_cast<double>(cv);
      return v;
    });
    add("c_star[" + std::to_string(t) + "]", [t](const McmcState& s) {
      return static_cast<double>(s.c_star[static_cast<std::size_t>(t)]);
    });
  }
  for (int t : {0, T - 1}) {
    add("edges[" + std::to_string(t) + "]", [t](const McmcState& s) {
      std::set<PairKey> e;
      for (const auto& [p, v] : s.n_new[static_cast<std::size_t>(t)])
        if (v > 0) e.insert(p);
      for (const auto& [p, v] : s.n_old[static_cast<std::size_t>(t)])
        if (v > 0) e.insert(p);
      return static_cast<double>(e.size());
    });
  }
  add("n_new_total", [](const McmcState& s) {
    double v = 0;
    for (const auto& slice : s.n_new)
      for (const auto& [p, n] : slice) v += static_cast<double>(n);
    return v;
  });
  add("alive[" + std::to_string(T - 1) + "]", [T](const McmcState& s) {
    double v = 0;
    for (int k = 0; k < s.K; ++k) v += s.alive(T - 1, k) ? 1.0 : 0.0;
    return v;
  });
  return stats;
}

struct GewekeRow {
  std::string name;
  double mc_mean = 0, sc_mean = 0, z_mean = 0;
  double mc_sq = 0, sc_sq = 0, z_sq = 0;
};

struct GewekeReport {
  std::vector<GewekeRow> rows;
  double forward_accept_rate = 0.0;
  double max_abs_z() const {
    double m = 0;
    for (const auto& r : rows) m = std::max({m, std::abs(r.z_mean), std::abs(r.z_sq)});
    return m;
  }
};

namespace detail {

struct SeriesSummary {
  double mean = 0, se = 0;
};

inline SeriesSummary iid_summary(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double m = 0;
  for (double v : x) m += v;
  m /= n;
  double v = 0;
  for (double u : x) v += (u - m) * (u - m);
  v /= (n - 1.0);
  return {m, std::sqrt(v / n)};
}

// Batch-means standard error for an autocorrelated series.
inline SeriesSummary batch_summary(const std::vector<double>& x, int n_batches = 50) {
  const std::size_t n = x.size();
  const std::size_t bsz = std::max<std::size_t>(1, n / static_cast<std::size_t>(n_batches));
  std::vector<double> means;
  for (std::size_t b = 0; b + bsz <= n; b += bsz) {
    double m = 0;
    for (std::size_t i = b; i < b + bsz; ++i) m += x[i];
    means.push_back(m / static_cast<double>(bsz));
  }
  SeriesSummary s = iid_summary(means);
  double grand = 0;
  for (double v : x) grand += v;
  s.mean = grand / static_cast<double>(n);
  return s;
}

}  // namespace detail

inline GewekeReport geweke_test(const GewekeConfig& cfg,
                                const std::vector<GewekeStatistic>& stats) {
  require(cfg.n_samples >= 1000, "geweke_test: need at least 10^3 samples");
  require(cfg.K >= 1 && cfg.T >= 2, "geweke_test: need K >= 1, T >= 2");
  cfg.hp.validate();

  Rng rng_mc = make_stream(cfg.seed, 1);
  // With no sweeps the successive side degenerates to fresh forward draws;
  // sharing the stream then makes the two sides equal draw for draw.
  Rng rng_sc = make_stream(cfg.seed, cfg.sweeps_per_sample == 0 ? 1 : 2);

  const std::size_t ns = static_cast<std::size_t>(cfg.n_samples);
  std::vector<std::vector<double>> mc(stats.size(), std::vector<double>(ns));
  std::vector<std::vector<double>> sc(stats.size(), std::vector<double>(ns));

  long forward_tries = 0;
  for (std::size_t i = 0; i < ns; ++i) {
    const McmcState s = detail::geweke_forward(cfg, rng_mc, &forward_tries);
    for (std::size_t j = 0; j < stats.size(); ++j) mc[j][i] = stats[j].eval(s);
  }
  const long mc_draws_tries = forward_tries;

  McmcOptions opt;
  opt.update_alpha = opt.update_phi = opt.update_tau = opt.update_rho = false;
  opt.hmc = cfg.hmc;
  opt.adapt_step_size = false;
  PriorConfig prior;

  McmcState state;
  if (cfg.sweeps_per_sample > 0) state = detail::geweke_forward(cfg, rng_sc);
  AcceptanceReport rep;
  for (std::size_t i = 0; i < ns; ++i) {
    if (cfg.sweeps_per_sample == 0) {
      state = detail::geweke_forward(cfg, rng_sc);
    } else {
      for (int sweep = 0; sweep < cfg.sweeps_per_sample; ++sweep) {
        run_sweep(state, opt, prior, rng_sc, rep, nullptr, cfg.ratio_power);
        state.refresh_caches();
      }
      detail::geweke_data_step(state, rng_sc);
    }
    for (std::size_t j = 0; j < stats.size(); ++j) sc[j][i] = stats[j].eval(state);
  }

  GewekeReport report;
  report.forward_accept_rate =
      static_cast<double>(cfg.n_samples) / static_cast<double>(mc_draws_tries);
  auto zscore = [](const detail::SeriesSummary& a, const detail::SeriesSummary& b) {
    const double denom = std::sqrt(a.se * a.se + b.se * b.se);
    return denom > 0.0 ? (a.mean - b.mean) / denom : 0.0;
  };
  for (std::size_t j = 0; j < stats.size(); ++j) {
    GewekeRow row;
    row.name = stats[j].name;
    const auto m1 = detail::iid_summary(mc[j]);
    const auto s1 = detail::batch_summary(sc[j]);
    row.mc_mean = m1.mean;
    row.sc_mean = s1.mean;
    row.z_mean = zscore(m1, s1);
    std::vector<double> mc2(ns), sc2(ns);
    for (std::size_t i = 0; i < ns; ++i) {
      mc2[i] = mc[j][i] * mc[j][i];
      sc2[i] = sc[j][i] * sc[j][i];
    }
    const auto m2 = detail::iid_summary(mc2);
    const auto s2 = detail::batch_summary(sc2);
    row.mc_sq = m2.mean;
    row.sc_sq = s2.mean;
    row.z_sq = zscore(m2, s2);
    report.rows.push_back(row);
  }
  return report;
}

inline GewekeReport geweke_test(const GewekeConfig& cfg) {
  return geweke_test(cfg, default_geweke_statistics(cfg.T));
}

}  // namespace dgnet
