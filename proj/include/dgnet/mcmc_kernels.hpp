// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "dgnet/mcmc_state.hpp"
#include "dgnet/model.hpp"

namespace dgnet {

struct HmcConfig {
  double step_size = 0.05;
  int leapfrog_steps = 10;  // 0 is tolerated and degenerates to the identity
  double mass = 1.0;

  void validate() const {
    require(step_size > 0.0, "HmcConfig: step_size must be > 0");
    require(leapfrog_steps >= 0, "HmcConfig: leapfrog_steps must be >= 0");
    require(mass > 0.0, "HmcConfig: mass must be > 0");
  }
};

struct HmcResult {
  bool accepted = false;
  double accept_prob = 0.0;
  bool divergent = false;
};

inline WeightSliceParams slice_params(const McmcState& s, int t,
                                      const std::vector<int>& nodes) {
  WeightSliceParams p;
  p.alpha = s.hp.alpha;
  p.phi = s.hp.phi;
  p.tau = s.hp.tau;
  p.has_prev = s.has_prev(t);
  p.has_next = s.has_next(t);
  p.root_count_cur = static_cast<double>(s.root_count_cur(t));
  p.root_count_prev = static_cast<double>(s.root_count_prev(t));
  p.multiplicity.reserve(nodes.size());
  for (int k : nodes) {
    p.multiplicity.push_back(
        static_cast<double>(s.mult[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)]));
    p.count_cur.push_back(static_cast<double>(s.count_cur(t, k)));
    p.count_prev.push_back(static_cast<double>(s.count_prev(t, k)));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Step 1: all tracked weights of one time slice jointly, by Hamiltonian Monte
// Carlo in y = log w coordinates.
// ---------------------------------------------------------------------------

inline HmcResult update_weights_hmc(McmcState& s, int t, const HmcConfig& cfg, Rng& rng) {
  std::vector<int> nodes;
  for (int k = 0; k < s.K; ++k)
    if (s.alive(t, k)) nodes.push_back(k);
  if (nodes.empty()) return {true, 1.0, false};

  const WeightSliceParams params = slice_params(s, t, nodes);
  const double w_star = s.w_star[static_cast<std::size_t>(t)];
  const std::size_t n = nodes.size();

  auto potential = [&](const std::vector<double>& wv) {
    double lp = log_posterior_weights(wv, w_star, params);
    for (double v : wv) lp += std::log(v);  // y-space Jacobian
    return -lp;
  };
  auto grad_potential = [&](const std::vector<double>& wv, std::vector<double>& g) {
    grad_log_posterior_weights_y(wv, w_star, params, g);
    for (double& v : g) v = -v;
  };

  std::vector<double> w0(n);
  for (std::size_t i = 0; i < n; ++i)
    w0[i] = s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(nodes[i])];
  std::vector<double> y(n), wv = w0, p(n), g(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::log(w0[i]);

  const double mass_sd = std::sqrt(cfg.mass);
  double kinetic0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = mass_sd * standard_normal(rng);
    kinetic0 += p[i] * p[i];
  }
  kinetic0 /= 2.0 * cfg.mass;
  const double potential0 = potential(w0);

  bool finite = true;
  if (cfg.leapfrog_steps > 0) {
    const double eps = cfg.step_size;
    grad_potential(wv, g);
    for (std::size_t i = 0; i < n; ++i) p[i] -= 0.5 * eps * g[i];
    for (int l = 0; l < cfg.leapfrog_steps && finite; ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        y[i] += eps * p[i] / cfg.mass;
        wv[i] = std::exp(y[i]);
        if (!std::isfinite(wv[i]) || wv[i] <= 0.0) finite = false;
      }
      if (!finite) break;
      grad_potential(wv, g);
      const double scale = (l + 1 == cfg.leapfrog_steps) ? 0.5 : 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        p[i] -= scale * eps * g[i];
        if (!std::isfinite(p[i])) finite = false;
      }
    }
  }

  HmcResult out;
  if (!finite) {
    out.divergent = true;
    return out;
  }
  double kinetic1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) kinetic1 += p[i] * p[i];
  kinetic1 /= 2.0 * cfg.mass;
  const double potential1 = potential(wv);
  const double log_r = potential0 - potential1 + kinetic0 - kinetic1;
  if (!std::isfinite(log_r)) {
    out.divergent = true;
    return out;
  }
  out.accept_prob = std::min(1.0, std::exp(log_r));
  if (mh_accept(rng, log_r)) {
    out.accepted = true;
    auto& wt = s.w[static_cast<std::size_t>(t)];
    double& sw = s.sum_w[static_cast<std::size_t>(t)];
    for (std::size_t i = 0; i < n; ++i) {
      sw += wv[i] - wt[static_cast<std::size_t>(nodes[i])];
      wt[static_cast<std::size_t>(nodes[i])] = wv[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Step 2: latent count c_tk given the two adjacent weights.
// ---------------------------------------------------------------------------

inline double latent_count_log_ratio(const McmcState& s, int t, int k, long c_new) {
  const double w_next = s.w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)];
  const long c_cur = s.c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  return gamma_logpdf(w_next, static_cast<double>(c_new), s.hp.tau + s.hp.phi) -
         gamma_logpdf(w_next, static_cast<double>(c_cur), s.hp.tau + s.hp.phi);
}

// Two-point law at a vanishing next weight, treating the zero as a limiting
// continuous observation: P(c=0) = 1 / (1 + phi w (tau+phi)).
inline double dead_next_count_prob_zero(double w_cur, double phi, double tau) {
  return 1.0 / (1.0 + phi * w_cur * (tau + phi));
}

inline bool update_latent_count(McmcState& s, int t, int k, Rng& rng) {
  require(s.count_slice_exists(t), "update_latent_count: no count slice here");
  const double w_cur = s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  require(w_cur > 0.0, "update_latent_count: node must be alive at t");
  const double w_next = s.w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)];
  long& c_ref = s.c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];

  if (w_next > 0.0) {
    const long c_new = sample_ztpoisson(rng, s.hp.phi * w_cur);
    if (mh_accept(rng, latent_count_log_ratio(s, t, k, c_new))) {
      c_ref = c_new;
      return true;
    }
    return false;
  }
  const double p0 = dead_next_count_prob_zero(w_cur, s.hp.phi, s.hp.tau);
  c_ref = uniform01(rng) < p0 ? 0 : 1;
  return true;
}

// ---------------------------------------------------------------------------
// Joint (c_tk, w_{t+1,k}) refresh from the prior coupling, accepted with the
// likelihood ratio. This is the move that opens the death (-> both zero) and
// birth (both zero ->) transitions at the end of a node's alive prefix.
// Only valid where the node has no new interactions at t+1.
// ---------------------------------------------------------------------------

// Likelihood log ratio of proposing a new (count, next-weight) pair from the
// prior coupling; the prior factors cancel against the proposal, so the ratio
// depends only on the proposed next weight.
inline double joint_count_weight_log_ratio(const McmcState& s, int t, int k,
                                           double w_new) {
  const double w_old = s.w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)];
  const bool next_coupled = s.count_slice_exists(t + 1);
  const long c_fwd = next_coupled
                         ? s.c[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)]
                         : 0;
  const long m_fwd = s.mult[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)];
  double log_r = 0.0;
  const long exponent = c_fwd + m_fwd;
  if (exponent > 0) {
    if (w_new <= 0.0) return kNegInf;  // cannot cut the chain under a live count
    log_r += static_cast<double>(exponent) * (std::log(w_new) - std::log(w_old));
  }
  const double rest = s.sum_w[static_cast<std::size_t>(t + 1)] - w_old +
                      s.w_star[static_cast<std::size_t>(t + 1)];
  log_r += -(w_new * w_new - w_old * w_old) -
           (2.0 * rest + (next_coupled ? s.hp.phi : 0.0)) * (w_new - w_old);
  return log_r;
}

inline bool update_joint_count_weight(McmcState& s, int t, int k, Rng& rng,
                                      double ratio_power = 1.0) {
  require(s.count_slice_exists(t), "joint count/weight move: no count slice here");
  if (s.mult[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)] != 0)
    throw std::invalid_argument(
        "joint count/weight move: node has interactions at t+1");
  const double phi = s.hp.phi;
  const double tau = s.hp.tau;
  const double w_cur = s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  long& c_ref = s.c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  double& w_next_ref = s.w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)];

  const long c_new = sample_poisson(rng, phi * w_cur);
  const double w_new =
      c_new > 0 ? sample_gamma(rng, static_cast<double>(c_new), phi + tau) : 0.0;
  const double log_r = joint_count_weight_log_ratio(s, t, k, w_new);
  if (!mh_accept(rng, ratio_power * log_r)) return false;
  s.sum_w[static_cast<std::size_t>(t + 1)] += w_new - w_next_ref;
  c_ref = c_new;
  w_next_ref = w_new;
  return true;
}

inline bool update_joint_count_weight_death(McmcState& s, int t, int k, Rng& rng,
                                            double ratio_power = 1.0) {
  require(s.c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] > 0 ||
              s.w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)] > 0.0,
          "death move: node already dead after t");
  return update_joint_count_weight(s, t, k, rng, ratio_power);
}

// ---------------------------------------------------------------------------
// Head moves: a node's weight appearing for the first time. Shifting the
// birth slice between t and t+1 exchanges a fresh-atom factor
// alpha w^-1 exp(-birth_rate w) at one slice for the transition kernel into
// the other; the alpha factors cancel between the two configurations.
// ---------------------------------------------------------------------------

// Exponential rate of the fresh-atom intensity at slice t.
inline double birth_rate(const McmcState& s, int t) {
  return s.hp.tau + (s.has_prev(t) ? s.hp.phi : 0.0);
}

// Log density ratio of "born at t with head values (c_head, w_head)" over
// "born at t+1", everything else fixed. Node k's own slice-t weight is
// excluded from the squared-mass term whether or not it is currently there.
inline double birth_shift_log_ratio(const McmcState& s, int t, int k, long c_head,
                                    double w_head) {
  require(c_head >= 1 && w_head > 0.0, "birth_shift_log_ratio: head needs mass");
  const double phi = s.hp.phi;
  const double tau = s.hp.tau;
  const double w_next = s.w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)];
  const double others = s.sum_w[static_cast<std::size_t>(t)] -
                        s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] +
                        s.w_star[static_cast<std::size_t>(t)];
  const double ch = static_cast<double>(c_head);
  double lp = 0.0;
  lp += -std::log(w_head) - birth_rate(s, t) * w_head;  // fresh atom at t
  lp += -phi * w_head + ch * std::log(phi * w_head) -
        std::lgamma(ch + 1.0);                          // its count at t
  lp += -2.0 * others * w_head - w_head * w_head;       // squared-mass change at t
  lp += ch * std::log(tau + phi) + (ch - 1.0) * std::log(w_next) -
        (tau + phi) * w_next - std::lgamma(ch);         // transition into t+1
  lp -= -std::log(w_next) - (tau + phi) * w_next;       // minus the fresh atom at t+1
  return lp;
}

// Proposal for the head values, shared by both directions of the move.
inline double birth_head_log_proposal(const McmcState& s, int t, int k, long c_head,
                                      double w_head) {
  const double lambda =
      std::max((s.hp.tau + s.hp.phi) *
                   s.w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)],
               1e-8);
  const double others = s.sum_w[static_cast<std::size_t>(t)] -
                        s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] +
                        s.w_star[static_cast<std::size_t>(t)];
  const double rate = birth_rate(s, t) + s.hp.phi + 2.0 * others;
  return ztpoisson_logpmf(c_head, lambda) +
         gamma_logpdf(w_head, static_cast<double>(c_head), rate);
}

// Materialize the head one slice earlier: node absent at t, alive at t+1.
inline bool update_birth_move(McmcState& s, int t, int k, Rng& rng,
                              double ratio_power = 1.0) {
  require(s.count_slice_exists(t), "birth move: no count slice here");
  require(!s.alive(t, k) && s.alive(t + 1, k), "birth move: needs an absent head");
  if (s.mult[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] != 0)
    throw std::invalid_argument("birth move: node has interactions at t");
  const double lambda =
      std::max((s.hp.tau + s.hp.phi) *
                   s.w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)],
               1e-8);
  const long c_new = sample_ztpoisson(rng, lambda);
  const double others =
      s.sum_w[static_cast<std::size_t>(t)] + s.w_star[static_cast<std::size_t>(t)];
  const double rate = birth_rate(s, t) + s.hp.phi + 2.0 * others;
  const double w_new =
      std::max(sample_gamma(rng, static_cast<double>(c_new), rate), 1e-300);
  const double log_r = birth_shift_log_ratio(s, t, k, c_new, w_new) -
                       birth_head_log_proposal(s, t, k, c_new, w_new);
  if (!mh_accept(rng, ratio_power * log_r)) return false;
  s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = w_new;
  s.c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = c_new;
  s.sum_w[static_cast<std::size_t>(t)] += w_new;
  return true;
}

// Remove the head slice: node born at t and still alive at t+1.
inline bool update_unbirth_move(McmcState& s, int t, int k, Rng& rng,
                                double ratio_power = 1.0) {
  require(s.count_slice_exists(t), "unbirth move: no count slice here");
  require(s.born_at(t, k) && s.alive(t + 1, k), "unbirth move: needs a born head");
  if (s.mult[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] != 0)
    throw std::invalid_argument("unbirth move: node has interactions at t");
  const long c_cur = s.c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  const double w_cur = s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  const double log_r = birth_head_log_proposal(s, t, k, c_cur, w_cur) -
                       birth_shift_log_ratio(s, t, k, c_cur, w_cur);
  if (!mh_accept(rng, ratio_power * log_r)) return false;
  s.sum_w[static_cast<std::size_t>(t)] -= w_cur;
  s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = 0.0;
  s.c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = 0;
  return true;
}

// ---------------------------------------------------------------------------
// Step 6 (binary data): joint (n_new, n_old) refresh at one pair and time.
// ---------------------------------------------------------------------------

inline double interaction_counts_log_ratio(const McmcState& s, int t, PairKey p,
                                           long no_new, long nn_new) {
  long nn_cur = 0, no_cur = 0;
  if (auto it = s.n_new[static_cast<std::size_t>(t)].find(p);
      it != s.n_new[static_cast<std::size_t>(t)].end())
    nn_cur = it->second;
  if (auto it = s.n_old[static_cast<std::size_t>(t)].find(p);
      it != s.n_old[static_cast<std::size_t>(t)].end())
    no_cur = it->second;
  const long tot_new = no_new + nn_new;
  const long tot_cur = no_cur + nn_cur;
  const double lambda = s.pair_rate(t, p);

  double log_r = 0.0;
  if (t + 1 < s.T) {
    const long o_next = [&] {
      const auto& m = s.n_old[static_cast<std::size_t>(t + 1)];
      auto it = m.find(p);
      return it == m.end() ? 0L : it->second;
    }();
    if (tot_new < o_next) return kNegInf;  // infeasible for the next thinning
    const double pi_next = s.forget_prob(t + 1);
    log_r += binomial_logpmf(o_next, tot_new, pi_next) -
             binomial_logpmf(o_next, tot_cur, pi_next);
  }
  // The zero-old branch proposes from a zero-truncated law; its normalizer
  // enters the ratio whenever exactly one side of the move sits there.
  if (no_new == 0) log_r += std::log(-std::expm1(-lambda));
  if (no_cur == 0) log_r -= std::log(-std::expm1(-lambda));
  return log_r;
}

inline bool update_interaction_counts(McmcState& s, int t, PairKey p, Rng& rng,
                                      double ratio_power = 1.0) {
  require(s.obs_kind == ObservationKind::Binary,
          "update_interaction_counts: binary observations only");
  auto& nn = s.n_new[static_cast<std::size_t>(t)];
  auto& no = s.n_old[static_cast<std::size_t>(t)];
  const auto& zt = s.obs[static_cast<std::size_t>(t)];
  const bool edge = zt.count(p) && zt.at(p) == 1;

  long nn_cur = 0;
  if (auto it = nn.find(p); it != nn.end()) nn_cur = it->second;

  if (!edge) {
    bump_multiplicity(s, t, p, -nn_cur);
    set_pair(nn, p, 0);
    set_pair(no, p, 0);
    return true;
  }

  const long n_prev = s.n_total(t - 1, p);
  const double lambda = s.pair_rate(t, p);
  const long no_new = (t > 0) ? sample_binomial(rng, n_prev, s.forget_prob(t)) : 0;
  long nn_new;
  if (no_new == 0) {
    if (lambda <= 0.0) return false;  // edge cannot be explained here
    nn_new = sample_ztpoisson(rng, lambda);
  } else {
    nn_new = lambda > 0.0 ? sample_poisson(rng, lambda) : 0;
  }

  const double log_r = interaction_counts_log_ratio(s, t, p, no_new, nn_new);
  if (!mh_accept(rng, ratio_power * log_r)) return false;
  bump_multiplicity(s, t, p, nn_new - nn_cur);
  set_pair(nn, p, nn_new);
  set_pair(no, p, no_new);
  return true;
}

// Counts data with memory: only the thinning latents n_old move.
inline bool update_old_counts(McmcState& s, int t, PairKey p, Rng& rng) {
  require(s.obs_kind == ObservationKind::Counts && !s.no_memory,
          "update_old_counts: counts-with-memory mode only");
  require(t > 0, "update_old_counts: first slice has no past");
  auto& no = s.n_old[static_cast<std::size_t>(t)];
  long no_cur = 0;
  if (auto it = no.find(p); it != no.end()) no_cur = it->second;
  const long n_prev = s.n_total(t - 1, p);
  const long no_new = sample_binomial(rng, n_prev, s.forget_prob(t));
  if (no_new == no_cur) return true;
  double log_r = 0.0;
  if (t + 1 < s.T) {
    const long o_next = [&] {
      const auto& m = s.n_old[static_cast<std::size_t>(t + 1)];
      auto it = m.find(p);
      return it == m.end() ? 0L : it->second;
    }();
    long nn_here = 0;
    if (auto it = s.n_new[static_cast<std::size_t>(t)].find(p);
        it != s.n_new[static_cast<std::size_t>(t)].end())
      nn_here = it->second;
    if (nn_here + no_new < o_next) return false;
    const double pi_next = s.forget_prob(t + 1);
    log_r += binomial_logpmf(o_next, nn_here + no_new, pi_next) -
             binomial_logpmf(o_next, nn_here + no_cur, pi_next);
  }
  if (!mh_accept(rng, log_r)) return false;
  set_pair(no, p, no_new);
  return true;
}

// ---------------------------------------------------------------------------
// Steps 3 and 4: remainder count and remainder mass.
// ---------------------------------------------------------------------------

inline double root_count_log_ratio(const McmcState& s, int t, long c_new) {
  const long c_cur = s.c_star[static_cast<std::size_t>(t)];
  const double w_next = s.w_star[static_cast<std::size_t>(t + 1)];
  return static_cast<double>(c_new - c_cur) *
             std::log((s.hp.phi + s.hp.tau) * w_next) +
         std::lgamma(s.hp.alpha + static_cast<double>(c_cur)) -
         std::lgamma(s.hp.alpha + static_cast<double>(c_new));
}

inline bool update_root_count(McmcState& s, int t, Rng& rng) {
  require(s.count_slice_exists(t), "update_root_count: no count slice here");
  const long c_new =
      sample_poisson(rng, s.hp.phi * s.w_star[static_cast<std::size_t>(t)]);
  if (!mh_accept(rng, root_count_log_ratio(s, t, c_new))) return false;
  s.c_star[static_cast<std::size_t>(t)] = c_new;
  return true;
}

inline double root_weight_proposal_shape(const McmcState& s, int t) {
  return s.hp.alpha + static_cast<double>(s.root_count_cur(t)) +
         static_cast<double>(s.root_count_prev(t));
}

inline double root_weight_proposal_rate(const McmcState& s, int t, double at) {
  return s.rate_at(t) + 2.0 * s.sum_w[static_cast<std::size_t>(t)] + at;
}

// Proposal rate linearizes the squared-mass factor at the current state;
// everything else cancels, leaving a two-term log ratio.
inline double root_weight_log_ratio(const McmcState& s, int t, double w_new) {
  const double w_cur = s.w_star[static_cast<std::size_t>(t)];
  const double shape = root_weight_proposal_shape(s, t);
  return (w_cur * w_cur - w_new * w_new) +
         shape * (std::log(root_weight_proposal_rate(s, t, w_new)) -
                  std::log(root_weight_proposal_rate(s, t, w_cur)));
}

inline bool update_root_weight(McmcState& s, int t, Rng& rng, double ratio_power = 1.0) {
  double& w_ref = s.w_star[static_cast<std::size_t>(t)];
  // tiny shapes can underflow the gamma draw to an exact zero; the remainder
  // mass must stay strictly positive
  const double w_new = std::max(sample_gamma(rng, root_weight_proposal_shape(s, t),
                                             root_weight_proposal_rate(s, t, w_ref)),
                                1e-300);
  if (!mh_accept(rng, ratio_power * root_weight_log_ratio(s, t, w_new))) return false;
  w_ref = w_new;
  return true;
}

// ---------------------------------------------------------------------------
// Step 5: hyperparameters.
// ---------------------------------------------------------------------------

// Unnormalized log conditional of alpha given the per-time total masses:
// total chain transitions are gamma with shapes alpha + previous total count.
inline double alpha_log_target(const McmcState& s, double alpha_value,
                               const PriorConfig& prior) {
  if (alpha_value <= 0.0) return kNegInf;
  double lp = gamma_logpdf(alpha_value, prior.alpha.shape, prior.alpha.rate);
  for (int t = 0; t < s.T; ++t) {
    const double total =
        s.sum_w[static_cast<std::size_t>(t)] + s.w_star[static_cast<std::size_t>(t)];
    double c_prev_total = static_cast<double>(s.root_count_prev(t));
    for (int k = 0; k < s.K; ++k) c_prev_total += static_cast<double>(s.count_prev(t, k));
    const double rate = s.has_prev(t) ? s.hp.tau + s.hp.phi : s.hp.tau;
    lp += gamma_logpdf(total, alpha_value + c_prev_total, rate);
  }
  return lp;
}

inline double update_alpha(McmcState& s, const PriorConfig& prior, Rng& rng) {
  auto log_target_x = [&](double x) {  // x = log alpha, with the jacobian
    return alpha_log_target(s, std::exp(x), prior) + x;
  };
  double x = slice_sample(rng, std::log(s.hp.alpha), log_target_x);
  s.hp.alpha = std::exp(x);
  // A multiplicative random-walk step sharpens mixing on top of the slice move.
  const double prop = s.hp.alpha * std::exp(prior.rw_sigma * standard_normal(rng));
  const double log_r = alpha_log_target(s, prop, prior) -
                       alpha_log_target(s, s.hp.alpha, prior) +
                       std::log(prop) - std::log(s.hp.alpha);
  if (mh_accept(rng, log_r)) s.hp.alpha = prop;
  return s.hp.alpha;
}

// Transition-density likelihood shared by the phi and tau updates.
inline double chain_transition_loglik(const McmcState& s, double phi, double tau) {
  if (phi <= 0.0 || tau <= 0.0) return kNegInf;
  double lp = 0.0;
  for (int t = 0; t + 1 < s.T; ++t) {
    lp += root_weight_transition_logdensity(s.w_star[static_cast<std::size_t>(t + 1)],
                                            s.w_star[static_cast<std::size_t>(t)],
                                            s.hp.alpha, phi, tau);
    for (int k = 0; k < s.K; ++k) {
      const double w_cur = s.w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
      if (w_cur <= 0.0) continue;
      const double w_next = s.w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)];
      if (w_next > 0.0)
        lp += weight_transition_logdensity(w_next, w_cur, phi, tau);
      else
        lp += -phi * w_cur;  // atom at zero
    }
  }
  return lp;
}

inline bool update_phi(McmcState& s, const PriorConfig& prior, Rng& rng) {
  require(s.hp.phi > 0.0, "update_phi: phi must be positive to move");
  const double cur = s.hp.phi;
  const double prop = cur * std::exp(prior.rw_sigma * standard_normal(rng));
  const double log_r = gamma_logpdf(prop, prior.phi.shape, prior.phi.rate) -
                       gamma_logpdf(cur, prior.phi.shape, prior.phi.rate) +
                       chain_transition_loglik(s, prop, s.hp.tau) -
                       chain_transition_loglik(s, cur, s.hp.tau) +
                       std::log(prop) - std::log(cur);
  if (!mh_accept(rng, log_r)) return false;
  s.hp.phi = prop;
  return true;
}

inline bool update_tau(McmcState& s, const PriorConfig& prior, Rng& rng) {
  require(s.hp.tau > 0.0, "update_tau: tau must be positive to move");
  const double cur = s.hp.tau;
  const double prop = cur * std::exp(prior.rw_sigma * standard_normal(rng));
  const double log_r = gamma_logpdf(prop, prior.tau.shape, prior.tau.rate) -
                       gamma_logpdf(cur, prior.tau.shape, prior.tau.rate) +
                       chain_transition_loglik(s, s.hp.phi, prop) -
                       chain_transition_loglik(s, s.hp.phi, cur) +
                       std::log(prop) - std::log(cur);
  if (!mh_accept(rng, log_r)) return false;
  s.hp.tau = prop;
  return true;
}

inline double rho_loglik(const McmcState& s, double rho) {
  if (rho <= 0.0) return kNegInf;
  double lp = 0.0;
  for (int t = 1; t < s.T; ++t) {
    const double pi = std::exp(-rho * s.hp.delta_at(t));
    std::set<PairKey> support;
    for (const auto& [p, v] : s.n_new[static_cast<std::size_t>(t - 1)])
      if (v > 0) support.insert(p);
    for (const auto& [p, v] : s.n_old[static_cast<std::size_t>(t - 1)])
      if (v > 0) support.insert(p);
    for (const PairKey& p : support) {
      const long n_prev = s.n_total(t - 1, p);
      long o = 0;
      if (auto it = s.n_old[static_cast<std::size_t>(t)].find(p);
          it != s.n_old[static_cast<std::size_t>(t)].end())
        o = it->second;
      lp += binomial_logpmf(o, n_prev, pi);
    }
  }
  return lp;
}

inline bool update_rho(McmcState& s, const PriorConfig& prior, Rng& rng) {
  require(!s.no_death, "update_rho: disabled in no-death mode");
  require(s.hp.rho > 0.0, "update_rho: rho must be positive to move");
  const double cur = s.hp.rho;
  const double prop = cur * std::exp(prior.rw_sigma * standard_normal(rng));
  const double log_r = gamma_logpdf(prop, prior.rho.shape, prior.rho.rate) -
                       gamma_logpdf(cur, prior.rho.shape, prior.rho.rate) +
                       rho_loglik(s, prop) - rho_loglik(s, cur) +
                       std::log(prop) - std::log(cur);
  if (!mh_accept(rng, log_r)) return false;
  s.hp.rho = prop;
  return true;
}

}  // namespace dgnet
