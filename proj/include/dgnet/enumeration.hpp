// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dgnet/distributions.hpp"
#include "dgnet/types.hpp"

namespace dgnet {

// Brute-force oracles over truncated and discretized state spaces. The
// densities here are written out directly from the model factors so they
// share no code with the kernels they check.

namespace oracle {

inline double opois(long k, double mean) {
  if (k < 0 || mean < 0.0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(k) * std::log(mean) - mean -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

inline double ogamma(double x, double shape, double rate) {
  if (x <= 0.0 || shape <= 0.0) return 0.0;
  return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                  std::lgamma(shape));
}

inline double obinom(long k, long n, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(std::lgamma(static_cast<double>(n) + 1.0) -
                  std::lgamma(static_cast<double>(k) + 1.0) -
                  std::lgamma(static_cast<double>(n - k) + 1.0) +
                  static_cast<double>(k) * std::log(p) +
                  static_cast<double>(n - k) * std::log1p(-p));
}

}  // namespace oracle

inline double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  require(p.size() == q.size(), "tv_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

inline void normalize(std::vector<double>& p) {
  double s = 0.0;
  for (double v : p) s += v;
  require(s > 0.0, "normalize: zero mass");
  for (double& v : p) v /= s;
}

// ---------------------------------------------------------------------------
// Conditional of one latent count given its two adjacent weights.
// ---------------------------------------------------------------------------

inline std::vector<double> enumerate_count_conditional(double w_cur, double w_next,
                                                       double phi, double tau,
                                                       long cmax) {
  std::vector<double> p(static_cast<std::size_t>(cmax) + 1, 0.0);
  if (w_next > 0.0) {
    for (long cv = 1; cv <= cmax; ++cv)
      p[static_cast<std::size_t>(cv)] =
          oracle::opois(cv, phi * w_cur) *
          oracle::ogamma(w_next, static_cast<double>(cv), tau + phi);
  } else {
    // Two-point convention at a vanishing next weight.
    p[0] = 1.0;
    if (cmax >= 1) p[1] = phi * w_cur * (tau + phi);
  }
  normalize(p);
  return p;
}

// ---------------------------------------------------------------------------
// Conditional of the remainder count given adjacent remainder masses.
// ---------------------------------------------------------------------------

inline std::vector<double> enumerate_root_count_conditional(double w_cur, double w_next,
                                                            double alpha, double phi,
                                                            double tau, long cmax) {
  std::vector<double> p(static_cast<std::size_t>(cmax) + 1, 0.0);
  for (long cv = 0; cv <= cmax; ++cv)
    p[static_cast<std::size_t>(cv)] =
        oracle::opois(cv, phi * w_cur) *
        oracle::ogamma(w_next, alpha + static_cast<double>(cv), tau + phi);
  normalize(p);
  return p;
}

// ---------------------------------------------------------------------------
// Joint conditional of (c_tk, w_{t+1,k}) at a node with no interactions at
// t+1: an atom at (0, 0) plus, for c >= 1, a density over the next weight.
// `rest` is the remaining mass at t+1 and `c_fwd` the forward count (0 when
// the slice after t+1 carries no counts).
// ---------------------------------------------------------------------------

struct JointCountWeightTable {
  double p_dead = 0.0;                   // probability of (0, 0)
  std::vector<double> grid;              // cell edges, size n_cells+1
  std::vector<std::vector<double>> p;    // [c-1][cell]
  long cmax = 0;

  std::vector<double> flatten() const {
    std::vector<double> out;
    out.push_back(p_dead);
    for (const auto& row : p) out.insert(out.end(), row.begin(), row.end());
    return out;
  }
};

inline JointCountWeightTable enumerate_joint_count_weight(
    double w_cur, double rest, double phi, double tau, long c_fwd, bool next_coupled,
    long cmax, double w_hi, int n_cells) {
  require(n_cells >= 4 && cmax >= 1, "enumerate_joint_count_weight: grid too small");
  JointCountWeightTable tab;
  tab.cmax = cmax;
  tab.grid.resize(static_cast<std::size_t>(n_cells) + 1);
  for (int i = 0; i <= n_cells; ++i)
    tab.grid[static_cast<std::size_t>(i)] =
        w_hi * static_cast<double>(i) / static_cast<double>(n_cells);

  // Every entry carries the likelihood relative to exp(-rest^2), so the atom
  // at (0, 0) reduces to the bare count probability.
  tab.p_dead = (c_fwd == 0) ? oracle::opois(0, phi * w_cur) : 0.0;

  auto density = [&](long cv, double wv) {
    double f = oracle::opois(cv, phi * w_cur) *
               oracle::ogamma(wv, static_cast<double>(cv), phi + tau) *
               std::exp(-(wv + rest) * (wv + rest) + rest * rest);
    if (next_coupled) f *= oracle::opois(c_fwd, phi * wv);
    else if (c_fwd != 0) f = 0.0;
    return f;
  };
  tab.p.assign(static_cast<std::size_t>(cmax), std::vector<double>(static_cast<std::size_t>(n_cells), 0.0));
  for (long cv = 1; cv <= cmax; ++cv)
    for (int i = 0; i < n_cells; ++i) {
      const double a = tab.grid[static_cast<std::size_t>(i)];
      const double b = tab.grid[static_cast<std::size_t>(i) + 1];
      const double mid = 0.5 * (a + b);
      // Simpson in the cell
      const double cell = (b - a) / 6.0 *
                          (density(cv, a + 1e-12) + 4.0 * density(cv, mid) + density(cv, b));
      tab.p[static_cast<std::size_t>(cv - 1)][static_cast<std::size_t>(i)] = cell;
    }
  double total = tab.p_dead;
  for (const auto& row : tab.p)
    for (double v : row) total += v;
  require(total > 0.0, "enumerate_joint_count_weight: zero mass");
  tab.p_dead /= total;
  for (auto& row : tab.p)
    for (double& v : row) v /= total;
  return tab;
}

// ---------------------------------------------------------------------------
// Joint conditional of (n_old, n_new) at one pair and time, given the edge is
// present, the previous total, the pair rate, and optionally the next
// thinning outcome.
// ---------------------------------------------------------------------------

struct InteractionTable {
  long n_prev = 0;
  long nmax = 0;
  std::vector<std::vector<double>> p;  // [o][nn]

  std::vector<double> flatten() const {
    std::vector<double> out;
    for (const auto& row : p) out.insert(out.end(), row.begin(), row.end());
    return out;
  }
};

inline InteractionTable enumerate_interaction_pair(long n_prev, double pi_cur,
                                                   double lambda, long o_next,
                                                   double pi_next, bool has_next,
                                                   long nmax) {
  InteractionTable tab;
  tab.n_prev = n_prev;
  tab.nmax = nmax;
  tab.p.assign(static_cast<std::size_t>(n_prev) + 1,
               std::vector<double>(static_cast<std::size_t>(nmax) + 1, 0.0));
  for (long o = 0; o <= n_prev; ++o)
    for (long nn = 0; nn <= nmax; ++nn) {
      if (o + nn < 1) continue;  // the edge is present
      double f = oracle::obinom(o, n_prev, pi_cur) * oracle::opois(nn, lambda);
      if (has_next) f *= oracle::obinom(o_next, o + nn, pi_next);
      tab.p[static_cast<std::size_t>(o)][static_cast<std::size_t>(nn)] = f;
    }
  double total = 0.0;
  for (const auto& row : tab.p)
    for (double v : row) total += v;
  require(total > 0.0, "enumerate_interaction_pair: zero mass");
  for (auto& row : tab.p)
    for (double& v : row) v /= total;
  return tab;
}

// ---------------------------------------------------------------------------
// Exact (up to truncation and discretization) joint posterior of the one-node
// two-snapshot instance: weight grids for both snapshots, counts up to cmax,
// remainder masses clamped. The node's alive span is part of the state: born
// at the first snapshot (with or without surviving to the second) or, when it
// has no interactions at the first snapshot, born at the second. Used as
// ground truth for sweep-level checks and for validating the slice density.
// ---------------------------------------------------------------------------

struct TinyInstance {
  long m1 = 1, m2 = 0;                  // observed multiplicities
  double w1_star = 0.5, w2_star = 0.5;  // clamped remainder masses
  double alpha = 1.0, tau = 1.0, phi = 2.0;
  long cmax = 30;
  int n_cells = 60;
  double w_hi = 4.0;
  bool include_likelihood = true;
};

struct TinyPosterior {
  TinyInstance spec;
  std::vector<double> grid;  // cell edges
  // p[i1][c][i2] for c >= 1; p_dead[i1] covers (w1, c=0, w2=0);
  // p_late[i2] covers the branch born at the second snapshot.
  std::vector<std::vector<std::vector<double>>> p;
  std::vector<double> p_dead;
  std::vector<double> p_late;

  double total() const {
    double s = 0.0;
    for (double v : p_dead) s += v;
    for (double v : p_late) s += v;
    for (const auto& a : p)
      for (const auto& b : a)
        for (double v : b) s += v;
    return s;
  }

  double prob_born_late() const {
    double s = 0.0;
    for (double v : p_late) s += v;
    return s;
  }

  std::vector<double> marginal_count() const {
    std::vector<double> out(static_cast<std::size_t>(spec.cmax) + 1, 0.0);
    for (double v : p_dead) out[0] += v;
    for (double v : p_late) out[0] += v;
    for (const auto& a : p)
      for (std::size_t cv = 0; cv < a.size(); ++cv)
        for (double v : a[cv]) out[cv + 1] += v;
    return out;
  }
};

inline TinyPosterior enumerate_tiny_posterior(const TinyInstance& in) {
  require(in.m1 >= 1 || in.m2 >= 1, "enumerate_tiny_posterior: node must be observed");
  const double cells = static_cast<double>(in.n_cells);
  require(cells * static_cast<double>(in.cmax + 1) * cells <= 1e7,
          "enumerate_tiny_posterior: state space above 10^7 cells");
  TinyPosterior out;
  out.spec = in;
  out.grid.resize(static_cast<std::size_t>(in.n_cells) + 1);
  for (int i = 0; i <= in.n_cells; ++i)
    out.grid[static_cast<std::size_t>(i)] =
        in.w_hi * static_cast<double>(i) / static_cast<double>(in.n_cells);

  auto lik1 = [&](double w1) {  // squared-mass factor kept even at w1 = 0
    if (!in.include_likelihood) return 1.0;
    const double base = std::exp(-(w1 + in.w1_star) * (w1 + in.w1_star));
    return w1 == 0.0 ? base : std::pow(w1, static_cast<double>(in.m1)) * base;
  };
  auto lik2 = [&](double w2) {
    if (!in.include_likelihood) return w2 == 0.0 && in.m2 > 0 ? 0.0 : 1.0;
    if (w2 == 0.0) return in.m2 > 0 ? 0.0 : std::exp(-in.w2_star * in.w2_star);
    return std::pow(w2, static_cast<double>(in.m2)) *
           std::exp(-(w2 + in.w2_star) * (w2 + in.w2_star));
  };
  // Born at the first snapshot: fresh-atom factor w^-1 e^{-tau w}, then the
  // count coupling and the conditional transition.
  auto joint = [&](double w1, long cv, double w2) {
    double f = std::exp(-in.tau * w1) / w1;
    f *= oracle::opois(cv, in.phi * w1);
    if (cv == 0) {
      if (w2 != 0.0) return 0.0;
    } else {
      f *= oracle::ogamma(w2, static_cast<double>(cv), in.tau + in.phi);
    }
    return f * lik1(w1) * lik2(w2);
  };
  // Born at the second snapshot (no interactions at the first): fresh-atom
  // factor at rate tau + phi.
  auto joint_late = [&](double w2) {
    if (in.m1 > 0) return 0.0;
    const double f = std::exp(-(in.tau + in.phi) * w2) / w2;
    return f * lik1(0.0) * lik2(w2);
  };

  const std::size_t nc = static_cast<std::size_t>(in.n_cells);
  out.p_dead.assign(nc, 0.0);
  out.p_late.assign(nc, 0.0);
  out.p.assign(nc, std::vector<std::vector<double>>(
                       static_cast<std::size_t>(in.cmax),
                       std::vector<double>(nc, 0.0)));
  auto cell_value = [&](const std::function<double(double)>& f, std::size_t i) {
    const double a = out.grid[i];
    const double b = out.grid[i + 1];
    return (b - a) / 6.0 * (f(a + 1e-12) + 4.0 * f(0.5 * (a + b)) + f(b));
  };
  for (std::size_t i2 = 0; i2 < nc; ++i2) out.p_late[i2] = cell_value(joint_late, i2);
  for (std::size_t i1 = 0; i1 < nc; ++i1) {
    out.p_dead[i1] = cell_value([&](double w1) { return joint(w1, 0, 0.0); }, i1);
    for (long cv = 1; cv <= in.cmax; ++cv)
      for (std::size_t i2 = 0; i2 < nc; ++i2) {
        auto f = [&](double w1) {
          auto g = [&](double w2) { return joint(w1, cv, w2); };
          return cell_value(g, i2);
        };
        out.p[i1][static_cast<std::size_t>(cv - 1)][i2] = cell_value(f, i1);
      }
  }
  double total = out.total();
  require(total > 0.0, "enumerate_tiny_posterior: zero mass");
  for (double& v : out.p_dead) v /= total;
  for (double& v : out.p_late) v /= total;
  for (auto& a : out.p)
    for (auto& b : a)
      for (double& v : b) v /= total;
  return out;
}

}  // namespace dgnet
