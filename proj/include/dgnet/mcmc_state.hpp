// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgnet/distributions.hpp"
#include "dgnet/types.hpp"

namespace dgnet {

// Mutable sampler state over a fixed tracked-node universe 0..K-1.
// Weights are dense per time with 0 meaning the node carries no mass there;
// each node is alive on one contiguous interval [b_k, d_k) covering all of
// its interactions, with counts >= 1 exactly on the couplings interior to
// the interval. Count slice t couples weights t -> t+1, so a chain over T
// snapshots has T-1 count slices. An optional clamped count slice c0 in
// front of t = 0 pins alive intervals to start at zero and makes the first
// snapshot behave like an interior one (used by the correctness harness);
// production inference leaves it empty.
struct McmcState {
  int T = 0;
  int K = 0;
  HyperParams hp;
  ObservationKind obs_kind = ObservationKind::Counts;
  bool no_memory = false;  // counts data with n_old clamped to zero
  bool no_death = false;   // binary data with full carryover (pi = 1)

  std::vector<std::vector<double>> w;  // [T][K]
  std::vector<double> w_star;          // [T]
  std::vector<std::vector<long>> c;    // [T-1][K]
  std::vector<long> c_star;            // [T-1]
  std::vector<long> c0;                // clamped, empty unless seeded
  long c0_star = 0;

  std::vector<PairCounts> n_new;  // [T]
  std::vector<PairCounts> n_old;  // [T]
  std::vector<PairCounts> obs;    // clamped data: z (Binary) or n_new (Counts)

  // Derived caches, refreshed each sweep.
  std::vector<std::vector<long>> mult;  // [T][K] endpoint multiplicities
  std::vector<double> sum_w;            // [T] tracked weight sums

  bool has_c0() const { return !c0.empty(); }
  bool has_prev(int t) const { return t > 0 || has_c0(); }
  bool has_next(int t) const { return t + 1 < T; }
  bool count_slice_exists(int t) const { return t >= 0 && t + 1 < T; }

  long count_prev(int t, int k) const {
    if (t > 0) return c[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(k)];
    return has_c0() ? c0[static_cast<std::size_t>(k)] : 0;
  }
  long count_cur(int t, int k) const {
    return count_slice_exists(t) ? c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] : 0;
  }
  long root_count_prev(int t) const {
    if (t > 0) return c_star[static_cast<std::size_t>(t - 1)];
    return has_c0() ? c0_star : 0;
  }
  long root_count_cur(int t) const {
    return count_slice_exists(t) ? c_star[static_cast<std::size_t>(t)] : 0;
  }
  double rate_at(int t) const {
    return hp.tau + hp.phi * (static_cast<double>(has_prev(t)) +
                              static_cast<double>(has_next(t)));
  }
  bool alive(int t, int k) const {
    return w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] > 0.0;
  }
  double pair_rate(int t, PairKey p) const {
    const auto& wt = w[static_cast<std::size_t>(t)];
    const double wi = wt[static_cast<std::size_t>(p.i)];
    const double wj = wt[static_cast<std::size_t>(p.j)];
    return p.self_loop() ? wi * wj : 2.0 * wi * wj;
  }
  long n_total(int t, PairKey p) const {
    if (t < 0) return 0;
    const auto& nn = n_new[static_cast<std::size_t>(t)];
    const auto& no = n_old[static_cast<std::size_t>(t)];
    long v = 0;
    if (auto it = nn.find(p); it != nn.end()) v += it->second;
    if (auto it = no.find(p); it != no.end()) v += it->second;
    return v;
  }
  double forget_prob(int t) const {  // survival prob into snapshot t
    return no_death ? 1.0 : std::exp(-hp.rho * hp.delta_at(t));
  }

  void refresh_caches() {
    sum_w.assign(static_cast<std::size_t>(T), 0.0);
    mult.assign(static_cast<std::size_t>(T), std::vector<long>(static_cast<std::size_t>(K), 0));
    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < K; ++k)
        sum_w[static_cast<std::size_t>(t)] +=
            w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
      for (const auto& [p, v] : n_new[static_cast<std::size_t>(t)]) {
        mult[static_cast<std::size_t>(t)][static_cast<std::size_t>(p.i)] += v;
        mult[static_cast<std::size_t>(t)][static_cast<std::size_t>(p.j)] += v;
      }
    }
  }

  bool born_at(int t, int k) const {
    if (!alive(t, k)) return false;
    if (t == 0) return !(has_c0() && c0[static_cast<std::size_t>(k)] > 0);
    return !alive(t - 1, k);
  }

  // Structural invariants; throws with a description on violation.
  void check_invariants(double tol = 1e-9) const {
    for (int k = 0; k < K; ++k) {
      // one contiguous alive interval per node
      int transitions = 0;
      for (int t = 1; t < T; ++t)
        if (alive(t, k) != alive(t - 1, k)) ++transitions;
      if (transitions > 2 || (transitions == 2 && alive(T - 1, k)))
        throw std::runtime_error("state: alive slices must form one interval");
      if (has_c0() && c0[static_cast<std::size_t>(k)] > 0)
        require(alive(0, k), "state: clamped initial count needs the node alive");
    }
    for (int t = 0; t < T; ++t) {
      double s = 0.0;
      for (int k = 0; k < K; ++k) {
        const double wv = w[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
        require(wv >= 0.0 && std::isfinite(wv), "state: weights must be finite and >= 0");
        s += wv;
        if (mult[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] > 0)
          require(wv > 0.0, "state: node with interactions must carry weight");
        if (count_slice_exists(t)) {
          const long cv = c[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
          require(cv >= 0, "state: counts must be >= 0");
          const bool both = wv > 0.0 &&
                            w[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)] > 0.0;
          if (both)
            require(cv > 0, "state: interior coupling needs a positive count");
          else
            require(cv == 0, "state: counts live only on interior couplings");
        }
      }
      require(w_star[static_cast<std::size_t>(t)] > 0.0, "state: w_star must be > 0");
      if (std::abs(s - sum_w[static_cast<std::size_t>(t)]) >
          tol * std::max(1.0, std::abs(s)))
        throw std::runtime_error("state: cached weight sum out of sync");
      for (const auto& [p, v] : n_old[static_cast<std::size_t>(t)]) {
        require(v >= 0, "state: n_old must be >= 0");
        require(t > 0 && v <= n_total(t - 1, p), "state: n_old must be <= previous total");
      }
      if (obs_kind == ObservationKind::Binary) {
        const auto& zt = obs[static_cast<std::size_t>(t)];
        std::set<PairKey> with_counts;
        for (const auto& [p, v] : n_new[static_cast<std::size_t>(t)])
          if (v > 0) with_counts.insert(p);
        for (const auto& [p, v] : n_old[static_cast<std::size_t>(t)])
          if (v > 0) with_counts.insert(p);
        for (const auto& p : with_counts)
          require(zt.count(p) && zt.at(p) == 1, "state: interaction on a non-edge");
        for (const auto& [p, z] : zt)
          if (z == 1)
            require(with_counts.count(p) == 1, "state: observed edge without interactions");
      }
    }
  }
};

inline void set_pair(PairCounts& m, PairKey p, long v) {
  if (v == 0)
    m.erase(p);
  else
    m[p] = v;
}

// Adjust the multiplicity cache after changing n_new at one pair.
inline void bump_multiplicity(McmcState& s, int t, PairKey p, long delta) {
  if (delta == 0) return;
  s.mult[static_cast<std::size_t>(t)][static_cast<std::size_t>(p.i)] += delta;
  s.mult[static_cast<std::size_t>(t)][static_cast<std::size_t>(p.j)] += delta;
}

}  // namespace dgnet
