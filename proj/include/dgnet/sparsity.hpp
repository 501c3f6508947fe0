// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dgnet/generative.hpp"

namespace dgnet {

struct SparsityRow {
  double alpha = 0.0;
  std::vector<double> ratios;  // edge count / node count^2 per replicate
  double median_ratio = std::numeric_limits<double>::quiet_NaN();
  int skipped = 0;  // replicates with an empty final snapshot
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Edge/node^2 ratio of the final snapshot across a ladder of alpha values.
inline std::vector<SparsityRow> sparsity_experiment(const std::vector<double>& alphas,
                                                    const HyperParams& base, int T,
                                                    int replicates, std::uint64_t seed) {
  require(!alphas.empty() && replicates >= 1 && T >= 1, "sparsity_experiment: bad inputs");
  for (std::size_t i = 1; i < alphas.size(); ++i)
    require(alphas[i] > alphas[i - 1], "sparsity_experiment: alphas must increase");
  std::vector<SparsityRow> rows;
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    SparsityRow row;
    row.alpha = alphas[ai];
    HyperParams hp = base;
    hp.alpha = alphas[ai];
    for (int r = 0; r < replicates; ++r) {
      Rng rng = make_stream(seed, ai * 1000 + static_cast<std::uint64_t>(r));
      const SimulationResult sim = simulate_network(hp, T, rng);
      const long ne = sim.graph.edge_count(T - 1);
      const long nn = sim.graph.node_count(T - 1);
      if (nn == 0) {
        ++row.skipped;
        continue;
      }
      row.ratios.push_back(static_cast<double>(ne) /
                           (static_cast<double>(nn) * static_cast<double>(nn)));
    }
    row.median_ratio = median_of(row.ratios);
    rows.push_back(row);
  }
  return rows;
}

// Dense control: constant unit weights on a fixed node set, same interaction
// and forgetting mechanics. The alpha column is a label only, so the ratio
// has no reason to fall along the ladder.
inline std::vector<SparsityRow> sparsity_dense_control(const std::vector<double>& alphas,
                                                       int n_nodes, const HyperParams& base,
                                                       int T, int replicates,
                                                       std::uint64_t seed) {
  require(n_nodes >= 2 && replicates >= 1 && T >= 1, "sparsity_dense_control: bad inputs");
  std::vector<SparsityRow> rows;
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    SparsityRow row;
    row.alpha = alphas[ai];
    for (int r = 0; r < replicates; ++r) {
      Rng rng = make_stream(seed ^ 0xdeadbeefULL, ai * 1000 + static_cast<std::uint64_t>(r));
      InteractionTensor n;
      n.T = T;
      n.n_new.resize(static_cast<std::size_t>(T));
      n.n_old.resize(static_cast<std::size_t>(T));
      for (int t = 0; t < T; ++t) {
        for (int i = 0; i < n_nodes; ++i)
          for (int j = i + 1; j < n_nodes; ++j) {
            const long v = sample_poisson(rng, 2.0);
            if (v > 0) n.n_new[static_cast<std::size_t>(t)][PairKey(i, j)] = v;
          }
        if (t > 0)
          n.n_old[static_cast<std::size_t>(t)] =
              step_forgetting(n.totals(t - 1), base.rho, base.delta_at(t), rng);
      }
      const DynamicGraph g = DynamicGraph::from_interactions(n);
      const long ne = g.edge_count(T - 1);
      const long nn = g.node_count(T - 1);
      if (nn == 0) {
        ++row.skipped;
        continue;
      }
      row.ratios.push_back(static_cast<double>(ne) /
                           (static_cast<double>(nn) * static_cast<double>(nn)));
    }
    row.median_ratio = median_of(row.ratios);
    rows.push_back(row);
  }
  return rows;
}

inline bool strictly_decreasing_medians(const std::vector<SparsityRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (std::isnan(rows[i].median_ratio) || std::isnan(rows[i - 1].median_ratio))
      return false;
    if (!(rows[i].median_ratio < rows[i - 1].median_ratio)) return false;
  }
  return true;
}

}  // namespace dgnet
