// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgnet/distributions.hpp"

namespace dgnet {

using NodeId = int;

// Undirected pair key, normalized so i <= j.
struct PairKey {
  NodeId i = 0;
  NodeId j = 0;
  PairKey() = default;
  PairKey(NodeId a, NodeId b) : i(a <= b ? a : b), j(a <= b ? b : a) {}
  bool self_loop() const { return i == j; }
  auto operator<=>(const PairKey&) const = default;
};

using PairCounts = std::map<PairKey, long>;

struct HyperParams {
  double alpha = 1.0;  // overall size
  double tau = 1.0;    // rate/scale
  double phi = 0.0;    // temporal dependence
  double rho = 0.0;    // forgetting rate
  std::vector<double> delta;  // time gaps, length T-1; empty means all 1

  double delta_at(int t) const {  // gap between snapshots t-1 and t (1-based gap index t)
    if (delta.empty()) return 1.0;
    return delta.at(static_cast<std::size_t>(t) - 1);
  }

  double forget_prob(int t) const { return std::exp(-rho * delta_at(t)); }

  void validate() const {
    require(alpha > 0.0 && std::isfinite(alpha), "HyperParams: alpha must be > 0");
    require(tau > 0.0 && std::isfinite(tau), "HyperParams: tau must be > 0");
    require(phi >= 0.0 && std::isfinite(phi), "HyperParams: phi must be >= 0");
    require(rho >= 0.0 && std::isfinite(rho), "HyperParams: rho must be >= 0");
    for (double d : delta)
      require(d > 0.0 && std::isfinite(d), "HyperParams: every delta must be > 0");
  }
};

struct GammaPrior {
  double shape = 1.0;
  double rate = 1.0;
};

struct PriorConfig {
  GammaPrior alpha{1.0, 0.5};
  GammaPrior phi{1.0, 0.05};
  GammaPrior tau{1.0, 1.0};
  GammaPrior rho{1.0, 1.0};
  double rw_sigma = 0.3;  // scale of multiplicative random-walk proposals

  void validate() const {
    for (const GammaPrior* g : {&alpha, &phi, &tau, &rho}) {
      require(g->shape > 0.0 && g->rate > 0.0, "PriorConfig: shapes/rates must be > 0");
    }
    require(rw_sigma > 0.0, "PriorConfig: rw_sigma must be > 0");
  }
};

// Sparse per-time node weights plus the unobserved remainder mass w_t*.
struct WeightChain {
  int T = 0;
  std::vector<std::map<NodeId, double>> w;  // [t], absent key = weight zero
  std::vector<double> w_star;               // [t]

  double at(int t, NodeId k) const {
    const auto& m = w.at(static_cast<std::size_t>(t));
    auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
  }

  double tracked_sum(int t) const {
    double s = 0.0;
    for (const auto& [k, v] : w.at(static_cast<std::size_t>(t))) s += v;
    return s;
  }

  double total_mass(int t) const {
    return tracked_sum(t) + w_star.at(static_cast<std::size_t>(t));
  }

  void validate() const {
    require(static_cast<int>(w.size()) == T && static_cast<int>(w_star.size()) == T,
            "WeightChain: slice count mismatch");
    for (int t = 0; t < T; ++t) {
      for (const auto& [k, v] : w[static_cast<std::size_t>(t)])
        require(v > 0.0 && std::isfinite(v), "WeightChain: stored weights must be > 0");
      require(w_star[static_cast<std::size_t>(t)] >= 0.0, "WeightChain: w_star must be >= 0");
    }
  }
};

// Latent Poisson counts coupling consecutive weight slices. A chain over T
// snapshots has T-1 count slices: counts[t] couples weights t -> t+1.
struct CountChain {
  int T = 0;  // number of weight snapshots the chain spans
  std::vector<std::map<NodeId, long>> c;  // [t], t in [0, T-1)
  std::vector<long> c_star;               // [t], root counts (may be nonzero)

  long at(int t, NodeId k) const {
    const auto& m = c.at(static_cast<std::size_t>(t));
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
  }

  long tracked_sum(int t) const {
    long s = 0;
    for (const auto& [k, v] : c.at(static_cast<std::size_t>(t))) s += v;
    return s;
  }

  void validate() const {
    require(static_cast<int>(c.size()) == std::max(0, T - 1), "CountChain: slice count mismatch");
    require(c_star.size() == c.size(), "CountChain: root slice count mismatch");
    for (const auto& slice : c)
      for (const auto& [k, v] : slice) require(v >= 0, "CountChain: counts must be >= 0");
    for (long v : c_star) require(v >= 0, "CountChain: root counts must be >= 0");
  }
};

// Per-time sparse symmetric interaction counts, split into new interactions
// and remembered (thinned) past ones.
struct InteractionTensor {
  int T = 0;
  std::vector<PairCounts> n_new;  // [t]
  std::vector<PairCounts> n_old;  // [t]; n_old[0] is empty by construction

  long new_at(int t, PairKey p) const {
    const auto& m = n_new.at(static_cast<std::size_t>(t));
    auto it = m.find(p);
    return it == m.end() ? 0 : it->second;
  }
  long old_at(int t, PairKey p) const {
    const auto& m = n_old.at(static_cast<std::size_t>(t));
    auto it = m.find(p);
    return it == m.end() ? 0 : it->second;
  }
  long total_at(int t, PairKey p) const { return new_at(t, p) + old_at(t, p); }

  PairCounts totals(int t) const {
    PairCounts out = n_new.at(static_cast<std::size_t>(t));
    for (const auto& [p, v] : n_old.at(static_cast<std::size_t>(t))) out[p] += v;
    return out;
  }

  // Endpoint multiplicities m_ti over new interactions; sum_i m_ti = 2 d*_t.
  std::map<NodeId, long> multiplicities(int t) const {
    std::map<NodeId, long> m;
    for (const auto& [p, v] : n_new.at(static_cast<std::size_t>(t))) {
      m[p.i] += v;
      m[p.j] += v;  // a self pair contributes both endpoints to the same node
    }
    return m;
  }

  void validate() const {
    require(static_cast<int>(n_new.size()) == T && static_cast<int>(n_old.size()) == T,
            "InteractionTensor: slice count mismatch");
    if (T > 0) require(n_old[0].empty(), "InteractionTensor: n_old at the first time must be empty");
    for (int t = 0; t < T; ++t) {
      for (const auto& [p, v] : n_new[static_cast<std::size_t>(t)])
        require(v >= 0, "InteractionTensor: counts must be >= 0");
      for (const auto& [p, v] : n_old[static_cast<std::size_t>(t)]) {
        require(v >= 0, "InteractionTensor: counts must be >= 0");
        require(t > 0 && v <= total_at(t - 1, p),
                "InteractionTensor: n_old must be <= previous total (thinning support)");
      }
    }
  }
};

struct DynamicGraph {
  int T = 0;
  std::vector<std::set<PairKey>> edges;  // [t]

  long edge_count(int t) const {
    return static_cast<long>(edges.at(static_cast<std::size_t>(t)).size());
  }
  long node_count(int t) const {
    std::set<NodeId> nodes;
    for (const PairKey& p : edges.at(static_cast<std::size_t>(t))) {
      nodes.insert(p.i);
      nodes.insert(p.j);
    }
    return static_cast<long>(nodes.size());
  }

  static DynamicGraph from_interactions(const InteractionTensor& n) {
    DynamicGraph g;
    g.T = n.T;
    g.edges.resize(static_cast<std::size_t>(n.T));
    for (int t = 0; t < n.T; ++t)
      for (const auto& [p, v] : n.totals(t))
        if (v > 0) g.edges[static_cast<std::size_t>(t)].insert(p);
    return g;
  }
};

enum class ObservationKind { Counts, Binary };

// What a dataset provides: either the per-time new-interaction counts or the
// per-time binary adjacency.
struct ObservedNetwork {
  ObservationKind kind = ObservationKind::Counts;
  int T = 0;
  std::vector<PairCounts> data;  // counts, or 0/1 entries in Binary mode
  bool allow_self_loops = false;
  std::vector<double> delta;  // gaps between consecutive snapshots, length T-1

  std::set<NodeId> nodes() const {
    std::set<NodeId> out;
    for (const auto& slice : data)
      for (const auto& [p, v] : slice) {
        out.insert(p.i);
        out.insert(p.j);
      }
    return out;
  }

  void validate() const {
    require(static_cast<int>(data.size()) == T, "ObservedNetwork: slice count mismatch");
    for (const auto& slice : data)
      for (const auto& [p, v] : slice) {
        if (kind == ObservationKind::Binary)
          require(v == 0 || v == 1, "ObservedNetwork: binary entries must be 0/1");
        else
          require(v >= 0, "ObservedNetwork: counts must be >= 0");
        if (!allow_self_loops)
          require(!p.self_loop(), "ObservedNetwork: self loops present but not allowed");
      }
    if (!delta.empty())
      require(static_cast<int>(delta.size()) == T - 1, "ObservedNetwork: delta length mismatch");
  }
};

}  // namespace dgnet
