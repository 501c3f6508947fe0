// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dgnet/distributions.hpp"
#include "dgnet/types.hpp"

namespace dgnet {

// Sequential Chinese restaurant seating; returns block sizes summing to n.
inline std::vector<long> sample_crp(long n, double concentration, Rng& rng) {
  require(n >= 0, "sample_crp: n must be >= 0");
  require(concentration > 0.0, "sample_crp: concentration must be > 0");
  std::vector<long> blocks;
  for (long j = 0; j < n; ++j) {
    const double u = uniform01(rng) * (concentration + static_cast<double>(j));
    if (u < concentration) {
      blocks.push_back(1);
      continue;
    }
    double acc = concentration;
    bool seated = false;
    for (auto& b : blocks) {
      acc += static_cast<double>(b);
      if (u < acc) {
        ++b;
        seated = true;
        break;
      }
    }
    if (!seated) ++blocks.back();  // guard against rounding at the far edge
  }
  return blocks;
}

struct ChainSample {
  WeightChain weights;
  CountChain counts;
};

// Exact draw of the latent count chain and one weight snapshot per time.
// The counts are simulated forward through intermediate weight draws; the
// returned weights are then redrawn per time given the adjacent count slices,
// which is exact because snapshots are conditionally independent given the
// counts.
inline ChainSample sample_count_weight_chain(const HyperParams& hp, int T, Rng& rng) {
  hp.validate();
  require(T >= 1, "sample_count_weight_chain: T must be >= 1");
  CountChain cc;
  cc.T = T;
  cc.c.resize(static_cast<std::size_t>(std::max(0, T - 1)));
  cc.c_star.assign(static_cast<std::size_t>(std::max(0, T - 1)), 0);
  NodeId next_id = 0;

  for (int t = 0; t + 1 < T; ++t) {
    std::map<NodeId, double> w_step;
    if (t > 0)
      for (const auto& [k, cv] : cc.c[static_cast<std::size_t>(t - 1)])
        w_step[k] = sample_gamma(rng, static_cast<double>(cv), hp.tau + hp.phi);
    const double root_rate = (t == 0) ? hp.tau : hp.tau + hp.phi;
    const double w_root = sample_gamma(rng, hp.alpha, root_rate);

    auto& slice = cc.c[static_cast<std::size_t>(t)];
    for (const auto& [k, wv] : w_step) {
      const long cv = sample_poisson(rng, hp.phi * wv);
      if (cv > 0) slice[k] = cv;
    }
    const long c_new = sample_poisson(rng, hp.phi * w_root);
    for (long b : sample_crp(c_new, hp.alpha, rng)) slice[next_id++] = b;
  }

  WeightChain wc;
  wc.T = T;
  wc.w.resize(static_cast<std::size_t>(T));
  wc.w_star.resize(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const bool has_prev = t > 0;
    const bool has_next = t + 1 < T;
    const double rate =
        hp.tau + hp.phi * (static_cast<double>(has_prev) + static_cast<double>(has_next));
    std::map<NodeId, long> shapes;
    if (has_prev)
      for (const auto& [k, v] : cc.c[static_cast<std::size_t>(t - 1)]) shapes[k] += v;
    if (has_next)
      for (const auto& [k, v] : cc.c[static_cast<std::size_t>(t)]) shapes[k] += v;
    for (const auto& [k, s] : shapes)
      wc.w[static_cast<std::size_t>(t)][k] =
          sample_gamma(rng, static_cast<double>(s), rate);
    wc.w_star[static_cast<std::size_t>(t)] = sample_gamma(rng, hp.alpha, rate);
  }
  return {std::move(wc), std::move(cc)};
}

// ---------------------------------------------------------------------------
// Urn draw of the new interactions at one time slice given the adjacent
// counts, with the weight measure integrated out. Endpoint n+1 picks a fresh
// node with weight alpha, a previously drawn endpoint with weight 1 per draw,
// or a prior atom with weight c_ti + c_{t-1,i}, out of alpha + c* + n.
// ---------------------------------------------------------------------------

struct UrnDraw {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  double total_mass = 0.0;  // the sampled slice mass driving d*_t
  NodeId next_fresh_id = 0;
};

inline UrnDraw sample_interactions_urn(const std::map<NodeId, long>& prior_counts,
                                       const HyperParams& hp, Rng& rng,
                                       bool allow_self_loops = false,
                                       NodeId first_fresh_id = -1) {
  hp.validate();
  long c_star_sum = 0;
  for (const auto& [k, v] : prior_counts) {
    require(v >= 0, "sample_interactions_urn: counts must be >= 0");
    c_star_sum += v;
  }
  if (first_fresh_id < 0) {
    first_fresh_id = 0;
    for (const auto& [k, v] : prior_counts) first_fresh_id = std::max(first_fresh_id, k + 1);
  }

  UrnDraw out;
  out.next_fresh_id = first_fresh_id;
  out.total_mass = sample_gamma(
      rng, hp.alpha + static_cast<double>(c_star_sum), hp.tau + 2.0 * hp.phi);
  const long d_star = sample_poisson(rng, out.total_mass * out.total_mass);

  std::map<NodeId, long> seen;  // reinforcement weights
  long n_drawn = 0;
  auto draw_endpoint = [&]() -> NodeId {
    const double total = hp.alpha + static_cast<double>(c_star_sum + n_drawn);
    double u = uniform01(rng) * total;
    if (u < hp.alpha) {
      const NodeId id = out.next_fresh_id++;
      ++seen[id];
      ++n_drawn;
      return id;
    }
    u -= hp.alpha;
    for (const auto& [k, v] : prior_counts) {
      const double wgt = static_cast<double>(v) +
                         static_cast<double>(seen.count(k) ? seen.at(k) : 0);
      if (u < wgt) {
        ++seen[k];
        ++n_drawn;
        return k;
      }
      u -= wgt;
    }
    for (const auto& [k, v] : seen) {
      if (prior_counts.count(k)) continue;  // already included above
      if (u < static_cast<double>(v)) {
        ++seen[k];
        ++n_drawn;
        return k;
      }
      u -= static_cast<double>(v);
    }
    // rounding fallback at the far edge of the cumulative walk
    NodeId id = seen.empty() ? out.next_fresh_id++ : seen.rbegin()->first;
    ++seen[id];
    ++n_drawn;
    return id;
  };
  auto undo_endpoint = [&](NodeId id) {
    auto it = seen.find(id);
    if (--(it->second) == 0) seen.erase(it);
    --n_drawn;
  };

  for (long k = 0; k < d_star; ++k) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000000)
        throw std::runtime_error("sample_interactions_urn: cannot avoid self pairs");
      const NodeId a = draw_endpoint();
      const NodeId b = draw_endpoint();
      if (a != b || allow_self_loops) {
        out.pairs.emplace_back(a, b);
        break;
      }
      undo_endpoint(b);
      undo_endpoint(a);
    }
  }
  return out;
}

// Binomial thinning of the previous interaction totals.
inline PairCounts step_forgetting(const PairCounts& n_prev, double rho, double delta,
                                  Rng& rng) {
  require(rho >= 0.0 && delta > 0.0, "step_forgetting: need rho >= 0, delta > 0");
  const double pi = std::exp(-rho * delta);
  PairCounts out;
  for (const auto& [p, v] : n_prev) {
    require(v >= 0, "step_forgetting: counts must be >= 0");
    const long kept = sample_binomial(rng, v, pi);
    if (kept > 0) out[p] = kept;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full joint draw of chains, interactions, and graph snapshots.
// ---------------------------------------------------------------------------

struct SimulationResult {
  WeightChain weights;
  CountChain counts;
  InteractionTensor interactions;
  DynamicGraph graph;
};

inline SimulationResult simulate_network(const HyperParams& hp, int T, Rng& rng,
                                         bool allow_self_loops = false) {
  hp.validate();
  require(T >= 1, "simulate_network: T must be >= 1");
  SimulationResult out;
  ChainSample chains = sample_count_weight_chain(hp, T, rng);
  out.weights = std::move(chains.weights);
  out.counts = std::move(chains.counts);
  out.interactions.T = T;
  out.interactions.n_new.resize(static_cast<std::size_t>(T));
  out.interactions.n_old.resize(static_cast<std::size_t>(T));

  NodeId next_id = 0;
  for (int t = 0; t < T; ++t)
    for (const auto& [k, v] : out.weights.w[static_cast<std::size_t>(t)])
      next_id = std::max(next_id, k + 1);

  for (int t = 0; t < T; ++t) {
    auto& wt = out.weights.w[static_cast<std::size_t>(t)];
    // Cumulative weights over the tracked atoms for endpoint lookups.
    std::vector<NodeId> ids;
    std::vector<double> cum;
    double s = 0.0;
    for (const auto& [k, v] : wt) {
      s += v;
      ids.push_back(k);
      cum.push_back(s);
    }
    const double root_mass = out.weights.w_star[static_cast<std::size_t>(t)];
    const double w_tot = s + root_mass;

    // Lazily revealed remainder atoms: stick-breaking of the normalized
    // remainder, independent of its total mass for a gamma process.
    struct Stick {
      NodeId id;
      double weight;
      long uses = 0;
    };
    std::vector<Stick> sticks;
    double remainder = root_mass;

    auto draw_endpoint = [&]() -> NodeId {
      double u = uniform01(rng) * w_tot;
      if (u < s && !ids.empty()) {
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        const std::size_t idx = static_cast<std::size_t>(it - cum.begin());
        return ids[std::min(idx, ids.size() - 1)];
      }
      u -= s;
      for (auto& st : sticks) {
        if (u < st.weight) {
          ++st.uses;
          return st.id;
        }
        u -= st.weight;
      }
      const double v = sample_beta(rng, 1.0, hp.alpha);
      Stick st{next_id++, v * remainder, 1};
      remainder -= st.weight;
      sticks.push_back(st);
      return st.id;
    };
    auto undo_endpoint = [&](NodeId id) {
      for (auto& st : sticks)
        if (st.id == id) {
          --st.uses;
          return;
        }
    };

    const long d_star = sample_poisson(rng, w_tot * w_tot);
    auto& nn = out.interactions.n_new[static_cast<std::size_t>(t)];
    for (long k = 0; k < d_star; ++k) {
      for (int attempt = 0;; ++attempt) {
        if (attempt > 1000000)
          throw std::runtime_error("simulate_network: cannot avoid self pairs");
        const NodeId a = draw_endpoint();
        const NodeId b = draw_endpoint();
        if (a != b || allow_self_loops) {
          ++nn[PairKey(a, b)];
          break;
        }
        undo_endpoint(b);
        undo_endpoint(a);
      }
    }

    // Promote remainder atoms that ended up in the data; unused reveals stay
    // inside the remainder mass.
    double promoted = 0.0;
    for (const auto& st : sticks)
      if (st.uses > 0) {
        wt[st.id] = st.weight;
        promoted += st.weight;
      }
    out.weights.w_star[static_cast<std::size_t>(t)] = root_mass - promoted;

    if (t > 0)
      out.interactions.n_old[static_cast<std::size_t>(t)] =
          step_forgetting(out.interactions.totals(t - 1), hp.rho, hp.delta_at(t), rng);
  }

  out.graph = DynamicGraph::from_interactions(out.interactions);
  return out;
}

// Fold every node that never appears in the new-interaction data into the
// remainder, giving the truth in the same parameterization inference uses.
inline ChainSample collapse_to_observed(const SimulationResult& sim) {
  std::set<NodeId> observed;
  for (int t = 0; t < sim.interactions.T; ++t)
    for (const auto& [p, v] : sim.interactions.n_new[static_cast<std::size_t>(t)])
      if (v > 0) {
        observed.insert(p.i);
        observed.insert(p.j);
      }
  ChainSample out;
  out.weights.T = sim.weights.T;
  out.weights.w.resize(sim.weights.w.size());
  out.weights.w_star = sim.weights.w_star;
  for (std::size_t t = 0; t < sim.weights.w.size(); ++t)
    for (const auto& [k, v] : sim.weights.w[t]) {
      if (observed.count(k))
        out.weights.w[t][k] = v;
      else
        out.weights.w_star[t] += v;
    }
  out.counts.T = sim.counts.T;
  out.counts.c.resize(sim.counts.c.size());
  out.counts.c_star = sim.counts.c_star;
  for (std::size_t t = 0; t < sim.counts.c.size(); ++t)
    for (const auto& [k, v] : sim.counts.c[t]) {
      if (observed.count(k))
        out.counts.c[t][k] = v;
      else
        out.counts.c_star[t] += v;
    }
  return out;
}

}  // namespace dgnet
