// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "dgnet/mcmc_run.hpp"

namespace dgnet {

// Bounded-memory quantile tracker: exact running mean plus a deterministic
// reservoir for the quantiles.
class ReservoirSummary {
 public:
  explicit ReservoirSummary(std::size_t capacity = 1024, std::uint64_t seed = 9)
      : capacity_(capacity), rng_(make_rng(seed)) {}

  void push(double x) {
    ++n_;
    mean_ += (x - mean_) / static_cast<double>(n_);
    if (reservoir_.size() < capacity_) {
      reservoir_.push_back(x);
    } else {
      const std::uint64_t j = rng_() % n_;
      if (j < capacity_) reservoir_[static_cast<std::size_t>(j)] = x;
    }
  }

  long count() const { return static_cast<long>(n_); }
  double mean() const { return mean_; }

  double quantile(double q) const {
    if (reservoir_.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> v = reservoir_;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
  }

 private:
  std::size_t capacity_;
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  std::vector<double> reservoir_;
  Rng rng_;
};

struct NodeTimeKey {
  int t = 0;
  NodeId node = 0;
  auto operator<=>(const NodeTimeKey&) const = default;
};

struct TraceSummary {
  double mean = 0, sd = 0, median = 0, q05 = 0, q95 = 0;
  long n = 0;
};

inline TraceSummary summarize_trace(std::vector<double> x) {
  TraceSummary s;
  s.n = static_cast<long>(x.size());
  if (x.empty()) return s;
  double m = 0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double var = 0;
  for (double v : x) var += (v - m) * (v - m);
  var = x.size() > 1 ? var / static_cast<double>(x.size() - 1) : 0.0;
  std::sort(x.begin(), x.end());
  auto q = [&](double p) {
    const double pos = p * static_cast<double>(x.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, x.size() - 1);
    return x[lo] * (1.0 - (pos - static_cast<double>(lo))) +
           x[hi] * (pos - static_cast<double>(lo));
  };
  s.mean = m;
  s.sd = std::sqrt(var);
  s.median = q(0.5);
  s.q05 = q(0.05);
  s.q95 = q(0.95);
  return s;
}

// Streaming accumulation of per-node-time posterior summaries.
class PosteriorSummaries {
 public:
  void absorb(const SampleRecord& rec) {
    hyper_["alpha"].push_back(rec.alpha);
    hyper_["phi"].push_back(rec.phi);
    hyper_["tau"].push_back(rec.tau);
    hyper_["rho"].push_back(rec.rho);
    for (std::size_t t = 0; t < rec.weights.size(); ++t)
      for (const auto& [k, v] : rec.weights[t]) {
        const NodeTimeKey key{static_cast<int>(t), k};
        auto it = node_time_.find(key);
        if (it == node_time_.end())
          it = node_time_.emplace(key, ReservoirSummary()).first;
        it->second.push(v);
      }
    ++n_records_;
    last_accept_ = rec.accept_rates;
  }

  long n_records() const { return n_records_; }
  const std::map<NodeTimeKey, ReservoirSummary>& node_time() const { return node_time_; }
  const std::map<std::string, std::vector<double>>& hyper_traces() const { return hyper_; }
  const std::map<std::string, double>& last_accept() const { return last_accept_; }

 private:
  long n_records_ = 0;
  std::map<NodeTimeKey, ReservoirSummary> node_time_;
  std::map<std::string, std::vector<double>> hyper_;
  std::map<std::string, double> last_accept_;
};

}  // namespace dgnet
