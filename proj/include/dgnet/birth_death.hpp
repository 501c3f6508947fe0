// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "dgnet/distributions.hpp"
#include "dgnet/types.hpp"

namespace dgnet {

// Nonnegative piecewise-constant function on [0, inf); times must start at 0
// and increase, values[k] holds on [times[k], times[k+1]).
struct PiecewiseConstantPath {
  std::vector<double> times{0.0};
  std::vector<double> values{0.0};

  void validate() const {
    require(!times.empty() && times.size() == values.size(),
            "PiecewiseConstantPath: times/values mismatch");
    require(times.front() == 0.0, "PiecewiseConstantPath: must start at time 0");
    for (std::size_t k = 1; k < times.size(); ++k)
      require(times[k] > times[k - 1], "PiecewiseConstantPath: times must increase");
    for (double v : values)
      require(v >= 0.0 && std::isfinite(v), "PiecewiseConstantPath: values must be >= 0");
  }

  double value_at(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    return values[static_cast<std::size_t>(it - times.begin()) - 1];
  }
};

struct InteractionEvent {
  double time = 0.0;
  PairKey pair;
  bool birth = true;
  long count_after = 0;  // n_ij immediately after the event
};

struct BirthDeathLog {
  double horizon = 0.0;
  std::vector<InteractionEvent> events;  // time sorted

  // Time average of n_ij over [0, horizon].
  double time_average(PairKey p) const {
    double integral = 0.0;
    double last_t = 0.0;
    long n = 0;
    for (const auto& e : events) {
      if (!(e.pair == p)) continue;
      integral += static_cast<double>(n) * (e.time - last_t);
      last_t = e.time;
      n += e.birth ? 1 : -1;
    }
    integral += static_cast<double>(n) * (horizon - last_t);
    return integral / horizon;
  }

  std::vector<InteractionEvent> pair_events(PairKey p) const {
    std::vector<InteractionEvent> out;
    for (const auto& e : events)
      if (e.pair == p) out.push_back(e);
    return out;
  }
};

// Exact event-driven simulation of the continuous-time interaction process:
// births from a Poisson process with rate 2 w_i(t) w_j(t) (w_i(t)^2 on the
// diagonal), lifetimes Exponential(rho). Weight paths are inputs.
inline BirthDeathLog simulate_birth_death(const std::vector<PiecewiseConstantPath>& paths,
                                          double rho, double horizon, Rng& rng,
                                          bool allow_self_loops = false) {
  require(rho > 0.0 && std::isfinite(rho), "simulate_birth_death: rho must be > 0");
  require(horizon > 0.0 && std::isfinite(horizon), "simulate_birth_death: horizon must be > 0");
  for (const auto& p : paths) p.validate();

  BirthDeathLog log;
  log.horizon = horizon;
  const int n_nodes = static_cast<int>(paths.size());
  std::exponential_distribution<double> lifetime(rho);

  for (int i = 0; i < n_nodes; ++i) {
    for (int j = i; j < n_nodes; ++j) {
      if (i == j && !allow_self_loops) continue;
      const PairKey pair(i, j);
      // Merge the two breakpoint grids.
      std::vector<double> grid;
      for (double t : paths[static_cast<std::size_t>(i)].times)
        if (t < horizon) grid.push_back(t);
      for (double t : paths[static_cast<std::size_t>(j)].times)
        if (t < horizon) grid.push_back(t);
      grid.push_back(horizon);
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

      for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
        const double a = grid[g];
        const double b = grid[g + 1];
        const double wi = paths[static_cast<std::size_t>(i)].value_at(a);
        const double wj = paths[static_cast<std::size_t>(j)].value_at(a);
        const double rate = (i == j) ? wi * wj : 2.0 * wi * wj;
        if (rate <= 0.0) continue;
        const long births = sample_poisson(rng, rate * (b - a));
        for (long k = 0; k < births; ++k) {
          const double tb = a + uniform01(rng) * (b - a);
          log.events.push_back({tb, pair, true, 0});
          const double td = tb + lifetime(rng);
          if (td < horizon) log.events.push_back({td, pair, false, 0});
        }
      }
    }
  }

  std::sort(log.events.begin(), log.events.end(), [](const auto& a, const auto& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.pair != b.pair) return a.pair < b.pair;
    return a.birth && !b.birth;
  });
  std::map<PairKey, long> counts;
  for (auto& e : log.events) {
    long& n = counts[e.pair];
    n += e.birth ? 1 : -1;
    e.count_after = n;
  }
  return log;
}

}  // namespace dgnet
