// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "dgnet/mcmc_run.hpp"

namespace dgnet {

// Flat key=value configuration: whitespace-separated `key=value` tokens,
// '#' comments. Unknown keys are rejected; omitted keys take the defaults
// documented in the README.
struct AppConfig {
  HyperParams hp{3.0, 1.0, 20.0, 0.1, {}};
  PriorConfig prior;
  McmcOptions mcmc;
  int T = 50;                 // horizon for forward simulation
  double horizon = 100.0;     // horizon for the continuous-time process
  bool no_memory = false;
  bool no_death = false;
  bool allow_self_loops = false;
  double geweke_z_threshold = 4.0;
  int geweke_sweeps = 5;
};

inline AppConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0)
        throw std::runtime_error("parse_config: expected key=value, got '" + tok + "'");
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }

  AppConfig cfg;
  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto as_double = [&](const std::string& key, double& dst) {
    const std::string v = take(key);
    if (v.empty()) return;
    try {
      std::size_t pos = 0;
      dst = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    } catch (...) {
      throw std::runtime_error("parse_config: key '" + key + "' needs a number");
    }
  };
  auto as_int = [&](const std::string& key, int& dst) {
    const std::string v = take(key);
    if (v.empty()) return;
    try {
      std::size_t pos = 0;
      dst = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    } catch (...) {
      throw std::runtime_error("parse_config: key '" + key + "' needs an integer");
    }
  };
  auto as_bool = [&](const std::string& key, bool& dst) {
    const std::string v = take(key);
    if (v.empty()) return;
    if (v == "true" || v == "1")
      dst = true;
    else if (v == "false" || v == "0")
      dst = false;
    else
      throw std::runtime_error("parse_config: key '" + key + "' needs true/false");
  };

  as_double("alpha", cfg.hp.alpha);
  as_double("tau", cfg.hp.tau);
  as_double("phi", cfg.hp.phi);
  as_double("rho", cfg.hp.rho);
  as_int("T", cfg.T);
  as_double("horizon", cfg.horizon);
  as_double("a_alpha", cfg.prior.alpha.shape);
  as_double("b_alpha", cfg.prior.alpha.rate);
  as_double("a_phi", cfg.prior.phi.shape);
  as_double("b_phi", cfg.prior.phi.rate);
  as_double("a_tau", cfg.prior.tau.shape);
  as_double("b_tau", cfg.prior.tau.rate);
  as_double("a_rho", cfg.prior.rho.shape);
  as_double("b_rho", cfg.prior.rho.rate);
  as_double("rw_sigma", cfg.prior.rw_sigma);
  as_double("hmc_eps", cfg.mcmc.hmc.step_size);
  as_int("hmc_leapfrog", cfg.mcmc.hmc.leapfrog_steps);
  as_bool("hmc_adapt", cfg.mcmc.adapt_step_size);
  as_double("target_accept", cfg.mcmc.target_accept);
  as_bool("update-alpha", cfg.mcmc.update_alpha);
  as_bool("update-phi", cfg.mcmc.update_phi);
  as_bool("update-tau", cfg.mcmc.update_tau);
  as_bool("update-rho", cfg.mcmc.update_rho);
  as_bool("no-memory", cfg.no_memory);
  as_bool("no-death", cfg.no_death);
  as_bool("allow-self-loops", cfg.allow_self_loops);
  as_double("geweke_z_threshold", cfg.geweke_z_threshold);
  as_int("geweke_sweeps", cfg.geweke_sweeps);

  if (!kv.empty())
    throw std::runtime_error("parse_config: unknown key '" + kv.begin()->first + "'");
  cfg.hp.validate();
  cfg.prior.validate();
  cfg.mcmc.hmc.validate();
  require(cfg.T >= 1, "parse_config: T must be >= 1");
  return cfg;
}

}  // namespace dgnet
