// Apache License, Version 2.0, refer to LICENSE.txt

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dgnet/birth_death.hpp"
#include "dgnet/diagnostics.hpp"
#include "dgnet/generative.hpp"
#include "dgnet/geweke.hpp"
#include "dgnet/io/config.hpp"
#include "dgnet/io/edge_list.hpp"
#include "dgnet/io/samples.hpp"
#include "dgnet/log.hpp"
#include "dgnet/sparsity.hpp"

namespace fs = std::filesystem;
using namespace dgnet;

namespace {

SampleRecord truth_record(const SimulationResult& sim, const HyperParams& hp) {
  SampleRecord rec;
  rec.iteration = 0;
  rec.alpha = hp.alpha;
  rec.phi = hp.phi;
  rec.tau = hp.tau;
  rec.rho = hp.rho;
  rec.weights = sim.weights.w;
  rec.w_star = sim.weights.w_star;
  rec.c_total.resize(sim.counts.c.size(), 0);
  for (std::size_t t = 0; t < sim.counts.c.size(); ++t)
    for (const auto& [k, v] : sim.counts.c[t]) rec.c_total[t] += v;
  rec.c_star = sim.counts.c_star;
  return rec;
}

// Weight paths file for the continuous-time process:
//   <node:token> <time:real> <value:real>
// Each line starts a new constant piece for that node.
std::vector<PiecewiseConstantPath> parse_weight_paths(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weights file " + path);
  std::map<std::string, std::vector<std::pair<double, double>>> raw;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string node;
    double t, v;
    if (!(ls >> node)) continue;
    if (!(ls >> t >> v))
      throw std::runtime_error("weights file: malformed line " + std::to_string(line_no));
    raw[node].emplace_back(t, v);
  }
  std::vector<PiecewiseConstantPath> paths;
  for (auto& [node, pieces] : raw) {
    std::sort(pieces.begin(), pieces.end());
    PiecewiseConstantPath p;
    p.times.clear();
    p.values.clear();
    if (pieces.empty() || pieces.front().first != 0.0) {
      p.times.push_back(0.0);
      p.values.push_back(0.0);
    }
    for (const auto& [t, v] : pieces) {
      p.times.push_back(t);
      p.values.push_back(v);
    }
    p.validate();
    paths.push_back(std::move(p));
  }
  if (paths.empty()) throw std::runtime_error("weights file has no paths");
  return paths;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::uint64_t seed, bool continuous, const std::string& weights_path) {
  const AppConfig cfg = parse_config(config_path);
  fs::create_directories(out_dir);
  if (continuous) {
    if (weights_path.empty())
      throw std::runtime_error("--continuous needs --weights <file>");
    require(cfg.hp.rho > 0.0, "continuous simulation needs rho > 0");
    auto paths = parse_weight_paths(weights_path);
    Rng rng = make_rng(seed);
    const BirthDeathLog log =
        simulate_birth_death(paths, cfg.hp.rho, cfg.horizon, rng, cfg.allow_self_loops);
    std::ofstream ev(out_dir + "/events.csv");
    ev.precision(17);
    ev << "time,i,j,event,count_after\n";
    for (const auto& e : log.events)
      ev << e.time << "," << e.pair.i << "," << e.pair.j << ","
         << (e.birth ? "birth" : "death") << "," << e.count_after << "\n";
    log_info("continuous simulation: " + std::to_string(log.events.size()) + " events");
    return 0;
  }

  Rng rng = make_rng(seed);
  const SimulationResult sim = simulate_network(cfg.hp, cfg.T, rng, cfg.allow_self_loops);

  ObservedNetwork counts_net;
  counts_net.kind = ObservationKind::Counts;
  counts_net.T = sim.interactions.T;
  counts_net.data = sim.interactions.n_new;
  counts_net.allow_self_loops = cfg.allow_self_loops;
  write_edge_list(out_dir + "/interactions.txt", counts_net);

  ObservedNetwork binary_net;
  binary_net.kind = ObservationKind::Binary;
  binary_net.T = sim.graph.T;
  binary_net.data.resize(static_cast<std::size_t>(sim.graph.T));
  for (int t = 0; t < sim.graph.T; ++t)
    for (const PairKey& p : sim.graph.edges[static_cast<std::size_t>(t)])
      binary_net.data[static_cast<std::size_t>(t)][p] = 1;
  binary_net.allow_self_loops = cfg.allow_self_loops;
  write_edge_list(out_dir + "/graph.txt", binary_net);

  SampleWriter truth(out_dir + "/truth.jsonl");
  truth.write(truth_record(sim, cfg.hp));
  long edges = 0;
  for (int t = 0; t < sim.graph.T; ++t) edges += sim.graph.edge_count(t);
  log_info("simulated " + std::to_string(cfg.T) + " snapshots, " +
           std::to_string(edges) + " edge slots total");
  return 0;
}

int cmd_fit(const std::string& data_path, const std::string& config_path,
            const std::string& out_dir, std::uint64_t seed, int burnin, int samples,
            int thin, int chains) {
  const AppConfig cfg = parse_config(config_path);
  EdgeListData data = parse_edge_list(data_path);
  if (data.net.T == 0) throw std::runtime_error("fit: dataset is empty");
  fs::create_directories(out_dir);
  write_id_map(out_dir + "/dataset.ids", data.ids);

  McmcOptions opt = cfg.mcmc;
  opt.burnin = burnin;
  opt.samples = samples;
  opt.thin = thin;

  std::vector<AcceptanceReport> reports(static_cast<std::size_t>(chains));
  std::vector<std::string> errors(static_cast<std::size_t>(chains));
  auto run_chain = [&](int chain) {
    try {
      McmcState state = init_state(data.net, cfg.hp, cfg.no_memory, cfg.no_death);
      Rng rng = make_stream(seed, static_cast<std::uint64_t>(chain));
      SampleWriter writer(out_dir + "/chain" + std::to_string(chain) + ".jsonl");
      reports[static_cast<std::size_t>(chain)] =
          run_mcmc(state, cfg.prior, opt, rng,
                   [&](const SampleRecord& rec) { writer.write(rec); });
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(chain)] = e.what();
    }
  };

  if (chains == 1) {
    run_chain(0);
  } else {
    std::vector<std::thread> threads;
    for (int cchain = 0; cchain < chains; ++cchain)
      threads.emplace_back(run_chain, cchain);
    for (auto& th : threads) th.join();
  }
  for (const auto& err : errors)
    if (!err.empty()) throw std::runtime_error("fit: chain failed: " + err);

  std::ofstream acc(out_dir + "/acceptance.csv");
  acc << "chain,kernel,attempts,accepts,rate\n";
  for (int chain = 0; chain < chains; ++chain) {
    const auto& rep = reports[static_cast<std::size_t>(chain)];
    for (const auto& [name, st] : rep.kernels)
      acc << chain << "," << name << "," << st.attempts << "," << st.accepts << ","
          << st.rate() << "\n";
    acc << chain << ",hmc_divergences," << rep.hmc_divergences << ",,\n";
  }
  log_info("fit complete: " + std::to_string(chains) + " chain(s), " +
           std::to_string(samples) + " samples each");
  return 0;
}

int cmd_geweke(const std::string& config_path, int n_samples, std::uint64_t seed,
               const std::string& out_path) {
  const AppConfig cfg = parse_config(config_path);
  GewekeConfig gcfg;
  gcfg.hp = cfg.hp;
  gcfg.n_samples = n_samples;
  gcfg.sweeps_per_sample = cfg.geweke_sweeps;
  gcfg.seed = seed;
  const GewekeReport report = geweke_test(gcfg);

  std::ostringstream table;
  table << "statistic,mc_mean,sc_mean,z_mean,mc_sq,sc_sq,z_sq\n";
  table.precision(10);
  for (const auto& r : report.rows)
    table << r.name << "," << r.mc_mean << "," << r.sc_mean << "," << r.z_mean << ","
          << r.mc_sq << "," << r.sc_sq << "," << r.z_sq << "\n";
  std::cout << table.str();
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << table.str();
  }
  const double worst = report.max_abs_z();
  log_info("geweke max |z| = " + std::to_string(worst));
  return worst < cfg.geweke_z_threshold ? 0 : 1;
}

int cmd_diagnose(const std::string& samples_path, const std::string& out_dir) {
  PosteriorSummaries acc;
  const long n = read_samples(samples_path, [&](SampleRecord&& rec) { acc.absorb(rec); });
  if (n == 0) throw std::runtime_error("diagnose: no samples in " + samples_path);

  std::ostream* node_out = &std::cout;
  std::ostream* trace_out = &std::cout;
  std::ofstream node_f, trace_f;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    node_f.open(out_dir + "/weights_summary.csv");
    trace_f.open(out_dir + "/trace_summary.csv");
    node_out = &node_f;
    trace_out = &trace_f;
  }
  node_out->precision(10);
  trace_out->precision(10);

  *node_out << "t,node,mean,q05,q95,n\n";
  for (const auto& [key, summary] : acc.node_time())
    *node_out << key.t + 1 << "," << key.node << "," << summary.mean() << ","
              << summary.quantile(0.05) << "," << summary.quantile(0.95) << ","
              << summary.count() << "\n";

  *trace_out << "parameter,mean,sd,median,q05,q95,n\n";
  for (const auto& [name, trace] : acc.hyper_traces()) {
    const TraceSummary s = summarize_trace(trace);
    *trace_out << name << "," << s.mean << "," << s.sd << "," << s.median << ","
               << s.q05 << "," << s.q95 << "," << s.n << "\n";
  }
  *trace_out << "# acceptance rates (last record)\n";
  for (const auto& [name, rate] : acc.last_accept())
    *trace_out << name << "," << rate << ",,,,,\n";
  log_info("diagnose: " + std::to_string(n) + " samples summarized");
  return 0;
}

int cmd_sparsity(const std::string& config_path, const std::string& alphas_csv,
                 int replicates, int T, std::uint64_t seed, bool dense_control) {
  const AppConfig cfg = parse_config(config_path);
  std::vector<double> alphas;
  std::stringstream ss(alphas_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) alphas.push_back(std::stod(tok));
  require(!alphas.empty(), "sparsity: need at least one alpha");

  const auto rows = dense_control
                        ? sparsity_dense_control(alphas, 50, cfg.hp, T, replicates, seed)
                        : sparsity_experiment(alphas, cfg.hp, T, replicates, seed);
  std::cout.precision(10);
  std::cout << "alpha,median_ratio,replicates,skipped\n";
  for (const auto& r : rows)
    std::cout << r.alpha << "," << r.median_ratio << "," << r.ratios.size() << ","
              << r.skipped << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-varying gamma process model for sparse dynamic networks"};
  app.require_subcommand(1);

  std::string config_path, out_dir, data_path, samples_path, weights_path, report_path;
  std::uint64_t seed = 1;
  int burnin = 500, samples = 1000, thin = 1, chains = 1;
  int geweke_n = 10000;
  int sparsity_reps = 20, sparsity_T = 3;
  std::string alphas_csv = "2,8,32,128";
  bool continuous = false, dense_control = false;

  auto* sim = app.add_subcommand("simulate", "forward simulation of the network model");
  sim->add_option("--config", config_path, "key=value configuration file")->required();
  sim->add_option("--out", out_dir, "output directory")->required();
  sim->add_option("--seed", seed, "random seed");
  sim->add_flag("--continuous", continuous, "continuous-time birth-death process");
  sim->add_option("--weights", weights_path, "weight paths file (continuous mode)");

  auto* fit = app.add_subcommand("fit", "posterior inference on a dataset");
  fit->add_option("--data", data_path, "edge list file")->required();
  fit->add_option("--config", config_path, "key=value configuration file")->required();
  fit->add_option("--out", out_dir, "output directory")->required();
  fit->add_option("--seed", seed, "random seed");
  fit->add_option("--burnin", burnin, "burn-in sweeps");
  fit->add_option("--samples", samples, "posterior samples to keep");
  fit->add_option("--thin", thin, "sweeps per kept sample");
  fit->add_option("--chains", chains, "independent chains run concurrently");

  auto* gw = app.add_subcommand("geweke", "joint-distribution sampler test");
  gw->add_option("--config", config_path, "key=value configuration file")->required();
  gw->add_option("--n", geweke_n, "number of samples per side");
  gw->add_option("--seed", seed, "random seed");
  gw->add_option("--out", report_path, "also write the report to this file");

  auto* diag = app.add_subcommand("diagnose", "summarize a posterior sample stream");
  diag->add_option("--samples", samples_path, "sample stream (jsonl)")->required();
  diag->add_option("--out", out_dir, "output directory (default: stdout)");

  auto* sp = app.add_subcommand("sparsity", "edge density across an alpha ladder");
  sp->add_option("--config", config_path, "key=value configuration file")->required();
  sp->add_option("--alphas", alphas_csv, "comma separated increasing alphas");
  sp->add_option("--replicates", sparsity_reps, "replicates per alpha");
  sp->add_option("--T", sparsity_T, "snapshots per replicate");
  sp->add_option("--seed", seed, "random seed");
  sp->add_flag("--dense-control", dense_control, "constant-weight control instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(config_path, out_dir, seed, continuous, weights_path);
    if (fit->parsed())
      return cmd_fit(data_path, config_path, out_dir, seed, burnin, samples, thin, chains);
    if (gw->parsed()) return cmd_geweke(config_path, geweke_n, seed, report_path);
    if (diag->parsed()) return cmd_diagnose(samples_path, out_dir);
    if (sp->parsed())
      return cmd_sparsity(config_path, alphas_csv, sparsity_reps, sparsity_T, seed,
                          dense_control);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
