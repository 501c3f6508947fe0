// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dgnet/mcmc_run.hpp"

namespace dgnet {

// Line-delimited JSON: one self-describing sample per line. Weights are
// sparse (absent node-time = zero); numbers keep full precision.

inline nlohmann::json sample_to_json(const SampleRecord& rec) {
  nlohmann::json j;
  j["iteration"] = rec.iteration;
  j["alpha"] = rec.alpha;
  j["phi"] = rec.phi;
  j["tau"] = rec.tau;
  j["rho"] = rec.rho;
  j["w_star"] = rec.w_star;
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& slice : rec.weights) {
    nlohmann::json w = nlohmann::json::object();
    for (const auto& [k, v] : slice) w[std::to_string(k)] = v;
    weights.push_back(std::move(w));
  }
  j["weights"] = std::move(weights);
  j["c_total"] = rec.c_total;
  j["c_star"] = rec.c_star;
  j["accept"] = rec.accept_rates;
  return j;
}

inline SampleRecord sample_from_json(const nlohmann::json& j) {
  SampleRecord rec;
  rec.iteration = j.at("iteration").get<long>();
  rec.alpha = j.at("alpha").get<double>();
  rec.phi = j.at("phi").get<double>();
  rec.tau = j.at("tau").get<double>();
  rec.rho = j.at("rho").get<double>();
  rec.w_star = j.at("w_star").get<std::vector<double>>();
  for (const auto& slice : j.at("weights")) {
    std::map<NodeId, double> w;
    for (auto it = slice.begin(); it != slice.end(); ++it)
      w[std::stoi(it.key())] = it.value().get<double>();
    rec.weights.push_back(std::move(w));
  }
  rec.c_total = j.at("c_total").get<std::vector<long>>();
  rec.c_star = j.at("c_star").get<std::vector<long>>();
  for (auto it = j.at("accept").begin(); it != j.at("accept").end(); ++it)
    rec.accept_rates[it.key()] = it.value().get<double>();
  return rec;
}

class SampleWriter {
 public:
  explicit SampleWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("SampleWriter: cannot open " + path);
    out_.precision(17);
  }
  void write(const SampleRecord& rec) {
    out_ << sample_to_json(rec).dump() << "\n";
    if (!out_) throw std::runtime_error("SampleWriter: write failed");
  }
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

// Streams records one line at a time; a truncated trailing line is reported
// with the byte offset where the bad record starts.
inline long read_samples(const std::string& path,
                         const std::function<void(SampleRecord&&)>& sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_samples: cannot open " + path);
  std::string line;
  long count = 0;
  std::streamoff offset = 0;
  while (true) {
    const std::streamoff line_start = offset;
    if (!std::getline(in, line)) break;
    offset += static_cast<std::streamoff>(line.size());
    const bool had_newline = !in.eof();
    if (had_newline) offset += 1;
    if (line.empty()) continue;
    if (!had_newline)
      throw std::runtime_error("read_samples: partial trailing line at byte offset " +
                               std::to_string(line_start) + " in " + path);
    try {
      sink(sample_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception&) {
      throw std::runtime_error("read_samples: bad record at byte offset " +
                               std::to_string(line_start) + " in " + path);
    }
    ++count;
  }
  return count;
}

}  // namespace dgnet
