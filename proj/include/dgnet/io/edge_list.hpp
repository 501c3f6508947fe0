// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dgnet/log.hpp"
#include "dgnet/types.hpp"

namespace dgnet {

// Timestamped edge list, whitespace separated with '#' comments:
//   <t:int> <src:token> <dst:token> [<count:int>]
// A count column on every line means the dataset observes interaction counts;
// no count column anywhere means binary snapshots. Node tokens are remapped
// to dense integer ids (the map is kept for writing back).
struct EdgeListData {
  ObservedNetwork net;
  std::map<std::string, NodeId> ids;
  std::vector<long> timestamps;  // sorted distinct raw timestamps
};

inline EdgeListData parse_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_edge_list: cannot open " + path);

  struct RawLine {
    long t;
    std::string a, b;
    long count;
  };
  std::vector<RawLine> lines;
  bool has_counts = false, decided = false;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (tok.size() != 3 && tok.size() != 4)
      throw std::runtime_error("parse_edge_list: malformed line at " + where);
    RawLine r;
    try {
      r.t = std::stol(tok[0]);
    } catch (...) {
      throw std::runtime_error("parse_edge_list: bad timestamp at " + where);
    }
    r.a = tok[1];
    r.b = tok[2];
    r.count = 1;
    const bool line_counts = tok.size() == 4;
    if (line_counts) {
      try {
        r.count = std::stol(tok[3]);
      } catch (...) {
        throw std::runtime_error("parse_edge_list: bad count at " + where);
      }
      if (r.count < 0)
        throw std::runtime_error("parse_edge_list: negative count at " + where);
    }
    if (!decided) {
      has_counts = line_counts;
      decided = true;
    } else if (line_counts != has_counts) {
      throw std::runtime_error("parse_edge_list: mixed count/no-count lines at " + where);
    }
    lines.push_back(std::move(r));
  }

  EdgeListData out;
  out.net.kind = has_counts ? ObservationKind::Counts : ObservationKind::Binary;
  if (lines.empty()) {
    out.net.T = 0;
    return out;
  }

  for (const auto& r : lines) out.timestamps.push_back(r.t);
  std::sort(out.timestamps.begin(), out.timestamps.end());
  out.timestamps.erase(std::unique(out.timestamps.begin(), out.timestamps.end()),
                       out.timestamps.end());
  std::map<long, int> t_index;
  for (std::size_t i = 0; i < out.timestamps.size(); ++i)
    t_index[out.timestamps[i]] = static_cast<int>(i);

  out.net.T = static_cast<int>(out.timestamps.size());
  out.net.data.resize(static_cast<std::size_t>(out.net.T));
  for (std::size_t i = 1; i < out.timestamps.size(); ++i)
    out.net.delta.push_back(static_cast<double>(out.timestamps[i] - out.timestamps[i - 1]));

  // Dense ids in sorted token order: stable across reparses of written files.
  for (const auto& r : lines) {
    out.ids.emplace(r.a, 0);
    out.ids.emplace(r.b, 0);
  }
  {
    NodeId next = 0;
    for (auto& [tok, id] : out.ids) id = next++;
  }

  long dup_warned = 0;
  for (const auto& r : lines) {
    const int t = t_index.at(r.t);
    const PairKey p(out.ids.at(r.a), out.ids.at(r.b));
    if (p.self_loop()) out.net.allow_self_loops = true;
    auto& slice = out.net.data[static_cast<std::size_t>(t)];
    if (has_counts) {
      if (r.count > 0) slice[p] += r.count;
    } else {
      if (slice.count(p) && ++dup_warned <= 5)
        log_warn("duplicate edge line for a timestamp; keeping a single edge");
      slice[p] = 1;
    }
  }

  out.net.validate();
  return out;
}

inline void write_id_map(const std::string& path, const std::map<std::string, NodeId>& ids) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("write_id_map: cannot open " + path);
  std::vector<std::pair<NodeId, std::string>> rows;
  for (const auto& [tok, id] : ids) rows.emplace_back(id, tok);
  std::sort(rows.begin(), rows.end());
  for (const auto& [id, tok] : rows) outf << tok << " " << id << "\n";
}

// Writes snapshots in the same format the parser reads. Counts mode emits the
// per-pair new-interaction counts; binary mode one line per present edge.
// Node tokens are zero-padded so their sorted order matches the ids, keeping
// parse(write(net)) == net.
inline void write_edge_list(const std::string& path, const ObservedNetwork& net) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("write_edge_list: cannot open " + path);
  NodeId max_id = 0;
  for (const auto& slice : net.data)
    for (const auto& [p, v] : slice) max_id = std::max(max_id, p.j);
  int width = 1;
  for (NodeId v = max_id; v >= 10; v /= 10) ++width;
  auto token = [&](NodeId id) {
    std::string digits = std::to_string(id);
    return "n" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') +
           digits;
  };
  std::vector<long> stamps(static_cast<std::size_t>(net.T), 1);
  for (int t = 1; t < net.T; ++t)
    stamps[static_cast<std::size_t>(t)] =
        stamps[static_cast<std::size_t>(t - 1)] +
        (net.delta.empty() ? 1L
                           : std::lround(net.delta[static_cast<std::size_t>(t - 1)]));
  outf << "# t src dst" << (net.kind == ObservationKind::Counts ? " count" : "") << "\n";
  for (int t = 0; t < net.T; ++t)
    for (const auto& [p, v] : net.data[static_cast<std::size_t>(t)]) {
      if (v <= 0) continue;
      outf << stamps[static_cast<std::size_t>(t)] << " " << token(p.i) << " "
           << token(p.j);
      if (net.kind == ObservationKind::Counts) outf << " " << v;
      outf << "\n";
    }
}

}  // namespace dgnet
