// Apache License, Version 2.0, refer to LICENSE.txt

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dgnet/io/config.hpp"
#include "dgnet/io/edge_list.hpp"
#include "dgnet/io/samples.hpp"

using namespace dgnet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("dgnet_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

}  // namespace

TEST_CASE("counts edge list parses symmetrically") {
  TempDir dir;
  const auto p = dir.file("counts.txt");
  write_file(p, "# demo\n1 a b 2\n1 b c 1\n2 a b 1\n");
  const auto data = parse_edge_list(p);
  REQUIRE(data.net.kind == ObservationKind::Counts);
  REQUIRE(data.net.T == 2);
  REQUIRE(data.net.delta == std::vector<double>{1.0});
  const NodeId a = data.ids.at("a"), b = data.ids.at("b"), c = data.ids.at("c");
  REQUIRE(data.net.data[0].at(PairKey(a, b)) == 2);
  REQUIRE(data.net.data[0].at(PairKey(b, a)) == 2);  // same normalized key
  REQUIRE(data.net.data[0].at(PairKey(b, c)) == 1);
  REQUIRE(data.net.data[1].at(PairKey(a, b)) == 1);
}

TEST_CASE("timestamp gaps become deltas") {
  TempDir dir;
  const auto p = dir.file("gaps.txt");
  write_file(p, "1 a b 1\n4 a b 2\n6 b c 1\n");
  const auto data = parse_edge_list(p);
  REQUIRE(data.net.T == 3);
  REQUIRE(data.net.delta == std::vector<double>{3.0, 2.0});
}

TEST_CASE("binary duplicates collapse to one edge") {
  TempDir dir;
  const auto p = dir.file("bin.txt");
  write_file(p, "1 a b\n1 b a\n1 a c\n");
  const auto data = parse_edge_list(p);
  REQUIRE(data.net.kind == ObservationKind::Binary);
  REQUIRE(data.net.data[0].size() == 2);
}

TEST_CASE("empty file gives an empty network") {
  TempDir dir;
  const auto p = dir.file("empty.txt");
  write_file(p, "# nothing here\n");
  const auto data = parse_edge_list(p);
  REQUIRE(data.net.T == 0);
  HyperParams hp{1.0, 1.0, 2.0, 0.1, {}};
  REQUIRE_THROWS(init_state(data.net, hp));
}

TEST_CASE("malformed lines are reported with their number") {
  TempDir dir;
  const auto p = dir.file("bad.txt");
  write_file(p, "1 a b 1\n1 a\n");
  try {
    parse_edge_list(p);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    REQUIRE(std::string(e.what()).find(":2") != std::string::npos);
  }
  const auto q = dir.file("neg.txt");
  write_file(q, "1 a b -3\n");
  REQUIRE_THROWS(parse_edge_list(q));
  const auto r = dir.file("mixed.txt");
  write_file(r, "1 a b 1\n1 b c\n");
  REQUIRE_THROWS(parse_edge_list(r));
}

TEST_CASE("self loops flip the loop flag") {
  TempDir dir;
  const auto p = dir.file("loops.txt");
  write_file(p, "1 a a 2\n1 a b 1\n");
  const auto data = parse_edge_list(p);
  REQUIRE(data.net.allow_self_loops);
}

TEST_CASE("parse, serialize, parse is the identity") {
  TempDir dir;
  const auto p = dir.file("orig.txt");
  // first-encountered pair uses the later node tokens on purpose
  write_file(p, "1 d c 2\n1 a b 1\n3 b d 4\n");
  const auto first = parse_edge_list(p);
  const auto q = dir.file("rt.txt");
  write_edge_list(q, first.net);
  const auto second = parse_edge_list(q);
  REQUIRE(first.net.T == second.net.T);
  REQUIRE(first.net.kind == second.net.kind);
  REQUIRE(first.net.data == second.net.data);
  REQUIRE(first.net.delta == second.net.delta);
}

TEST_CASE("sample records round trip") {
  TempDir dir;
  SampleRecord rec;
  rec.iteration = 7;
  rec.alpha = 3.25;
  rec.phi = 19.5;
  rec.tau = 1.0;
  rec.rho = 0.125;
  rec.weights.resize(2);
  rec.weights[0][0] = 0.5;
  rec.weights[0][3] = 1.25;
  rec.weights[1][3] = 0.0625;
  rec.w_star = {0.5, 0.75};
  rec.c_total = {4};
  rec.c_star = {2};
  rec.accept_rates["hmc_weights"] = 0.65;

  const auto p = dir.file("samples.jsonl");
  {
    SampleWriter w(p);
    w.write(rec);
    w.write(rec);
  }
  std::vector<SampleRecord> got;
  REQUIRE(read_samples(p, [&](SampleRecord&& r) { got.push_back(std::move(r)); }) == 2);
  REQUIRE(got.size() == 2);
  const auto& r = got[0];
  REQUIRE(r.iteration == rec.iteration);
  REQUIRE(r.alpha == rec.alpha);
  REQUIRE(r.phi == rec.phi);
  REQUIRE(r.tau == rec.tau);
  REQUIRE(r.rho == rec.rho);
  REQUIRE(r.weights == rec.weights);
  REQUIRE(r.w_star == rec.w_star);
  REQUIRE(r.c_total == rec.c_total);
  REQUIRE(r.c_star == rec.c_star);
  REQUIRE(r.accept_rates == rec.accept_rates);
}

TEST_CASE("partial trailing line reports its byte offset") {
  TempDir dir;
  const auto p = dir.file("broken.jsonl");
  SampleRecord rec;
  rec.weights.resize(1);
  rec.w_star = {1.0};
  const std::string line = sample_to_json(rec).dump();
  {
    std::ofstream f(p, std::ios::binary);
    f << line << "\n";
    f << line.substr(0, line.size() / 2);  // no trailing newline
  }
  try {
    read_samples(p, [](SampleRecord&&) {});
    FAIL("expected a partial-line error");
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    REQUIRE(what.find("byte offset " + std::to_string(line.size() + 1)) !=
            std::string::npos);
  }
}

TEST_CASE("sample stream parses in a single pass at scale") {
  TempDir dir;
  const auto p = dir.file("big.jsonl");
  {
    SampleWriter w(p);
    SampleRecord rec;
    rec.weights.resize(50);
    rec.w_star.assign(50, 0.5);
    rec.c_total.assign(49, 3);
    rec.c_star.assign(49, 1);
    for (int i = 0; i < 10000; ++i) {
      rec.iteration = i;
      for (int t = 0; t < 50; ++t) {
        rec.weights[static_cast<std::size_t>(t)].clear();
        for (int k = 0; k < 5; ++k)
          rec.weights[static_cast<std::size_t>(t)][(i + k * 17) % 100] = 0.25 + k;
      }
      w.write(rec);
    }
  }
  long count = 0;
  double checksum = 0.0;
  read_samples(p, [&](SampleRecord&& r) {
    ++count;
    checksum += r.w_star[0];
  });
  REQUIRE(count == 10000);
  REQUIRE(checksum == Catch::Approx(5000.0));
}

TEST_CASE("config parsing") {
  TempDir dir;
  const auto p = dir.file("min.cfg");
  write_file(p, "alpha=3 tau=1 phi=20 rho=0.1\n");
  const auto cfg = parse_config(p);
  REQUIRE(cfg.hp.alpha == 3.0);
  REQUIRE(cfg.hp.phi == 20.0);
  REQUIRE(cfg.mcmc.hmc.leapfrog_steps == 10);  // default

  const auto bad = dir.file("bad.cfg");
  write_file(bad, "alpha=3 rho=-1\n");
  REQUIRE_THROWS(parse_config(bad));

  const auto flags = dir.file("flags.cfg");
  write_file(flags, "no-memory=true\nallow-self-loops=1\n");
  const auto fcfg = parse_config(flags);
  REQUIRE(fcfg.no_memory);
  REQUIRE(fcfg.allow_self_loops);

  const auto unknown = dir.file("unk.cfg");
  write_file(unknown, "alpha=3 gamma=7\n");
  try {
    parse_config(unknown);
    FAIL("expected unknown-key error");
  } catch (const std::runtime_error& e) {
    REQUIRE(std::string(e.what()).find("gamma") != std::string::npos);
  }

  const auto mistyped = dir.file("typ.cfg");
  write_file(mistyped, "T=banana\n");
  try {
    parse_config(mistyped);
    FAIL("expected type error");
  } catch (const std::runtime_error& e) {
    REQUIRE(std::string(e.what()).find("'T'") != std::string::npos);
  }
}
