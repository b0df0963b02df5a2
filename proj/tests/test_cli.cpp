#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "misosud/cli.hpp"
#include "misosud/config.hpp"
#include "oracles.hpp"

using namespace misosud;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

// Scratch directory removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("misosud_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& n) const { return (path / n).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::vector<double> cells(const std::string& line) {
  std::vector<double> v;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) v.push_back(std::stod(c));
  return v;
}

}  // namespace

TEST_CASE("region2 writes angles, rates and beams") {
  const Run r = run({"region2", "--config", fixture("fig3.json"), "--grid", "3"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 10);
  CHECK(ls[0] == "psi1,psi2,R1,R2,g1_1_re,g1_1_im,g1_2_re,g1_2_im,g2_1_re,g2_1_im,g2_2_re,g2_2_im");
  const auto first = cells(ls[1]);
  CHECK(first[0] == 0.0);
  CHECK(first[2] == doctest::Approx(std::log2(5.5)).epsilon(1e-12));
  // Last row: both users at the end of their range transmit along their own channel.
  const auto last = cells(ls[9]);
  CHECK(last[0] == doctest::Approx(oracle_ref::kPi / 6).epsilon(1e-12));
  CHECK(last[3] == doctest::Approx(std::log2(5.0)).epsilon(1e-9));
}

TEST_CASE("region2 --pareto keeps only undominated rows") {
  const Run all = run({"region2", "--config", fixture("fig3.json"), "--grid", "9"});
  const Run front = run({"region2", "--config", fixture("fig3.json"), "--grid", "9", "--pareto"});
  REQUIRE(front.code == 0);
  CHECK(lines(front.out).size() < lines(all.out).size());
  CHECK(lines(front.out)[0] == lines(all.out)[0]);
}

TEST_CASE("zf on the real three-user network") {
  const Run r = run({"zf", "--config", fixture("paper_sec4.json")});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0].rfind("psi1,psi2,psi3,psi4,psi5,psi6,R1,R2,R3,g1_1,", 0) == 0);
  const auto v = cells(ls[1]);
  CHECK(v[6] == doctest::Approx(1.30694).epsilon(1e-4));
}

TEST_CASE("verify reports") {
  const Run ok = run({"verify", "--suite", "example1"});
  CHECK(ok.code == 0);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j["pass"].get<bool>());
  CHECK(j["general_rank_rank"].get<int>() == 2);
  CHECK(j["general_rank_value"].get<double>() >= 7.10);

  const Run zf = run({"verify", "--suite", "zf-triple"});
  CHECK(zf.code == 3);
  CHECK_FALSE(nlohmann::json::parse(zf.out)["pass"].get<bool>());

  const Run cfg = run({"verify", "--suite", "example1", "--config", fixture("example1.json")});
  CHECK(cfg.code == 0);
}

TEST_CASE("--dump-config round-trips bit for bit") {
  TempDir tmp;
  for (const char* name : {"fig3.json", "paper_sec4.json", "fig5.json"}) {
    const std::string a = tmp.file("a.json"), b = tmp.file("b.json");
    REQUIRE(run({"zf", "--config", fixture(name), "--dump-config", a, "--out", tmp.file("z.csv")}).code == 0);
    REQUIRE(run({"zf", "--config", a, "--dump-config", b, "--out", tmp.file("z.csv")}).code == 0);
    CHECK(slurp(a) == slurp(b));
    const RunConfig x = load_config(fixture(name)), y = load_config(a);
    for (std::size_t j = 0; j < x.network->users(); ++j) {
      CHECK(x.network->power(j) == y.network->power(j));
      for (std::size_t i = 0; i < x.network->users(); ++i)
        for (std::size_t k = 0; k < x.network->antennas(j); ++k)
          CHECK(x.network->h(j, i)[k] == y.network->h(j, i)[k]);
    }
  }
}

TEST_CASE("random sweeps are reproducible from the seed") {
  const std::vector<std::string> args{"region3", "--config", fixture("paper_sec4.json"), "--sampler", "random",
                                      "--count", "2000", "--seed", "5"};
  auto a = args, b = args;
  a.insert(a.end(), {"--threads", "1"});
  b.insert(b.end(), {"--threads", "3"});
  const Run ra = run(a), rb = run(b);
  REQUIRE(ra.code == 0);
  CHECK(ra.out == rb.out);
  CHECK(lines(ra.out).size() == 2001);
  auto c = args;
  c[8] = "6";
  CHECK(run(c).out != ra.out);
}

TEST_CASE("region3 --pareto header") {
  const Run r = run({"region3", "--config", fixture("paper_sec4.json"), "--sampler", "random", "--count", "3000",
                     "--seed", "1", "--pareto"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[0].rfind("psi1,psi2,psi3,psi4,psi5,psi6,R1,R2,R3,", 0) == 0);
}

TEST_CASE("hull reads rate columns") {
  TempDir tmp;
  const std::string csv = tmp.file("r.csv");
  REQUIRE(run({"region2", "--config", fixture("fig3.json"), "--grid", "15", "--out", csv}).code == 0);
  const Run h = run({"hull", "--in", csv, "--mode", "hull"});
  REQUIRE(h.code == 0);
  const auto ls = lines(h.out);
  CHECK(ls[0] == "R1,R2");
  CHECK(ls[1] == "0,0");
}

TEST_CASE("scalar-sum and fdm") {
  const Run s = run({"scalar-sum", "--P1", "10", "--P2", "10", "--a", "0.1", "--b", "0.1"});
  REQUIRE(s.code == 0);
  const auto j = nlohmann::json::parse(s.out);
  CHECK(j["argmax"] == "both");
  CHECK(j["Rs"].get<double>() == doctest::Approx(2 * std::log2(1 + 10.0 / 2.0)));

  const Run f = run({"fdm", "--config", fixture("fig3.json"), "--grid", "3"});
  REQUIRE(f.code == 0);
  const auto ls = lines(f.out);
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "alpha,R1,R2");
  CHECK(cells(ls[3])[0] == 1.0);
}

TEST_CASE("ilregion takes the caps from the config") {
  const Run r = run({"ilregion", "--config", fixture("fig5.json"), "--grid", "5"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 26);
  CHECK(run({"ilregion", "--config", fixture("fig3.json"), "--grid", "5"}).code == 1);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 1);
  CHECK(run({"region2", "--config", fixture("fig3.json"), "--grid", "1"}).code == 1);
  CHECK(run({"region2", "--bogus"}).code == 1);
  CHECK(run({"region2", "--config", "/nonexistent.json"}).code == 1);
  CHECK(run({"region3", "--config", fixture("fig3.json")}).code == 1);

  TempDir tmp;
  const std::string bad = tmp.file("single.json");
  std::ofstream(bad) << R"({"powers": [1, 1], "channels": [[[1, 0.5]], [[0.5, 1]]]})";
  const Run r = run({"zf", "--config", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("numerical") != std::string::npos);
}
