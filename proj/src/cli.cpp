#include "misosud/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "misosud/config.hpp"
#include "misosud/errors.hpp"
#include "misosud/pareto.hpp"
#include "misosud/region.hpp"
#include "misosud/twouser.hpp"
#include "misosud/verify.hpp"

namespace misosud {

namespace {

using nlohmann::json;

struct Common {
  std::string config;
  std::string out;
  std::string dump;
  bool real = false;
  bool nats = false;
};

struct SweepOpts {
  int grid = 0;
  std::string sampler = "grid";
  std::uint64_t count = 1000000;
  std::uint64_t seed = 0;
  bool pareto = false;
  unsigned threads = 0;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// --out file or the fallback stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw ConfigError("cannot write " + path);
    os_ = file_.get();
  }
  std::ostream& os() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

// psi/omega columns per user (psi numbered across users), rates, then the
// beamformer entries as re/im pairs (plain values on real channels).
class SampleCsv {
 public:
  SampleCsv(std::ostream& os, Field field, bool with_omega) : os_(os), field_(field), omega_(with_omega) {}

  void write(const RegionSample& s) {
    if (!header_done_) header(s);
    std::string line;
    auto put = [&](double v) {
      if (!line.empty()) line += ',';
      line += fmt(v);
    };
    for (const auto& p : s.params) {
      for (double v : p.psi) put(v);
      if (omega_)
        for (std::size_t a = 0; a < p.psi.size(); ++a) put(a < p.omega.size() ? p.omega[a] : 0.0);
    }
    for (double r : s.rates) put(r);
    for (const auto& g : s.beamformers)
      for (std::size_t k = 0; k < g.dim(); ++k) {
        put(g[k].real());
        if (field_ == Field::complex) put(g[k].imag());
      }
    os_ << line << '\n';
  }

 private:
  void header(const RegionSample& s) {
    std::vector<std::string> cols;
    std::size_t a = 0;
    for (const auto& p : s.params) {
      const std::size_t first = a;
      for (std::size_t k = 0; k < p.psi.size(); ++k) cols.push_back("psi" + std::to_string(++a));
      if (omega_)
        for (std::size_t k = 0; k < p.psi.size(); ++k) cols.push_back("omega" + std::to_string(first + k + 1));
    }
    for (std::size_t i = 0; i < s.rates.size(); ++i) cols.push_back("R" + std::to_string(i + 1));
    for (std::size_t u = 0; u < s.beamformers.size(); ++u)
      for (std::size_t k = 0; k < s.beamformers[u].dim(); ++k) {
        const std::string base = "g" + std::to_string(u + 1) + "_" + std::to_string(k + 1);
        if (field_ == Field::complex) {
          cols.push_back(base + "_re");
          cols.push_back(base + "_im");
        } else {
          cols.push_back(base);
        }
      }
    for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
    os_ << '\n';
    header_done_ = true;
  }

  std::ostream& os_;
  Field field_;
  bool omega_;
  bool header_done_ = false;
};

LogBase base_of(const Common& c) { return c.nats ? LogBase::e : LogBase::two; }

unsigned threads_of(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("MISO_SUD_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0') throw ConfigError("MISO_SUD_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return 0;
}

RunConfig load(const Common& c) {
  if (c.config.empty()) throw ConfigError("--config is required");
  RunConfig cfg = load_config(c.config, c.real);
  if (!c.dump.empty()) {
    Output d(c.dump, std::cout);
    d.os() << dump_config(cfg);
  }
  return cfg;
}

const MisoNetwork& network_of(const RunConfig& cfg, std::size_t users) {
  if (!cfg.network) throw ConfigError("config has no \"channels\"");
  if (users && cfg.network->users() != users)
    throw ConfigError("this command needs exactly " + std::to_string(users) + " users");
  return *cfg.network;
}

void write_samples(const Common& c, Field field, bool with_omega, const std::vector<RegionSample>& samples,
                   std::ostream& out) {
  Output o(c.out, out);
  SampleCsv csv(o.os(), field, with_omega);
  for (const auto& s : samples) csv.write(s);
}

Sampler sampler_of(const SweepOpts& s) {
  if (s.sampler == "grid") return Sampler::make_grid(s.grid);
  if (s.sampler == "random") return Sampler::make_random(s.seed, s.count);
  throw ConfigError("--sampler must be grid or random");
}

// Streams an m-user sweep to CSV. Random sweeps are sorted by their angle
// tuple first so the output does not depend on the shard layout.
void sweep_to_csv(const Common& c, const SweepOpts& so, const MisoNetwork& net, std::ostream& out) {
  const Sampler sampler = sampler_of(so);
  const LogBase base = base_of(c);
  const bool omega = net.field() == Field::complex;
  if (so.pareto) {
    write_samples(c, net.field(), omega, m_user_pareto(net, sampler, base, threads_of(so.threads)), out);
    return;
  }
  Output o(c.out, out);
  SampleCsv csv(o.os(), net.field(), omega);
  if (sampler.kind == Sampler::Kind::grid) {
    m_user_region(net, sampler, base, [&](const RegionSample& s) { csv.write(s); });
    return;
  }
  // Angle tuples back to back; shapes of one tuple in `shape`.
  std::vector<double> keys;
  std::vector<std::size_t> shape;
  m_user_region(net, sampler, base, [&](const RegionSample& s) {
    if (shape.empty())
      for (const auto& p : s.params) shape.push_back(p.psi.size());
    for (const auto& p : s.params) {
      keys.insert(keys.end(), p.psi.begin(), p.psi.end());
      keys.insert(keys.end(), p.omega.begin(), p.omega.end());
    }
  });
  std::size_t stride = 0;
  for (std::size_t n : shape) stride += 2 * n;
  const std::size_t rows = stride ? keys.size() / stride : 0;
  std::vector<std::size_t> order(rows);
  for (std::size_t i = 0; i < rows; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::lexicographical_compare(keys.begin() + x * stride, keys.begin() + (x + 1) * stride,
                                        keys.begin() + y * stride, keys.begin() + (y + 1) * stride);
  });
  std::vector<UserFrame> frames;
  for (std::size_t u = 0; u < net.users(); ++u) frames.push_back(make_user_frame(net, u));
  for (std::size_t i : order) {
    const double* k = keys.data() + i * stride;
    std::vector<SphericalParams> params;
    for (std::size_t n : shape) {
      params.push_back({{k, k + n}, {k + n, k + 2 * n}});
      k += 2 * n;
    }
    csv.write(build_sample(net, frames, params, base));
  }
}

std::vector<RatePoint> read_rates_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
  std::vector<std::size_t> cols;
  {
    std::stringstream ss(line);
    std::string name;
    for (std::size_t i = 0; std::getline(ss, name, ','); ++i)
      if (name.size() > 1 && name[0] == 'R' &&
          std::all_of(name.begin() + 1, name.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        cols.push_back(i);
  }
  if (cols.empty()) throw ConfigError(path + ": no R1..Rm columns in the header");
  std::vector<RatePoint> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    RatePoint p;
    for (std::size_t c : cols) {
      if (c >= cells.size()) throw ConfigError(path + ": short row");
      char* end = nullptr;
      p.push_back(std::strtod(cells[c].c_str(), &end));
      if (end == cells[c].c_str()) throw ConfigError(path + ": bad number '" + cells[c] + "'");
    }
    pts.push_back(std::move(p));
  }
  if (pts.empty()) throw ConfigError(path + ": no rows");
  return pts;
}

void add_common(CLI::App* sub, Common& c, bool config_required = true) {
  auto* opt = sub->add_option("--config", c.config, "JSON configuration");
  if (config_required) opt->required();
  sub->add_option("--out", c.out, "output file (default: stdout)");
  sub->add_option("--dump-config", c.dump, "write the parsed configuration back as JSON");
  sub->add_flag("--real", c.real, "treat channels as real (1/2 rate prefactor)");
  sub->add_flag("--nats", c.nats, "natural-log rates instead of bits");
}

void add_sweep(CLI::App* sub, SweepOpts& s) {
  sub->add_option("--sampler", s.sampler, "grid or random")->check(CLI::IsMember({"grid", "random"}));
  sub->add_option("--count", s.count, "random tuples");
  sub->add_option("--seed", s.seed, "random seed");
  sub->add_flag("--pareto", s.pareto, "emit only the Pareto front");
  sub->add_option("--threads", s.threads, "worker threads (default: MISO_SUD_THREADS or all cores)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate regions of MISO interference channels with single-user detection", "miso_sud"};
  app.require_subcommand(1);

  Common c;
  SweepOpts so;
  int grid = 181, grid2 = 0, grid_il = 181, grid_fdm = 101, grid3 = 24, gridm = 12;
  double Q1 = -1.0, Q2 = -1.0;
  double P1 = 0.0, P2 = 0.0, a = 0.0, b = 0.0;
  std::string mode = "pareto", in_path, suite = "all";
  std::uint64_t vseed = 1;
  int instances = 200;

  auto* region2 = app.add_subcommand("region2", "two-user region on a psi grid");
  add_common(region2, c);
  region2->add_option("--grid", grid, "points per psi axis")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  region2->add_option("--grid2", grid2, "points on the second axis (default: --grid)");
  region2->add_flag("--pareto", so.pareto, "emit only the Pareto front");

  auto* ilregion = app.add_subcommand("ilregion", "two-user region under interference caps Q1, Q2");
  add_common(ilregion, c);
  ilregion->add_option("--grid", grid_il, "points per psi axis")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  ilregion->add_option("--Q1", Q1, "cap on what user 1 inflicts on receiver 2");
  ilregion->add_option("--Q2", Q2, "cap on what user 2 inflicts on receiver 1");
  ilregion->add_flag("--pareto", so.pareto, "emit only the Pareto front");

  auto* region3 = app.add_subcommand("region3", "three-user region sweep");
  add_common(region3, c);
  add_sweep(region3, so);
  region3->add_option("--grid", grid3, "grid points per angle")->capture_default_str()->check(CLI::Range(2, 1 << 20));

  auto* regionm = app.add_subcommand("regionm", "m-user region sweep");
  add_common(regionm, c);
  add_sweep(regionm, so);
  regionm->add_option("--grid", gridm, "grid points per angle")->capture_default_str()->check(CLI::Range(2, 1 << 20));

  auto* zf = app.add_subcommand("zf", "zero-forcing rate point");
  add_common(zf, c);

  auto* fdm = app.add_subcommand("fdm", "band-splitting baseline for two users");
  add_common(fdm, c);
  fdm->add_option("--grid", grid_fdm, "bandwidth fractions")->capture_default_str()->check(CLI::Range(2, 1 << 20));

  auto* scalar = app.add_subcommand("scalar-sum", "best on/off sum rate of a scalar channel");
  scalar->add_option("--P1", P1)->required();
  scalar->add_option("--P2", P2)->required();
  scalar->add_option("--a", a, "cross gain into receiver 1")->required();
  scalar->add_option("--b", b, "cross gain into receiver 2")->required();
  scalar->add_option("--out", c.out, "output file (default: stdout)");
  scalar->add_flag("--real", c.real, "1/2 rate prefactor");
  scalar->add_flag("--nats", c.nats, "natural-log rates");

  auto* verify = app.add_subcommand("verify", "run a self-check suite");
  verify->add_option("--suite", suite, "suite name")
      ->check(CLI::IsMember({"all", "example1", "zf-triple", "capped-beam", "completion", "inertia"}));
  verify->add_option("--config", c.config, "problem override for example1");
  verify->add_option("--out", c.out, "report file (default: stdout)");
  verify->add_option("--seed", vseed, "random seed");
  verify->add_option("--instances", instances, "random instances per suite")->check(CLI::Range(1, 1 << 24));

  auto* hull = app.add_subcommand("hull", "Pareto set or convex hull of rate points from a CSV");
  hull->add_option("--in", in_path, "CSV with R1..Rm columns")->required();
  hull->add_option("--mode", mode, "pareto or hull")->check(CLI::IsMember({"pareto", "hull"}));
  hull->add_option("--out", c.out, "output file (default: stdout)");

  std::vector<const char*> argv{"miso_sud"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (region2->parsed() || ilregion->parsed()) {
      const RunConfig cfg = load(c);
      const MisoNetwork& net = network_of(cfg, 2);
      const TwoUserChannel ch = net.two_user(0, 1);
      std::vector<RegionSample> samples;
      if (region2->parsed()) {
        samples = two_user_region(ch, grid, grid2 > 0 ? grid2 : grid, base_of(c));
      } else {
        if (Q1 < 0.0 || Q2 < 0.0) {
          if (!cfg.Q) throw ConfigError("ilregion needs --Q1/--Q2 or \"Q\" in the config");
          if (Q1 < 0.0) Q1 = cfg.Q->first;
          if (Q2 < 0.0) Q2 = cfg.Q->second;
        }
        samples = interference_limited_region(ch, Q1, Q2, grid_il, grid_il, base_of(c));
      }
      if (so.pareto) samples = pareto_samples(samples);
      write_samples(c, net.field(), false, samples, out);
    } else if (region3->parsed() || regionm->parsed()) {
      const RunConfig cfg = load(c);
      const MisoNetwork& net = network_of(cfg, region3->parsed() ? 3 : 0);
      so.grid = region3->parsed() ? grid3 : gridm;
      sweep_to_csv(c, so, net, out);
    } else if (zf->parsed()) {
      const RunConfig cfg = load(c);
      const MisoNetwork& net = network_of(cfg, 0);
      write_samples(c, net.field(), net.field() == Field::complex, {zf_point(net, base_of(c))}, out);
    } else if (fdm->parsed()) {
      const RunConfig cfg = load(c);
      const MisoNetwork& net = network_of(cfg, 2);
      const auto pairs = fdm_region(net.two_user(0, 1), grid_fdm, base_of(c));
      Output o(c.out, out);
      o.os() << "alpha,R1,R2\n";
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double alpha = k + 1 == pairs.size() ? 1.0 : static_cast<double>(k) / (pairs.size() - 1);
        o.os() << fmt(alpha) << ',' << fmt(pairs[k].R1) << ',' << fmt(pairs[k].R2) << '\n';
      }
    } else if (scalar->parsed()) {
      const RateConvention conv{c.real ? Field::real : Field::complex, base_of(c)};
      const auto r = scalar_sud_sum_rate(P1, P2, a, b, conv);
      static const char* names[] = {"both", "only_second", "only_first"};
      json j{{"Rs", r.Rs}, {"argmax", names[static_cast<int>(r.argmax)]}};
      Output o(c.out, out);
      o.os() << j.dump(2) << '\n';
    } else if (verify->parsed()) {
      VerifyOptions opt;
      opt.seed = vseed;
      opt.instances = instances;
      if (!c.config.empty()) {
        const RunConfig cfg = load(c);
        if (!cfg.problem) throw ConfigError("verify --config needs a \"problem\" object");
        opt.problem = cfg.problem;
      }
      const json report = run_verify(suite, opt);
      Output o(c.out, out);
      o.os() << report.dump(2) << '\n';
      if (!report["pass"].get<bool>()) return kExitVerify;
    } else if (hull->parsed()) {
      const auto pts = read_rates_csv(in_path);
      const auto res = pareto_hull(pts, mode == "hull" ? HullMode::hull : HullMode::pareto);
      Output o(c.out, out);
      for (std::size_t i = 0; i < pts.front().size(); ++i) o.os() << (i ? "," : "") << 'R' << i + 1;
      o.os() << '\n';
      for (const auto& p : res) {
        for (std::size_t i = 0; i < p.size(); ++i) o.os() << (i ? "," : "") << fmt(p[i]);
        o.os() << '\n';
      }
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace misosud
