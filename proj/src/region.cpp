#include "misosud/region.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "misosud/errors.hpp"

namespace misosud {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kShards = 64;

// A user's candidate beam together with what it delivers at each receiver.
struct Option {
  SphericalParams params;
  CVector gamma;
  std::vector<double> power;
};

Option make_option(const MisoNetwork& net, const UserFrame& uf, SphericalParams p) {
  Option o;
  o.gamma = user_beamformer(uf, p);
  o.params = std::move(p);
  o.power.resize(net.users());
  for (std::size_t i = 0; i < net.users(); ++i) o.power[i] = std::norm(dot(net.h(uf.user, i), o.gamma));
  return o;
}

SphericalParams zero_params(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }

double axis_point(double hi, int k, int n, bool closed) {
  if (closed) return k == n - 1 ? hi : hi * k / (n - 1);
  return hi * k / n;
}

}  // namespace

std::vector<SphericalParams> angle_grid(std::size_t n, int G, bool complex_field, std::size_t fixed) {
  std::vector<SphericalParams> out;
  std::vector<int> radix;
  for (std::size_t k = 0; k < n; ++k) radix.push_back(k < fixed ? 1 : G);
  const std::size_t nw = complex_field ? n : 0;
  for (std::size_t k = 0; k < nw; ++k) radix.push_back(k < std::max<std::size_t>(fixed, 1) ? 1 : G);

  std::vector<int> digit(radix.size(), 0);
  for (;;) {
    SphericalParams p = zero_params(n);
    for (std::size_t k = 0; k < n; ++k) p.psi[k] = radix[k] == 1 ? 0.0 : axis_point(kPi, digit[k], G, true);
    for (std::size_t k = 0; k < nw; ++k)
      p.omega[k] = radix[n + k] == 1 ? 0.0 : axis_point(2 * kPi, digit[n + k], G, false);
    out.push_back(std::move(p));
    std::size_t pos = radix.size();
    while (pos > 0) {
      --pos;
      if (++digit[pos] < radix[pos]) break;
      digit[pos] = 0;
      if (pos == 0) return out;
    }
    if (radix.empty()) return out;
  }
}

namespace {

std::vector<Option> grid_options(const MisoNetwork& net, const UserFrame& uf, int G) {
  std::vector<Option> out;
  if (uf.P == 0.0) {
    out.push_back(make_option(net, uf, zero_params(uf.angles())));
    return out;
  }
  for (auto& p : angle_grid(uf.angles(), G, net.field() == Field::complex)) out.push_back(make_option(net, uf, std::move(p)));
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t shard_seed(std::uint64_t root, std::size_t shard) {
  return splitmix64(root ^ splitmix64(static_cast<std::uint64_t>(shard)));
}

std::uint64_t shard_count(std::uint64_t total, std::size_t shard) {
  return total / kShards + (shard < total % kShards ? 1 : 0);
}

SphericalParams draw_params(std::mt19937_64& rng, const UserFrame& uf, bool complex_field) {
  SphericalParams p = zero_params(uf.angles());
  if (uf.P == 0.0) return p;
  std::uniform_real_distribution<double> psi(0.0, kPi), omega(0.0, 2 * kPi);
  for (auto& v : p.psi) v = psi(rng);
  if (complex_field)
    for (std::size_t k = 1; k < p.omega.size(); ++k) p.omega[k] = omega(rng);
  return p;
}

std::vector<double> param_key(const std::vector<SphericalParams>& params) {
  std::vector<double> key;
  for (const auto& p : params) {
    key.insert(key.end(), p.psi.begin(), p.psi.end());
    key.insert(key.end(), p.omega.begin(), p.omega.end());
  }
  return key;
}

void append_key(std::vector<double>& out, const std::vector<SphericalParams>& params) {
  for (const auto& p : params) {
    out.insert(out.end(), p.psi.begin(), p.psi.end());
    out.insert(out.end(), p.omega.begin(), p.omega.end());
  }
}

std::vector<SphericalParams> params_from_key(const double* key, const std::vector<UserFrame>& frames) {
  std::vector<SphericalParams> out;
  for (const auto& uf : frames) {
    const std::size_t n = uf.angles();
    SphericalParams p;
    p.psi.assign(key, key + n);
    p.omega.assign(key + n, key + 2 * n);
    key += 2 * n;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<UserFrame> all_frames(const MisoNetwork& net) {
  std::vector<UserFrame> frames;
  for (std::size_t u = 0; u < net.users(); ++u) frames.push_back(make_user_frame(net, u));
  return frames;
}

std::vector<std::vector<Option>> all_grid_options(const MisoNetwork& net, const std::vector<UserFrame>& frames,
                                                  int G) {
  if (G < 2) throw DimensionError("grid sampler needs at least 2 points per axis");
  std::vector<std::vector<Option>> tables;
  for (const auto& uf : frames) tables.push_back(grid_options(net, uf, G));
  return tables;
}

std::uint64_t tuple_count(const std::vector<std::vector<Option>>& tables) {
  std::uint64_t n = 1;
  for (const auto& t : tables) {
    if (n > (std::uint64_t{1} << 50) / t.size()) throw DimensionError("grid sweep too large; use the random sampler");
    n *= t.size();
  }
  return n;
}

// Mixed-radix decode, user 0 most significant.
void decode(std::uint64_t index, const std::vector<std::vector<Option>>& tables, std::vector<std::size_t>& digit) {
  for (std::size_t u = tables.size(); u-- > 0;) {
    digit[u] = index % tables[u].size();
    index /= tables[u].size();
  }
}

RegionSample assemble(const std::vector<const Option*>& opts, RateConvention conv) {
  RegionSample s;
  const std::size_t m = opts.size();
  s.power.resize(m);
  for (std::size_t u = 0; u < m; ++u) {
    s.params.push_back(opts[u]->params);
    s.beamformers.push_back(opts[u]->gamma);
    s.power[u] = opts[u]->power;
  }
  s.rates = rates_from_powers(s.power, conv);
  return s;
}

// Rates only, straight from the option power tables.
void fast_rates(const std::vector<const Option*>& opts, RateConvention conv, double* out) {
  const std::size_t m = opts.size();
  for (std::size_t i = 0; i < m; ++i) {
    double interference = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) interference += opts[j]->power[i];
    out[i] = conv.rate(opts[i]->power[i], interference);
  }
}

// Candidate buffer with periodic Pareto pruning.
class FrontBuffer {
 public:
  FrontBuffer(std::size_t dim, std::size_t key_len) : dim_(dim), key_len_(key_len) {}

  void add(const double* rates, const double* key) {
    rates_.insert(rates_.end(), rates, rates + dim_);
    keys_.insert(keys_.end(), key, key + key_len_);
    if (size() >= threshold_) {
      prune();
      threshold_ = std::max<std::size_t>(kMinChunk, 2 * size());
    }
  }

  void append(const FrontBuffer& o) {
    rates_.insert(rates_.end(), o.rates_.begin(), o.rates_.end());
    keys_.insert(keys_.end(), o.keys_.begin(), o.keys_.end());
  }

  void prune() {
    const auto keep = pareto_indices(rates_, dim_);
    std::vector<double> r, k;
    r.reserve(keep.size() * dim_);
    k.reserve(keep.size() * key_len_);
    for (std::size_t i : keep) {
      r.insert(r.end(), rates_.begin() + i * dim_, rates_.begin() + (i + 1) * dim_);
      k.insert(k.end(), keys_.begin() + i * key_len_, keys_.begin() + (i + 1) * key_len_);
    }
    rates_.swap(r);
    keys_.swap(k);
  }

  std::size_t size() const { return rates_.size() / dim_; }
  const double* key(std::size_t i) const { return keys_.data() + i * key_len_; }

 private:
  static constexpr std::size_t kMinChunk = 1 << 14;
  std::size_t dim_, key_len_;
  std::size_t threshold_ = kMinChunk;
  std::vector<double> rates_, keys_;
};

template <class Body>
void run_shards(std::size_t shards, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, shards));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t s; (s = next.fetch_add(1)) < shards;) {
      try {
        body(s);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

UserFrame make_user_frame(const MisoNetwork& net, std::size_t user) {
  return make_user_frame(net, user, net.interfered_receivers(user));
}

UserFrame make_user_frame(const MisoNetwork& net, std::size_t user, std::vector<std::size_t> receivers) {
  UserFrame uf;
  uf.user = user;
  std::vector<CVector> cross;
  for (std::size_t r : receivers) {
    if (r == user || r >= net.users()) throw DimensionError("user frame: bad receiver index");
    cross.push_back(net.h(user, r));
  }
  uf.receivers = std::move(receivers);
  uf.frame = reduce_interference_frame(net.h(user, user), cross);
  uf.P = net.power(user);
  return uf;
}

CVector user_beamformer(const UserFrame& uf, const SphericalParams& p) {
  if (p.psi.size() != uf.angles()) throw DimensionError("user_beamformer: wrong number of angles");
  if (uf.P == 0.0) return CVector(uf.frame.dim());
  return lift_beamformer(uf.frame, spherical_vector(p), uf.P);
}

RegionSample build_sample(const MisoNetwork& net, const std::vector<UserFrame>& frames,
                          const std::vector<SphericalParams>& params, LogBase base) {
  if (frames.size() != net.users() || params.size() != net.users())
    throw DimensionError("build_sample: one frame and one parameter set per user");
  RegionSample s;
  s.params = params;
  for (std::size_t u = 0; u < net.users(); ++u) s.beamformers.push_back(user_beamformer(frames[u], params[u]));
  evaluate_sample(net, s, base);
  return s;
}

void m_user_region(const MisoNetwork& net, const Sampler& sampler, LogBase base, const SampleSink& sink) {
  const RateConvention conv{net.field(), base};
  const auto frames = all_frames(net);
  const std::size_t m = net.users();
  std::vector<const Option*> opts(m);

  if (sampler.kind == Sampler::Kind::grid) {
    const auto tables = all_grid_options(net, frames, sampler.grid);
    const std::uint64_t n = tuple_count(tables);
    std::vector<std::size_t> digit(m);
    for (std::uint64_t k = 0; k < n; ++k) {
      decode(k, tables, digit);
      for (std::size_t u = 0; u < m; ++u) opts[u] = &tables[u][digit[u]];
      sink(assemble(opts, conv));
    }
    return;
  }

  const bool cplx_field = net.field() == Field::complex;
  std::vector<Option> drawn(m);
  for (std::size_t s = 0; s < kShards; ++s) {
    std::mt19937_64 rng(shard_seed(sampler.seed, s));
    const std::uint64_t count = shard_count(sampler.count, s);
    for (std::uint64_t k = 0; k < count; ++k) {
      for (std::size_t u = 0; u < m; ++u) {
        drawn[u] = make_option(net, frames[u], draw_params(rng, frames[u], cplx_field));
        opts[u] = &drawn[u];
      }
      sink(assemble(opts, conv));
    }
  }
}

void three_user_region(const MisoNetwork& net, const Sampler& sampler, LogBase base, const SampleSink& sink) {
  if (net.users() != 3) throw DimensionError("three_user_region: network must have exactly 3 users");
  m_user_region(net, sampler, base, sink);
}

std::vector<RegionSample> m_user_pareto(const MisoNetwork& net, const Sampler& sampler, LogBase base,
                                        unsigned threads) {
  const RateConvention conv{net.field(), base};
  const auto frames = all_frames(net);
  const std::size_t m = net.users();
  std::size_t key_len = 0;
  for (const auto& uf : frames) key_len += 2 * uf.angles();

  std::vector<FrontBuffer> fronts(kShards, FrontBuffer(m, key_len));

  if (sampler.kind == Sampler::Kind::grid) {
    const auto tables = all_grid_options(net, frames, sampler.grid);
    const std::uint64_t n = tuple_count(tables);
    run_shards(kShards, threads, [&](std::size_t s) {
      const std::uint64_t lo = n * s / kShards, hi = n * (s + 1) / kShards;
      std::vector<std::size_t> digit(m);
      std::vector<const Option*> opts(m);
      std::vector<double> rates(m), key;
      for (std::uint64_t k = lo; k < hi; ++k) {
        decode(k, tables, digit);
        for (std::size_t u = 0; u < m; ++u) opts[u] = &tables[u][digit[u]];
        fast_rates(opts, conv, rates.data());
        key.clear();
        for (std::size_t u = 0; u < m; ++u) {
          const auto& p = opts[u]->params;
          key.insert(key.end(), p.psi.begin(), p.psi.end());
          key.insert(key.end(), p.omega.begin(), p.omega.end());
        }
        fronts[s].add(rates.data(), key.data());
      }
      fronts[s].prune();
    });
  } else {
    const bool cplx_field = net.field() == Field::complex;
    run_shards(kShards, threads, [&](std::size_t s) {
      std::mt19937_64 rng(shard_seed(sampler.seed, s));
      const std::uint64_t count = shard_count(sampler.count, s);
      std::vector<Option> drawn(m);
      std::vector<const Option*> opts(m);
      std::vector<double> rates(m), key;
      for (std::uint64_t k = 0; k < count; ++k) {
        std::vector<SphericalParams> params;
        for (std::size_t u = 0; u < m; ++u) {
          drawn[u] = make_option(net, frames[u], draw_params(rng, frames[u], cplx_field));
          opts[u] = &drawn[u];
          params.push_back(drawn[u].params);
        }
        fast_rates(opts, conv, rates.data());
        key.clear();
        append_key(key, params);
        fronts[s].add(rates.data(), key.data());
      }
      fronts[s].prune();
    });
  }

  FrontBuffer merged(m, key_len);
  for (const auto& f : fronts) merged.append(f);
  merged.prune();

  std::vector<RegionSample> out;
  out.reserve(merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i)
    out.push_back(build_sample(net, frames, params_from_key(merged.key(i), frames), base));
  std::sort(out.begin(), out.end(),
            [](const RegionSample& a, const RegionSample& b) { return param_key(a.params) < param_key(b.params); });
  return out;
}

RegionSample zf_point(const MisoNetwork& net, LogBase base) {
  RegionSample s;
  for (std::size_t u = 0; u < net.users(); ++u) {
    const std::size_t t = net.antennas(u);
    const auto cross = net.interfering_channels(u);
    s.params.push_back(zero_params(std::min(t, cross.size())));

    // Orthonormal basis of the cross channels (Gram-Schmidt, applied twice).
    std::vector<CVector> basis;
    auto strip = [&](CVector v) {
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) v -= dot(q, v) * q;
      return v;
    };
    for (const auto& c : cross) {
      const CVector v = strip(c);
      if (v.norm() > 1e-12 * std::max(1.0, c.norm())) basis.push_back((1.0 / v.norm()) * v);
    }

    if (net.power(u) == 0.0) {
      s.beamformers.emplace_back(t);
      continue;
    }
    const CVector& h = net.h(u, u);
    const CVector proj = strip(h);
    const double np = proj.norm();
    if (np <= 1e-12 * std::max(1.0, h.norm()))
      throw DegenerateZfError(u, "zero-forcing: direct channel of user " + std::to_string(u + 1) +
                                     " lies in the span of its cross channels");
    s.beamformers.push_back((std::sqrt(net.power(u)) / np) * proj);
  }
  evaluate_sample(net, s, base);
  return s;
}

void single_user_max_surface(const MisoNetwork& net, std::size_t user, int grid, LogBase base,
                             const SampleSink& sink) {
  if (net.users() != 3) throw DimensionError("single_user_max_surface: network must have exactly 3 users");
  if (user >= net.users()) throw DimensionError("single_user_max_surface: bad user index");
  if (grid < 2) throw DimensionError("single_user_max_surface: grid must be >= 2");
  const bool cplx_field = net.field() == Field::complex;

  std::vector<UserFrame> frames;
  std::vector<std::vector<SphericalParams>> choices;
  for (std::size_t u = 0; u < net.users(); ++u) {
    if (u == user) {
      UserFrame uf = make_user_frame(net, u);
      const double nh = net.h(u, u).norm();
      const CVector target = nh > 0.0 ? (1.0 / nh) * uf.frame.h_low : CVector(uf.angles());
      choices.push_back({spherical_params_for(target, net.field())});
      frames.push_back(std::move(uf));
      continue;
    }
    std::vector<std::size_t> order{user};
    for (std::size_t r : net.interfered_receivers(u))
      if (r != user) order.push_back(r);
    UserFrame uf = make_user_frame(net, u, std::move(order));
    choices.push_back(uf.P == 0.0 ? std::vector<SphericalParams>{zero_params(uf.angles())}
                                  : angle_grid(uf.angles(), grid, cplx_field, 1));
    frames.push_back(std::move(uf));
  }

  std::vector<std::size_t> digit(net.users(), 0);
  std::vector<SphericalParams> params(net.users());
  for (;;) {
    for (std::size_t u = 0; u < net.users(); ++u) params[u] = choices[u][digit[u]];
    sink(build_sample(net, frames, params, base));
    std::size_t pos = net.users();
    for (;;) {
      if (pos == 0) return;
      --pos;
      if (++digit[pos] < choices[pos].size()) break;
      digit[pos] = 0;
    }
  }
}

std::vector<RatePoint> rate_points(const std::vector<RegionSample>& samples) {
  std::vector<RatePoint> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) pts.push_back(s.rates);
  return pts;
}

std::vector<RegionSample> pareto_samples(const std::vector<RegionSample>& samples) {
  const auto pts = rate_points(samples);
  std::vector<RegionSample> out;
  for (std::size_t i : pareto_indices(pts)) out.push_back(samples[i]);
  return out;
}

namespace {

// Downhill simplex on f (minimized). Small dimensions only.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                double step, int max_iter) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  std::vector<double> val(n + 1);
  for (std::size_t i = 0; i <= n; ++i) val[i] = f(pts[i]);

  std::vector<std::size_t> order(n + 1);
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(pts[i][k] - pts[best][k]));
    if (spread < 1e-11) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (pts[worst][k] - centroid[k]);
      return p;
    };

    const auto xr = along(-1.0);
    const double fr = f(xr);
    if (fr < val[best]) {
      const auto xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) pts[worst] = xe, val[worst] = fe;
      else pts[worst] = xr, val[worst] = fr;
    } else if (fr < val[second]) {
      pts[worst] = xr, val[worst] = fr;
    } else {
      const auto xc = fr < val[worst] ? along(-0.5) : along(0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, val[worst])) {
        pts[worst] = xc, val[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
          val[i] = f(pts[i]);
        }
      }
    }
  }
  const auto it = std::min_element(val.begin(), val.end());
  return pts[static_cast<std::size_t>(it - val.begin())];
}

}  // namespace

CappedBeam best_capped_beam(const CVector& h_own, std::span<const CVector> caps, std::span<const double> bounds,
                            double P, Field field, int grid) {
  if (caps.size() != bounds.size()) throw DimensionError("best_capped_beam: one bound per cap");
  for (double b : bounds)
    if (!(b >= 0.0)) throw FeasibilityError("best_capped_beam: bounds must be >= 0");
  if (!(P >= 0.0)) throw FeasibilityError("best_capped_beam: negative power");
  if (grid < 2) throw DimensionError("best_capped_beam: grid must be >= 2");

  const ReducedFrame f = reduce_interference_frame(h_own, caps);
  const std::size_t n = f.mbar;
  const bool cplx_field = field == Field::complex;

  // Shrink factor that brings the reduced block within every cap.
  auto shrink_of = [&](const CVector& g) {
    double s = 1.0;
    for (std::size_t j = 0; j < caps.size(); ++j) {
      const double z = P * std::norm(dot(f.hj_low[j], g));
      if (z > bounds[j]) s = std::min(s, std::sqrt(bounds[j] / z));
    }
    return s;
  };
  auto repaired = [&](const SphericalParams& p) {
    CVector g = spherical_vector(p);
    g *= shrink_of(g);
    return g;
  };
  auto signal_of = [&](const CVector& gt) { return std::norm(dot(h_own, lift_beamformer(f, gt, P))); };
  // Repaired angles all map onto the cap boundary and would tie; a penalty
  // that vanishes on the boundary itself steers the search back inside.
  const double penalty = P * h_own.squared_norm();
  auto score = [&](const SphericalParams& p) {
    CVector g = spherical_vector(p);
    const double s = shrink_of(g);
    g *= s;
    return signal_of(g) - penalty * (1.0 - s);
  };

  // Free coordinates: every psi, and omega_k for k >= 1 on complex channels.
  const std::size_t nfree = n + (cplx_field && n > 0 ? n - 1 : 0);
  auto unpack = [&](const std::vector<double>& v) {
    SphericalParams p{std::vector<double>(v.begin(), v.begin() + n), std::vector<double>(n, 0.0)};
    for (std::size_t k = 1; k < n && cplx_field; ++k) p.omega[k] = v[n + k - 1];
    return p;
  };
  auto pack = [&](const SphericalParams& p) {
    std::vector<double> v(p.psi);
    for (std::size_t k = 1; k < n && cplx_field; ++k) v.push_back(p.omega[k]);
    return v;
  };

  std::vector<std::pair<double, SphericalParams>> scored;
  for (auto& p : angle_grid(n, grid, cplx_field)) {
    const double v = score(p);
    scored.emplace_back(v, std::move(p));
  }
  const std::size_t keep = std::min<std::size_t>(4, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });

  SphericalParams best = scored.front().second;
  double best_val = scored.front().first;
  if (nfree > 0) {
    auto objective = [&](const std::vector<double>& v) { return -score(unpack(v)); };
    for (std::size_t k = 0; k < keep; ++k) {
      // Restart from the result until it stops moving: a simplex collapsed
      // against a cap kink stalls before the optimum.
      auto x = pack(scored[k].second);
      double fx = objective(x);
      for (int round = 0; round < 50; ++round) {
        x = nelder_mead(objective, x, std::numbers::pi / grid / (1 + round % 5), 2000);
        const double fn = objective(x);
        const bool stalled = fx - fn <= 1e-13 * std::max(1.0, std::abs(fn));
        fx = fn;
        if (stalled && round >= 4) break;
      }
      const double v = -fx;
      if (v > best_val) {
        best_val = v;
        best = unpack(x);
      }
    }
  }

  const CVector gt = repaired(best);
  CappedBeam out;
  out.gamma = lift_beamformer(f, gt, P);
  out.signal = std::norm(dot(h_own, out.gamma));
  out.params = spherical_params_for(gt, field);
  return out;
}

}  // namespace misosud
