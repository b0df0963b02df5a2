#include <doctest.h>

#include "misosud/errors.hpp"
#include "misosud/oracle.hpp"
#include "misosud/region.hpp"
#include "misosud/twouser.hpp"
#include "misosud/verify.hpp"
#include "oracles.hpp"

using namespace misosud;
using namespace oracle_ref;

namespace {

// max over z in [0, sqrt(bound)] of the two-user closed form: a dense scan
// plus the matched-beam level when it lies inside.
double best_under_upper_cap(const CVector& h, const CVector& c, double P, double bound) {
  const double zmax = std::sqrt(bound);
  double best = 0.0;
  for (int k = 0; k <= 400; ++k) best = std::max(best, max_signal_given_interference(h, c, P, zmax * k / 400).value);
  const double natural = std::sqrt(P * inner_abs2(c, h) / h.squared_norm());
  if (natural <= zmax) best = std::max(best, max_signal_given_interference(h, c, P, natural).value);
  return best;
}

void check_certified(const ConstrainedMaxProblem& p, const OracleReport& r, double tol) {
  if (!r.certified) return;
  CHECK(psd_check(r.S, 1e-9));
  CHECK(r.S.trace() <= p.P + 1e-9);
  for (std::size_t j = 0; j < p.caps.size(); ++j) {
    const double v = r.S.quad_form(p.caps[j].h);
    if (p.caps[j].kind == CapKind::equality) CHECK(std::abs(v - p.caps[j].bound) <= tol * std::max(1.0, p.caps[j].bound));
    else CHECK(v <= p.caps[j].bound + tol * std::max(1.0, p.caps[j].bound));
  }
}

}  // namespace

TEST_CASE("no caps: matched beamforming") {
  std::mt19937_64 rng(1);
  const CVector h = random_vec(rng, 4);
  const ConstrainedMaxProblem p{h, {}, 1.0, Field::complex};
  const auto g = general_rank_solve(p);
  CHECK(g.value == doctest::Approx(h.squared_norm()).epsilon(1e-8));
  HermitianMatrix want = HermitianMatrix::outer(h);
  want *= 1.0 / h.squared_norm();
  CHECK(max_abs_diff(g.S.matrix(), want.matrix()) <= 1e-6);
  const ConstrainedMaxProblem p2{h, {}, 2.5, Field::complex};
  CHECK(rank_one_search(p2, 5, 3).value == doctest::Approx(2.5 * h.squared_norm()).epsilon(1e-8));
}

TEST_CASE("equality-capped problem with a rank-2 optimum") {
  const ConstrainedMaxProblem p = example1_problem();
  const auto g = general_rank_solve(p);
  CHECK(g.value >= 7.10);
  CHECK(g.value == doctest::Approx(7.1100).epsilon(1e-2 / 7.11));
  CHECK(numerical_rank(g.S, 1e-6) == 2);
  check_certified(p, g, 1e-6);
  const auto r = rank_one_search(p, 20, 1);
  CHECK(std::abs(r.value - 7.0805) <= 1e-2);
  CHECK(g.value >= r.value - 1e-6);
}

TEST_CASE("single equality cap: rank-1 search meets the closed form") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> dim(2, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int misses = 0;
  const int n = 1000;
  for (int k = 0; k < n; ++k) {
    const std::size_t t = dim(rng);
    const CVector h1 = random_vec(rng, t), h3 = random_vec(rng, t);
    const double P = 0.5 + 4.5 * u(rng);
    const double z = u(rng) * std::sqrt(P) * h3.norm();
    const double closed = max_signal_given_interference(h1, h3, P, z).value;
    const ConstrainedMaxProblem p{h1, {{h3, z * z, CapKind::equality}}, P, Field::complex};
    const double found = rank_one_search(p, 20, 7 + k).value;
    CHECK(found <= closed * (1 + 1e-6));
    if (std::abs(found - closed) > 1e-6 * closed) ++misses;
  }
  CHECK(misses == 0);
}

TEST_CASE("single upper cap: general solver meets the closed-form maximum over the cap range") {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<std::size_t> dim(2, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t t = dim(rng);
    const CVector h = random_vec(rng, t), c = random_vec(rng, t);
    const double P = 0.5 + 4.5 * u(rng);
    const double bound = u(rng) * P * c.squared_norm();
    const ConstrainedMaxProblem p{h, {{c, bound, CapKind::upper}}, P, Field::complex};
    const auto g = general_rank_solve(p);
    const double want = best_under_upper_cap(h, c, P, bound);
    CHECK(g.value == doctest::Approx(want).epsilon(1e-4));
    check_certified(p, g, 1e-6);
  }
}

TEST_CASE("general rank dominates rank one") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const std::size_t t = 4;
    const CVector h = random_vec(rng, t, false);
    std::vector<Cap> caps;
    for (int j = 0; j < 2; ++j) {
      const CVector c = random_vec(rng, t, false);
      caps.push_back({c, 0.3 * u(rng) * c.squared_norm(), k % 2 ? CapKind::upper : CapKind::equality});
    }
    const ConstrainedMaxProblem p{h, caps, 1.0, Field::real};
    const auto g = general_rank_solve(p);
    const auto r = rank_one_search(p, 10, k);
    CHECK(g.value >= r.value - 1e-6 * std::max(1.0, r.value));
  }
}

TEST_CASE("infeasible caps are rejected") {
  const CVector h{1.0, 0.0};
  const ConstrainedMaxProblem p{h, {{CVector{0.0, 1.0}, 5.0, CapKind::equality}}, 1.0, Field::complex};
  CHECK_THROWS_AS(general_rank_solve(p), FeasibilityError);
  CHECK_THROWS_AS(rank_one_search(p), FeasibilityError);
}

TEST_CASE("identical seeds give identical reports") {
  const ConstrainedMaxProblem p = example1_problem();
  const auto a = rank_one_search(p, 8, 99), b = rank_one_search(p, 8, 99);
  CHECK(a.value == b.value);
  CHECK(max_abs_diff(a.S.matrix(), b.S.matrix()) == 0.0);
  const auto c = general_rank_solve(p), d = general_rank_solve(p);
  CHECK(c.value == d.value);
  CHECK(c.iterations == d.iterations);
}

TEST_CASE("weighted sum: a single positive weight gives the single-user maximum") {
  std::mt19937_64 rng(43);
  const TwoUserChannel ch{random_vec(rng, 2), random_vec(rng, 2), random_vec(rng, 2), random_vec(rng, 2), 2.0, 3.0,
                          Field::complex};
  const MisoNetwork net = MisoNetwork::from_two_user(ch);
  const std::vector<double> mu{1.0, 0.0};
  const int res = 41;
  const auto s = weighted_sum_boundary(net, mu, res);
  // The matched beam is at most half a grid step away from a grid angle.
  const double x = 2.0 * ch.h1.squared_norm(), half = kPi / (res - 1) / 2;
  CHECK(s.rates[0] <= std::log2(1 + x) + 1e-12);
  CHECK(s.rates[0] >= std::log2(1 + x * std::pow(std::cos(half), 2)));
  CHECK(s.power[1][0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("weighted sum on a symmetric channel balances the users") {
  const double theta = kPi / 3, sigma = 1 / std::sqrt(3.0);
  const CVector cross{sigma * std::cos(theta), sigma * std::sin(theta)};
  const TwoUserChannel ch{CVector{1.0, 0.0}, cross, cross, CVector{1.0, 0.0}, 6.0, 6.0, Field::complex};
  const MisoNetwork net = MisoNetwork::from_two_user(ch);
  const std::vector<double> mu{1.0, 1.0};
  const auto s = weighted_sum_boundary(net, mu, default_resolution(2));
  // One grid step in psi moves a rate by at most about d R / d psi * pi / 180.
  const double step = 2 * 6.0 / std::log(2.0) * kPi / (default_resolution(2) - 1);
  CHECK(std::abs(s.rates[0] - s.rates[1]) <= step);
  CHECK(default_resolution(2) == 181);
  CHECK(default_resolution(3) == 41);
}

TEST_CASE("weighted sum equals the best grid point of the region sweep") {
  const MisoNetwork net = reference_network(Field::real);
  const std::vector<double> mu{0.3, 1.0, 0.6};
  const auto s = weighted_sum_boundary(net, mu, 5);
  double best = -1.0;
  m_user_region(net, Sampler::make_grid(5), LogBase::two, [&](const RegionSample& x) {
    best = std::max(best, mu[0] * x.rates[0] + mu[1] * x.rates[1] + mu[2] * x.rates[2]);
  });
  CHECK(mu[0] * s.rates[0] + mu[1] * s.rates[1] + mu[2] * s.rates[2] == doctest::Approx(best).epsilon(1e-12));
  CHECK(s.rates.size() == 3);
}

TEST_CASE("inertia check examples") {
  const CVector target{1.0, 2.0, 0.5};
  CHECK(kkt_inertia_check(target, {}, {}));
  const std::vector<CVector> caps{CVector{0.0, 1.0, 0.0}, CVector{0.0, 0.0, 1.0}};
  const std::vector<double> lam{0.5, 2.0};
  CHECK(kkt_inertia_check(CVector{1.0, 0.0, 0.0}, caps, lam));
}

TEST_CASE("inertia check on random draws") {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::exponential_distribution<double> lam(1.0);
  for (int k = 0; k < 2000; ++k) {
    const std::size_t t = dim(rng);
    std::uniform_int_distribution<std::size_t> nc(0, 2 * t);
    const CVector target = random_vec(rng, t);
    std::vector<CVector> caps;
    std::vector<double> l;
    for (std::size_t j = nc(rng); j > 0; --j) {
      caps.push_back(random_vec(rng, t));
      l.push_back(k % 5 == 0 ? 0.0 : lam(rng));
    }
    CHECK(kkt_inertia_check(target, caps, l));
  }
}
