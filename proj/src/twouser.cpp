#include "misosud/twouser.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "misosud/errors.hpp"

namespace misosud {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
// sin of the angle between h1 and h3 below which they count as dependent.
constexpr double kDependentSin = 1e-9;

double grid_point(double hi, int k, int n) {
  if (k == n - 1) return hi;
  return hi * static_cast<double>(k) / static_cast<double>(n - 1);
}

std::vector<RegionSample> sweep(const TwoUserChannel& ch, double lim1, double lim2, int grid1, int grid2,
                                LogBase base) {
  if (grid1 < 2 || grid2 < 2) throw DimensionError("grid sizes must be >= 2");
  const RateConvention conv{ch.field, base};
  const double n3 = ch.h3.norm();
  const double n2 = ch.h2.norm();

  // Each user's beam depends only on its own psi, so solve each axis once.
  auto axis = [](const CVector& direct, const CVector& cross, double P, double cn, double lim, int n) {
    std::vector<std::pair<double, BeamSolution>> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
      const double psi = grid_point(lim, k, n);
      const double z = std::sqrt(P) * cn * std::sin(psi);
      out.emplace_back(psi, max_signal_given_interference(direct, cross, P, z));
    }
    return out;
  };
  const auto user1 = axis(ch.h1, ch.h3, ch.P1, n3, lim1, grid1);
  const auto user2 = axis(ch.h4, ch.h2, ch.P2, n2, lim2, grid2);

  std::vector<RegionSample> samples;
  samples.reserve(static_cast<std::size_t>(grid1) * grid2);
  for (const auto& [psi1, b1] : user1) {
    const double s11 = std::norm(dot(ch.h1, b1.gamma));
    const double s12 = std::norm(dot(ch.h3, b1.gamma));
    for (const auto& [psi2, b2] : user2) {
      const double s22 = std::norm(dot(ch.h4, b2.gamma));
      const double s21 = std::norm(dot(ch.h2, b2.gamma));
      RegionSample s;
      s.params = {SphericalParams{{psi1}, {0.0}}, SphericalParams{{psi2}, {0.0}}};
      s.rates = {conv.rate(s11, s21), conv.rate(s22, s12)};
      s.beamformers = {b1.gamma, b2.gamma};
      s.power = {{s11, s12}, {s21, s22}};
      samples.push_back(std::move(s));
    }
  }
  return samples;
}

}  // namespace

void TwoUserChannel::validate() const {
  if (h1.empty() || h2.empty()) throw DimensionError("two-user channel: empty channel vector");
  if (h1.dim() != h3.dim()) throw DimensionError("two-user channel: dim(h1) != dim(h3)");
  if (h2.dim() != h4.dim()) throw DimensionError("two-user channel: dim(h2) != dim(h4)");
  if (!(P1 >= 0.0) || !(P2 >= 0.0) || !std::isfinite(P1) || !std::isfinite(P2))
    throw FeasibilityError("two-user channel: powers must be finite and >= 0");
  if (field == Field::real && !(h1.is_real() && h2.is_real() && h3.is_real() && h4.is_real()))
    throw HypothesisError("two-user channel: real field with complex channel entries");
}

double angle_between(const CVector& a, const CVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("angle_between: dimension mismatch");
  const double nb = b.norm();
  if (a.norm() == 0.0 || nb == 0.0) return kHalfPi;
  const cplx ba = dot(b, a);
  const CVector r = a - (ba / (nb * nb)) * b;
  return std::atan2(r.norm(), std::abs(ba) / nb);
}

BeamSolution max_signal_given_interference(const CVector& h1, const CVector& h3, double P, double z) {
  if (h1.dim() != h3.dim() || h1.empty()) throw DimensionError("max_signal_given_interference: dimension mismatch");
  if (!(P >= 0.0)) throw FeasibilityError("max_signal_given_interference: negative power");
  if (!(z >= 0.0)) throw FeasibilityError("max_signal_given_interference: negative interference level");

  const std::size_t t = h1.dim();
  const double n1 = h1.norm();
  const double n3 = h3.norm();

  if (n3 == 0.0) {
    if (z > 1e-12) throw FeasibilityError("max_signal_given_interference: z > 0 with zero cross channel");
    if (n1 == 0.0) return {std::sqrt(P) * CVector::basis(t, 0), 0.0};
    return {(std::sqrt(P) / n1) * h1, P * n1 * n1};
  }

  const double zmax = std::sqrt(P) * n3;
  if (z > zmax + 1e-12 * std::max(1.0, zmax))
    throw FeasibilityError("max_signal_given_interference: z exceeds sqrt(P)*||h3||");
  z = std::min(z, zmax);

  const UnitaryMatrix U = unitary_completion(h3);
  const CVector hh = U.apply_adjoint(h1);
  const cplx a = hh[0];
  const CVector beta = hh.segment(1, t - 1);
  const double nbeta = beta.norm();

  if (nbeta <= kDependentSin * n1) {
    // h1 = c h3: only the h3 direction matters, and its power is pinned by z.
    const double c2 = std::norm(dot(h3, h1)) / (n3 * n3 * n3 * n3);
    return {(z / (n3 * n3)) * h3, c2 * z * z};
  }

  const double along = z / n3;  // beam component along h3
  const double rest = std::sqrt(std::max(0.0, P - along * along));
  const cplx k = std::abs(a) > 0.0 ? a / std::abs(a) : cplx(1.0);
  CVector w(t);
  w[0] = along * k;
  for (std::size_t i = 1; i < t; ++i) w[i] = (rest / nbeta) * beta[i - 1];
  const double amp = std::abs(a) * along + nbeta * rest;
  return {U.apply(w), amp * amp};
}

AngleParams channel_angles(const TwoUserChannel& ch) {
  AngleParams a;
  a.theta1 = angle_between(ch.h1, ch.h3);
  a.theta2 = angle_between(ch.h4, ch.h2);
  return a;
}

std::vector<RegionSample> two_user_region(const TwoUserChannel& ch, int grid1, int grid2, LogBase base) {
  ch.validate();
  const AngleParams a = channel_angles(ch);
  return sweep(ch, kHalfPi - a.theta1, kHalfPi - a.theta2, grid1, grid2, base);
}

double psi_limit(double theta, double P, double cross_norm, double Q) {
  const double full = kHalfPi - theta;
  const double gain = P * cross_norm * cross_norm;
  const double c = std::cos(theta);
  // At or above the threshold the cap is inactive; return the unconstrained
  // limit itself so both sweeps share the same grid bit for bit. The slack
  // absorbs rounding in theta when Q is the threshold computed by the caller.
  if (Q >= gain * c * c * (1 - 1e-12)) return full;
  return std::min(full, std::asin(std::sqrt(Q / gain)));
}

std::vector<RegionSample> interference_limited_region(const TwoUserChannel& ch, double Q1, double Q2, int grid1,
                                                      int grid2, LogBase base) {
  ch.validate();
  if (ch.h2.norm() == 0.0 || ch.h3.norm() == 0.0)
    throw HypothesisError("interference_limited_region: cross channels must be nonzero");
  if (!(Q1 >= 0.0) || !(Q2 >= 0.0)) throw FeasibilityError("interference_limited_region: caps must be >= 0");
  const AngleParams a = channel_angles(ch);
  const double lim1 = psi_limit(a.theta1, ch.P1, ch.h3.norm(), Q1);
  const double lim2 = psi_limit(a.theta2, ch.P2, ch.h2.norm(), Q2);
  return sweep(ch, lim1, lim2, grid1, grid2, base);
}

ScalarSumRate scalar_sud_sum_rate(double P1, double P2, double a, double b, RateConvention conv) {
  if (!(P1 >= 0.0 && P2 >= 0.0 && a >= 0.0 && b >= 0.0))
    throw HypothesisError("scalar_sud_sum_rate: arguments must be >= 0");
  auto f = [&](double p1, double p2) { return conv.rate(p1, a * p2) + conv.rate(p2, b * p1); };
  ScalarSumRate best{f(P1, P2), SumRateArgmax::both};
  if (const double v = f(0.0, P2); v > best.Rs) best = {v, SumRateArgmax::only_second};
  if (const double v = f(P1, 0.0); v > best.Rs) best = {v, SumRateArgmax::only_first};
  return best;
}

std::vector<RatePair> fdm_region(const TwoUserChannel& ch, int grid, LogBase base) {
  ch.validate();
  if (grid < 2) throw DimensionError("fdm_region: grid must be >= 2");
  const RateConvention conv{ch.field, base};
  const double g1 = ch.P1 * ch.h1.squared_norm();
  const double g2 = ch.P2 * ch.h4.squared_norm();
  std::vector<RatePair> out;
  out.reserve(grid);
  for (int k = 0; k < grid; ++k) {
    const double alpha = grid_point(1.0, k, grid);
    const double rest = 1.0 - alpha;
    RatePair r;
    r.R1 = alpha > 0.0 ? alpha * conv.rate(g1 / alpha, 0.0) : 0.0;
    r.R2 = rest > 0.0 ? rest * conv.rate(g2 / rest, 0.0) : 0.0;
    out.push_back(r);
  }
  return out;
}

double fdm_zf_threshold(double P) {
  if (!(P >= 0.0)) throw HypothesisError("fdm_zf_threshold: P must be >= 0");
  // (sqrt(1+2P) - 1)/P == 2 / (sqrt(1+2P) + 1)
  return std::sqrt(2.0 / (std::sqrt(1.0 + 2.0 * P) + 1.0));
}

bool fdm_beats_zf_condition(double theta, double P) { return std::sin(theta) <= fdm_zf_threshold(P); }

}  // namespace misosud
