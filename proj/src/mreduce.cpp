#include "misosud/mreduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "misosud/errors.hpp"
#include "misosud/rankone.hpp"

namespace misosud {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

ReducedFrame reduce_interference_frame(const CVector& h_own, std::span<const CVector> h_interf) {
  const std::size_t t = h_own.dim();
  if (t == 0) throw DimensionError("reduce_interference_frame: empty channel");
  for (const auto& h : h_interf)
    if (h.dim() != t) throw DimensionError("reduce_interference_frame: dimension mismatch");

  const std::size_t mbar = std::min(t, h_interf.size());
  std::vector<CVector> hj(h_interf.begin(), h_interf.end());
  CVector h = h_own;
  CMatrix T = CMatrix::identity(t);

  for (std::size_t k = 0; k < mbar; ++k) {
    const std::size_t n = t - k;
    const UnitaryMatrix U = unitary_completion(hj[k].segment(k, n));
    auto rotate = [&](CVector& v) {
      const CVector tail = U.apply_adjoint(v.segment(k, n));
      for (std::size_t i = 0; i < n; ++i) v[k + i] = tail[i];
    };
    const double lead = hj[k].segment(k, n).norm();
    for (auto& v : hj) rotate(v);
    rotate(h);
    // The pivot vector is exactly (.., ||tail||, 0, ..., 0) by construction.
    hj[k][k] = lead;
    for (std::size_t i = k + 1; i < t; ++i) hj[k][i] = 0.0;
    T.set_block(0, k, T.block(0, k, t, n) * U.matrix());
  }

  ReducedFrame f;
  f.T = UnitaryMatrix(std::move(T), 1e-10);
  f.mbar = mbar;
  f.h_low = h.segment(0, mbar);
  f.h_hat = h.segment(mbar, t - mbar);
  f.hj_low.reserve(hj.size());
  for (const auto& v : hj) f.hj_low.push_back(v.segment(0, mbar));
  return f;
}

CVector spherical_vector(const SphericalParams& params) {
  const std::size_t n = params.psi.size();
  if (!params.omega.empty() && params.omega.size() != n)
    throw DimensionError("spherical_vector: psi and omega lengths differ");
  CVector g(n);
  double c = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double amp = std::sin(params.psi[k]) * c;
    g[k] = params.omega.empty() || params.omega[k] == 0.0 ? cplx(amp) : std::polar(amp, params.omega[k]);
    c *= std::cos(params.psi[k]);
  }
  return g;
}

SphericalBeam spherical_rank_one(double P, const SphericalParams& params) {
  if (!(P >= 0.0)) throw FeasibilityError("spherical_rank_one: negative power");
  CVector g = spherical_vector(params);
  HermitianMatrix S = HermitianMatrix::outer(g);
  S *= P;
  return {std::move(g), std::move(S)};
}

SphericalParams spherical_params_for(const CVector& gamma, Field field) {
  const std::size_t n = gamma.dim();
  if (gamma.norm() > 1.0 + 1e-9) throw HypothesisError("spherical_params_for: norm exceeds 1");
  SphericalParams p{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};

  // Strip the global phase so the first nonzero entry is real and positive.
  CVector g = gamma;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(g[k]) > 1e-15) {
      g *= std::conj(g[k]) / std::abs(g[k]);
      break;
    }
  }

  double c = 1.0;  // signed product of the cosines so far
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(c) <= 1e-15) break;
    if (field == Field::real) {
      double s = g[k].real() / c;
      if (s < 0.0 && k > 0) {
        // psi -> pi - psi keeps sin and flips every later coordinate.
        p.psi[k - 1] = kPi - p.psi[k - 1];
        c = -c;
        s = -s;
      }
      p.psi[k] = std::asin(std::clamp(s, 0.0, 1.0));
    } else {
      p.psi[k] = std::asin(std::min(1.0, std::abs(g[k]) / c));
      if (std::abs(g[k]) > 0.0) {
        double w = std::arg(g[k]);
        if (w < 0.0) w += 2.0 * kPi;
        p.omega[k] = w >= 2.0 * kPi ? 0.0 : w;
      }
    }
    c *= std::cos(p.psi[k]);
  }
  return p;
}

HermitianMatrix lift_covariance(const ReducedFrame& frame, const HermitianMatrix& S11, double P) {
  if (S11.dim() != frame.mbar) throw DimensionError("lift_covariance: S11 size differs from mbar");
  const HermitianMatrix K = lemma5_complete({frame.h_low, frame.h_hat, S11, P});
  return HermitianMatrix::congruence(frame.T.matrix(), K);
}

CVector lift_beamformer(const ReducedFrame& frame, const CVector& gamma_tilde, double P) {
  if (gamma_tilde.dim() != frame.mbar) throw DimensionError("lift_beamformer: gamma size differs from mbar");
  if (!(P >= 0.0)) throw FeasibilityError("lift_beamformer: negative power");
  const CVector g = std::sqrt(P) * gamma_tilde;
  // A leftover at rounding level is noise from |gamma| = 1 and would surface
  // in the beam as an O(sqrt(eps)) component.
  double slack = P - g.squared_norm();
  if (slack <= 8 * std::numeric_limits<double>::epsilon() * P) slack = 0.0;
  const double ny = frame.h_hat.norm();

  CVector w = CVector::concat(g, CVector(frame.h_hat.dim()));
  if (ny > 1e-12 && slack > 0.0) {
    // Spend the leftover power on h_hat, co-phased with the low part.
    const cplx q = dot(g, frame.h_low);
    const cplx phase = std::abs(q) > 0.0 ? std::conj(q) / std::abs(q) : cplx(1.0);
    const cplx scale = std::sqrt(slack) / ny * phase;
    for (std::size_t i = 0; i < frame.h_hat.dim(); ++i) w[frame.mbar + i] = scale * frame.h_hat[i];
  }
  return frame.T.apply(w);
}

double theta_hat(double theta01, double theta12, double theta02) {
  const double den = std::sin(theta01) * std::sin(theta12);
  if (den <= 1e-12) return kPi / 2;
  return std::acos(clamp_unit((std::cos(theta02) - std::cos(theta01) * std::cos(theta12)) / den));
}

ClosedFormPowers powers_closed_form(double norm0, double norm1, double norm2, double theta01, double theta12,
                                    double theta02, double P, double psi1, double psi2) {
  const double th = theta_hat(theta01, theta12, theta02);
  const double s1 = std::sin(psi1), c1 = std::cos(psi1);
  const double s2 = std::sin(psi2), c2 = std::cos(psi2);
  const double amp = std::abs(std::cos(theta01) * s1 + std::sin(theta01) * std::cos(th) * c1 * s2) +
                     std::sin(theta01) * std::sin(th) * std::abs(c1 * c2);
  const double z2 = std::cos(theta12) * s1 + std::sin(theta12) * c1 * s2;
  return {P * norm0 * norm0 * amp * amp, P * norm1 * norm1 * s1 * s1, P * norm2 * norm2 * z2 * z2};
}

double signed_angle(const CVector& a, const CVector& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return kPi / 2;
  return std::acos(clamp_unit(dot(a, b).real() / (na * nb)));
}

}  // namespace misosud
