#pragma once

// Reduction of one transmitter's problem
//
//   max h^dagger S h  s.t.  h_j^dagger S h_j <= z_j^2,  tr S <= P,
//
// to the leading mbar = min(t, #interferers) coordinates, plus the spherical
// rank-1 parametrization of that block and the lift back to t dimensions.

#include <span>
#include <vector>

#include "misosud/numlin.hpp"
#include "misosud/rate.hpp"
#include "misosud/sample.hpp"

namespace misosud {

struct ReducedFrame {
  UnitaryMatrix T;              // original = T * reduced
  CVector h_low;                // first mbar coordinates of T^dagger h
  CVector h_hat;                // remaining t - mbar coordinates
  std::vector<CVector> hj_low;  // T^dagger h_j, truncated to mbar (rest is 0)
  std::size_t mbar = 0;

  std::size_t dim() const { return T.dim(); }
};

// Interferer j ends up supported on the first j+1 reduced coordinates.
ReducedFrame reduce_interference_frame(const CVector& h_own, std::span<const CVector> h_interf);

// gamma_k = e^{i omega_k} sin(psi_k) prod_{j<k} cos(psi_j). An empty omega
// list means all zero.
CVector spherical_vector(const SphericalParams& params);

struct SphericalBeam {
  CVector gamma_tilde;
  HermitianMatrix S11;  // P gamma gamma^dagger
};
SphericalBeam spherical_rank_one(double P, const SphericalParams& params);

// Angles reproducing gamma up to a global phase (sign for real vectors).
// Requires ||gamma|| <= 1. Real field keeps omega = 0 and uses psi in [0, pi].
SphericalParams spherical_params_for(const CVector& gamma, Field field);

// T * K* * T^dagger with K* the rank-preserving completion of S11.
HermitianMatrix lift_covariance(const ReducedFrame& frame, const HermitianMatrix& S11, double P);

// Generating vector of the same lift for S11 = P gamma~ gamma~^dagger: the
// rank-1 path used by the sweeps.
CVector lift_beamformer(const ReducedFrame& frame, const CVector& gamma_tilde, double P);

struct ClosedFormPowers {
  double signal = 0.0;
  double z1sq = 0.0;
  double z2sq = 0.0;
};

// Three-user real closed forms in terms of norms and pairwise angles
// (0 = own direct channel, 1 and 2 = the interfered receivers).
ClosedFormPowers powers_closed_form(double norm0, double norm1, double norm2, double theta01, double theta12,
                                    double theta02, double P, double psi1, double psi2);

// Angle between projections of h0 and h2 onto the complement of h1.
double theta_hat(double theta01, double theta12, double theta02);

// acos(Re(a^dagger b) / (|a||b|)) in [0, pi]; pi/2 for a zero vector.
double signed_angle(const CVector& a, const CVector& b);

}  // namespace misosud
