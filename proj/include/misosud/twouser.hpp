#pragma once

// Two-user MISO interference channel in closed form.
//
//   y1 = h1^dagger x1 + h2^dagger x2 + n1
//   y2 = h3^dagger x1 + h4^dagger x2 + n2
//
// with unit-variance noise, so powers are SNRs.

#include <vector>

#include "misosud/numlin.hpp"
#include "misosud/rate.hpp"
#include "misosud/sample.hpp"

namespace misosud {

struct TwoUserChannel {
  CVector h1, h2, h3, h4;
  double P1 = 0.0;
  double P2 = 0.0;
  Field field = Field::complex;

  // Throws DimensionError / FeasibilityError on broken invariants.
  void validate() const;
};

struct AngleParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double psi1 = 0.0;
  double psi2 = 0.0;
};

struct RatePair {
  double R1 = 0.0;
  double R2 = 0.0;
};

// Angle in [0, pi/2] between the lines spanned by a and b, computed from the
// orthogonal residual so that nearly parallel vectors keep full precision.
// pi/2 if either vector is zero.
double angle_between(const CVector& a, const CVector& b);

struct BeamSolution {
  CVector gamma;
  double value = 0.0;  // |h1^dagger gamma|^2
};

// max |h1^dagger g|^2  s.t.  |h3^dagger g|^2 = z^2, ||g||^2 <= P.
BeamSolution max_signal_given_interference(const CVector& h1, const CVector& h3, double P, double z);

// Both users' angles theta_i for a channel.
AngleParams channel_angles(const TwoUserChannel& ch);

// Samples over psi_i in [0, pi/2 - theta_i] (grid1 x grid2, psi1 outer).
std::vector<RegionSample> two_user_region(const TwoUserChannel& ch, int grid1, int grid2,
                                          LogBase base = LogBase::two);

// Same, with interference caps Q_i on what user i inflicts on the other.
std::vector<RegionSample> interference_limited_region(const TwoUserChannel& ch, double Q1, double Q2,
                                                      int grid1, int grid2, LogBase base = LogBase::two);

// psi upper limit used by interference_limited_region for one user.
double psi_limit(double theta, double P, double cross_norm, double Q);

enum class SumRateArgmax { both, only_second, only_first };  // (P1,P2), (0,P2), (P1,0)

struct ScalarSumRate {
  double Rs = 0.0;
  SumRateArgmax argmax = SumRateArgmax::both;
};

// Sum rate of a scalar interference channel with cross gains a, b, maximized
// over on/off power allocations.
ScalarSumRate scalar_sud_sum_rate(double P1, double P2, double a, double b,
                                  RateConvention conv = {});

// Time/frequency split: user 1 gets fraction alpha of the band.
std::vector<RatePair> fdm_region(const TwoUserChannel& ch, int grid, LogBase base = LogBase::two);

// sqrt((sqrt(1 + 2P) - 1) / P), evaluated without cancellation.
double fdm_zf_threshold(double P);
// True when the ZF rate pair falls inside the FDM region.
bool fdm_beats_zf_condition(double theta, double P);

}  // namespace misosud
