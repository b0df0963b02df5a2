#pragma once

#include <vector>

#include "misosud/numlin.hpp"

namespace misosud {

// Angles of one user's reduced rank-1 beam: psi in [0, pi], omega in
// [0, 2 pi). omega is all zero for real channels.
struct SphericalParams {
  std::vector<double> psi;
  std::vector<double> omega;

  bool operator==(const SphericalParams&) const = default;
};

// One point of a rate-region sweep.
struct RegionSample {
  std::vector<SphericalParams> params;  // per user
  std::vector<double> rates;            // per user
  std::vector<CVector> beamformers;     // per user, S_i = g g^dagger
  // power[i][j] = |h_ij^dagger g_i|^2: what transmitter i delivers at
  // receiver j (own signal on the diagonal).
  std::vector<std::vector<double>> power;
};

}  // namespace misosud
