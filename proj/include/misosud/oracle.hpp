#pragma once

// Independent numerical checks for the closed forms: a general-rank solver,
// a rank-1 local search, a brute-force weighted-sum search and the inertia
// certificate.

#include <cstdint>
#include <span>
#include <vector>

#include "misosud/network.hpp"
#include "misosud/numlin.hpp"
#include "misosud/rate.hpp"
#include "misosud/sample.hpp"

namespace misosud {

enum class CapKind { equality, upper };

struct Cap {
  CVector h;
  double bound = 0.0;  // interference power, i.e. z^2
  CapKind kind = CapKind::upper;
};

// max target^dagger S target  s.t.  S PSD, tr S <= P, caps.
struct ConstrainedMaxProblem {
  CVector target;
  std::vector<Cap> caps;
  double P = 0.0;
  // Real problems are searched over real beams/covariances only.
  Field field = Field::complex;

  std::size_t dim() const { return target.dim(); }
  void validate() const;
};

struct OracleReport {
  double value = 0.0;
  HermitianMatrix S;
  // One entry per cap, then the trace excess, then the most negative
  // eigenvalue (as a positive violation).
  std::vector<double> residuals;
  int iterations = 0;
  bool certified = false;
  std::vector<double> multipliers;  // KKT multipliers of the caps (general solver)
  CVector gamma;                    // rank-1 search only
};

// Proximal projected-gradient ascent; each projection onto the feasible set
// is solved exactly through its dual (one multiplier per cap).
// Throws FeasibilityError when the caps cannot be met within the budget.
OracleReport general_rank_solve(const ConstrainedMaxProblem& p, double tol = 1e-8, int max_iter = 200);

// Multi-start augmented-Lagrangian BFGS over beams g with S = g g^dagger.
// Deterministic for a given seed.
OracleReport rank_one_search(const ConstrainedMaxProblem& p, int starts = 20, std::uint64_t seed = 1);

// Largest sum mu_i R_i over per-user angle grids (`resolution` points per
// angle), by exact branch and bound over the grid.
RegionSample weighted_sum_boundary(const MisoNetwork& net, std::span<const double> mu, int resolution,
                                   LogBase base = LogBase::two);

// Default grid resolution per angle for a given user count.
int default_resolution(std::size_t users);

// C = H diag(-1, lambda) H^dagger with H = [target, caps...]; true iff C has
// at most one eigenvalue below -1e-9 * max|C_ij|.
bool kkt_inertia_check(const CVector& target, std::span<const CVector> caps, std::span<const double> lambdas);

}  // namespace misosud
