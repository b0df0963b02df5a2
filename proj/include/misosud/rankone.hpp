#pragma once

// Bordered quadratic form bound and its rank-preserving completion:
//
//   max [x; y]^dagger K [x; y]  over PSD K = [[K11, K21^dagger], [K21, K22]]
//   with K11 fixed and tr(K) <= P.

#include "misosud/numlin.hpp"

namespace misosud {

struct CompletionInput {
  CVector x;          // dim t1
  CVector y;          // dim t2 (may be 0)
  HermitianMatrix K11;  // t1 x t1, PSD
  double P = 0.0;

  // Throws DimensionError, HypothesisError (K11 not PSD) or
  // FeasibilityError (tr(K11) > P).
  void validate() const;
};

// (sqrt(x^dagger K11 x) + ||y|| sqrt(P - tr K11))^2
double lemma5_bound(const CompletionInput& inp);

// A maximizer K* whose upper-left block is K11 and whose rank does not
// exceed max(rank K11, 1).
HermitianMatrix lemma5_complete(const CompletionInput& inp);

}  // namespace misosud
