#include "misosud/rankone.hpp"

#include <algorithm>
#include <cmath>

#include "misosud/errors.hpp"

namespace misosud {

namespace {

double slack_of(const CompletionInput& inp) { return std::max(0.0, inp.P - inp.K11.trace()); }

}  // namespace

void CompletionInput::validate() const {
  if (K11.dim() != x.dim()) throw DimensionError("completion input: K11 and x sizes differ");
  if (!(P >= 0.0)) throw FeasibilityError("completion input: negative trace budget");
  if (!psd_check(K11, 1e-9 * std::max(1.0, K11.max_abs())))
    throw HypothesisError("completion input: K11 is not positive semidefinite");
  if (K11.trace() > P + 1e-12 * std::max(1.0, P)) throw FeasibilityError("completion input: tr(K11) exceeds P");
}

double lemma5_bound(const CompletionInput& inp) {
  inp.validate();
  const double a = std::sqrt(std::max(0.0, inp.K11.quad_form(inp.x)));
  const double b = inp.y.norm() * std::sqrt(slack_of(inp));
  return (a + b) * (a + b);
}

HermitianMatrix lemma5_complete(const CompletionInput& inp) {
  inp.validate();
  const std::size_t t1 = inp.x.dim();
  const std::size_t t2 = inp.y.dim();
  const double slack = slack_of(inp);
  const double ny = inp.y.norm();
  const double a = std::max(0.0, inp.K11.quad_form(inp.x));

  CMatrix K(t1 + t2, t1 + t2);
  K.set_block(0, 0, inp.K11.matrix());
  if (ny <= 1e-12) return HermitianMatrix(K);

  // Column-block coupling row: K21 = c * y * v^dagger, K22 = (slack/||y||^2) y y^dagger.
  CVector v(t1);
  double c = 0.0;
  const double tr = inp.K11.trace();
  if (a > 1e-12 * inp.x.squared_norm() * tr) {
    // v = K11 x, scaled so that the completion stays rank(K11).
    v = inp.K11.matrix() * inp.x;
    c = std::sqrt(slack) / (ny * std::sqrt(a));
  } else if (t1 > 0 && tr > 0.0) {
    // x sees none of K11: hang y on the dominant eigendirection.
    const auto eig = eig_hermitian(inp.K11);
    const double lmax = std::max(0.0, eig.values.back());
    v = std::sqrt(lmax) * eig.vectors.column(t1 - 1);
    c = lmax > 0.0 ? std::sqrt(slack) / ny : 0.0;
  }

  for (std::size_t i = 0; i < t2; ++i) {
    for (std::size_t j = 0; j < t1; ++j) {
      const cplx k21 = c * inp.y[i] * std::conj(v[j]);
      K(t1 + i, j) = k21;
      K(j, t1 + i) = std::conj(k21);
    }
    for (std::size_t j = 0; j < t2; ++j) K(t1 + i, t1 + j) = (slack / (ny * ny)) * inp.y[i] * std::conj(inp.y[j]);
  }
  return HermitianMatrix(K);
}

}  // namespace misosud
