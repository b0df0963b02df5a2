#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "misosud/errors.hpp"
#include "misosud/numlin.hpp"
#include "misosud/rankone.hpp"
#include "oracles.hpp"

using namespace misosud;
using namespace oracle_ref;

namespace {

double completion_defect(const UnitaryMatrix& U, const CVector& h) {
  const CVector r = U.apply_adjoint(h);
  double d = std::abs(r[0] - h.norm());
  for (std::size_t i = 1; i < r.dim(); ++i) d = std::max(d, std::abs(r[i]));
  return d;
}

}  // namespace

TEST_CASE("unitary_completion of the first basis vector is the identity") {
  const UnitaryMatrix U = unitary_completion(CVector{1.0, 0.0});
  CHECK(max_abs_diff(U.matrix(), CMatrix::identity(2)) <= 1e-15);
}

TEST_CASE("unitary_completion of e2 maps e2 to the first column") {
  const CVector h{0.0, 1.0};
  const UnitaryMatrix U = unitary_completion(h);
  CHECK(U.unitarity_defect() <= 1e-12);
  CHECK(completion_defect(U, h) <= 1e-12);
  CHECK(std::abs(U(1, 0) - 1.0) <= 1e-12);
}

TEST_CASE("unitary_completion of a random complex 4-vector") {
  std::mt19937_64 rng(7);
  const CVector h = random_vec(rng, 4);
  const UnitaryMatrix U = unitary_completion(h);
  CHECK(U.unitarity_defect() <= 1e-12);
  CHECK(completion_defect(U, h) <= 1e-12 * std::max(1.0, h.norm()));
}

TEST_CASE("unitary_completion holds on 10^4 random inputs of dims 1..8") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  double worst_u = 0.0, worst_c = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const CVector h = random_vec(rng, dim(rng));
    const UnitaryMatrix U = unitary_completion(h);
    worst_u = std::max(worst_u, U.unitarity_defect());
    worst_c = std::max(worst_c, completion_defect(U, h) / std::max(1.0, h.norm()));
  }
  CHECK(worst_u <= 1e-12);
  CHECK(worst_c <= 1e-12);
}

TEST_CASE("unitary_completion of the zero vector is the identity") {
  const UnitaryMatrix U = unitary_completion(CVector(3));
  CHECK(max_abs_diff(U.matrix(), CMatrix::identity(3)) == 0.0);
}

TEST_CASE("eig_hermitian of diag(2, 1)") {
  const std::vector<double> d{2.0, 1.0};
  const auto e = eig_hermitian(HermitianMatrix::diagonal(d));
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-15));
  // A permutation of I, up to phases.
  CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian of [[0, i], [-i, 0]]") {
  CMatrix a(2, 2);
  a(0, 1) = cplx(0, 1);
  a(1, 0) = cplx(0, -1);
  const auto e = eig_hermitian(HermitianMatrix(a));
  CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eig_hermitian of a rank-1 matrix") {
  std::mt19937_64 rng(3);
  const CVector g = random_vec(rng, 5);
  const auto e = eig_hermitian(HermitianMatrix::outer(g));
  for (std::size_t i = 0; i + 1 < 5; ++i) CHECK(std::abs(e.values[i]) <= 1e-12 * g.squared_norm());
  CHECK(e.values[4] == doctest::Approx(g.squared_norm()).epsilon(1e-12));
}

TEST_CASE("eig_hermitian reconstructs, sorts, and preserves the trace") {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 10; ++n) {
    const HermitianMatrix A = random_hermitian(rng, n);
    const auto e = eig_hermitian(A);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    const HermitianMatrix R = compose(e.vectors, e.values);
    CHECK(max_abs_diff(R.matrix(), A.matrix()) <= 1e-10 * std::max(1.0, A.max_abs()));
    CHECK(e.vectors.unitarity_defect() <= 1e-12);
    const double s = std::accumulate(e.values.begin(), e.values.end(), 0.0);
    CHECK(std::abs(s - A.trace()) <= 1e-10 * std::max(1.0, std::abs(A.trace())));
  }
}

TEST_CASE("psd_check examples") {
  CHECK(psd_check(HermitianMatrix::identity(3), 0.0));
  const std::vector<double> d{1.0, -1e-6};
  CHECK_FALSE(psd_check(HermitianMatrix::diagonal(d), 1e-9));

  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) {
    HermitianMatrix K11 = random_psd(rng, 3, 2);
    K11 *= 1.0 / K11.trace();
    const CompletionInput in{random_vec(rng, 3), random_vec(rng, 2), K11, 2.0};
    CHECK(psd_check(lemma5_complete(in), 1e-9));
  }
}

TEST_CASE("project_psd clips negative eigenvalues") {
  const std::vector<double> d{1.0, -1.0};
  const HermitianMatrix B = project_psd(HermitianMatrix::diagonal(d));
  const std::vector<double> want{1.0, 0.0};
  CHECK(max_abs_diff(B.matrix(), HermitianMatrix::diagonal(want).matrix()) <= 1e-15);
}

TEST_CASE("project_psd is idempotent on PSD input") {
  std::mt19937_64 rng(13);
  const HermitianMatrix K = random_psd(rng, 4, 4);
  CHECK(max_abs_diff(project_psd(K).matrix(), K.matrix()) <= 1e-12 * std::max(1.0, K.max_abs()));
}

TEST_CASE("project_psd beats every other eigenvalue truncation") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4;
    const HermitianMatrix A = random_hermitian(rng, n);
    const HermitianMatrix B = project_psd(A);
    CHECK(min_eigenvalue(B) >= -1e-12);
    const double dist = (A - B).frobenius();
    // Every way of zeroing a subset of the eigenvalues and keeping the rest.
    const auto e = eig_hermitian(A);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<double> v = e.values;
      bool psd = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) v[i] = 0.0;
        psd = psd && v[i] >= 0.0;
      }
      if (!psd) continue;
      CHECK(dist <= (A - compose(e.vectors, v)).frobenius() + 1e-12);
    }
  }
}

TEST_CASE("HermitianMatrix symmetrizes small asymmetry and rejects large") {
  CMatrix a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = cplx(0.5, 1e-12);
  a(1, 0) = cplx(0.5, 0.0);
  a(1, 1) = 2.0;
  const HermitianMatrix h(a);
  CHECK(h(0, 1) == std::conj(h(1, 0)));
  a(1, 0) = cplx(0.5, 1e-3);
  CHECK_THROWS_AS(HermitianMatrix{a}, DimensionError);
}

TEST_CASE("numerical_rank counts eigenvalues above the relative threshold") {
  std::mt19937_64 rng(19);
  CHECK(numerical_rank(random_psd(rng, 5, 2), 1e-8) == 2);
  CHECK(numerical_rank(HermitianMatrix::zero(3), 1e-8) == 0);
}
