#pragma once

// Small dense complex linear algebra for the beamforming code. Dimensions
// here are the antenna counts of a transmitter (t <= ~16), so everything is
// a straightforward O(n^3) loop over row-major storage.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace misosud {

using cplx = std::complex<double>;

class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t dim) : v_(dim) {}
  CVector(std::initializer_list<cplx> entries) : v_(entries) {}
  explicit CVector(std::vector<cplx> entries) : v_(std::move(entries)) {}

  static CVector from_real(std::span<const double> entries);
  static CVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  cplx& operator[](std::size_t i) { return v_[i]; }
  const cplx& operator[](std::size_t i) const { return v_[i]; }

  std::span<cplx> entries() { return v_; }
  std::span<const cplx> entries() const { return v_; }

  double squared_norm() const;
  double norm() const;
  bool is_real(double tol = 0.0) const;

  // Contiguous sub-block [offset, offset + count).
  CVector segment(std::size_t offset, std::size_t count) const;
  static CVector concat(const CVector& top, const CVector& bottom);

  CVector& operator+=(const CVector& o);
  CVector& operator-=(const CVector& o);
  CVector& operator*=(cplx s);

  friend CVector operator+(CVector a, const CVector& b) { return a += b; }
  friend CVector operator-(CVector a, const CVector& b) { return a -= b; }
  friend CVector operator*(cplx s, CVector a) { return a *= s; }
  friend CVector operator*(CVector a, cplx s) { return a *= s; }

 private:
  std::vector<cplx> v_;
};

// x^dagger y
cplx dot(const CVector& x, const CVector& y);

// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static CMatrix identity(std::size_t n);
  static CMatrix outer(const CVector& x, const CVector& y);  // x y^dagger
  static CMatrix from_columns(std::span<const CVector> cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  CVector column(std::size_t j) const;
  CMatrix adjoint() const;
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);

  double max_abs() const;
  double frobenius() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);
  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CVector operator*(const CMatrix& a, const CVector& x);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> a_;
};

// Hermitian by construction: the input is symmetrized to (A + A^dagger)/2,
// and inputs whose asymmetry exceeds 1e-9 * max(1, max|a_ij|) are rejected.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& a);

  static HermitianMatrix zero(std::size_t n);
  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix outer(const CVector& x);  // x x^dagger
  // A' = U A U^dagger, symmetrized.
  static HermitianMatrix congruence(const CMatrix& u, const HermitianMatrix& a);

  std::size_t dim() const { return m_.rows(); }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const CMatrix& matrix() const { return m_; }

  double trace() const;
  // Re(x^dagger A x); the imaginary part vanishes for Hermitian A.
  double quad_form(const CVector& x) const;
  HermitianMatrix block(std::size_t offset, std::size_t n) const;
  double max_abs() const { return m_.max_abs(); }
  double frobenius() const { return m_.frobenius(); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

 private:
  struct Trusted {};
  HermitianMatrix(CMatrix a, Trusted);
  CMatrix m_;
};

class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;
  // Throws NumericalError when ||U^dagger U - I||_max > tol.
  explicit UnitaryMatrix(CMatrix u, double tol = 1e-10);

  static UnitaryMatrix identity(std::size_t n);

  std::size_t dim() const { return u_.rows(); }
  const cplx& operator()(std::size_t i, std::size_t j) const { return u_(i, j); }
  const CMatrix& matrix() const { return u_; }
  CVector column(std::size_t j) const { return u_.column(j); }

  CVector apply(const CVector& x) const { return u_ * x; }
  CVector apply_adjoint(const CVector& x) const;
  // ||U^dagger U - I||_max
  double unitarity_defect() const;

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

 private:
  CMatrix u_;
};

// Unitary U whose first column is h/||h||, so U^dagger h = (||h||, 0, ..., 0).
// Built from one Householder reflector with a phase fix on the first column.
// The zero vector maps to the identity.
UnitaryMatrix unitary_completion(const CVector& h);

struct EigenDecomposition {
  UnitaryMatrix vectors;        // columns are eigenvectors
  std::vector<double> values;   // ascending
};

// Cyclic complex Jacobi. Throws NumericalError if the sweep cap is hit.
EigenDecomposition eig_hermitian(const HermitianMatrix& a);

double min_eigenvalue(const HermitianMatrix& a);
bool psd_check(const HermitianMatrix& a, double tol);
// Nearest PSD matrix in Frobenius norm: negative eigenvalues clipped to 0.
HermitianMatrix project_psd(const HermitianMatrix& a);
// Number of eigenvalues above rel_threshold * max|a_ij|.
std::size_t numerical_rank(const HermitianMatrix& a, double rel_threshold);

// Q diag(values) Q^dagger
HermitianMatrix compose(const UnitaryMatrix& q, std::span<const double> values);

}  // namespace misosud
