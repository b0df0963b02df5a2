#include "misosud/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "misosud/errors.hpp"

namespace misosud {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": dimension mismatch");
}

}  // namespace

// ---- CVector -------------------------------------------------------------

CVector CVector::from_real(std::span<const double> entries) {
  CVector v(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) v[i] = entries[i];
  return v;
}

CVector CVector::basis(std::size_t dim, std::size_t index) {
  CVector v(dim);
  v[index] = 1.0;
  return v;
}

double CVector::squared_norm() const {
  double s = 0.0;
  for (const auto& x : v_) s += std::norm(x);
  return s;
}

double CVector::norm() const { return std::sqrt(squared_norm()); }

bool CVector::is_real(double tol) const {
  return std::all_of(v_.begin(), v_.end(), [tol](const cplx& x) { return std::abs(x.imag()) <= tol; });
}

CVector CVector::segment(std::size_t offset, std::size_t count) const {
  if (offset + count > v_.size()) throw DimensionError("CVector::segment out of range");
  return CVector(std::vector<cplx>(v_.begin() + offset, v_.begin() + offset + count));
}

CVector CVector::concat(const CVector& top, const CVector& bottom) {
  std::vector<cplx> v(top.v_);
  v.insert(v.end(), bottom.v_.begin(), bottom.v_.end());
  return CVector(std::move(v));
}

CVector& CVector::operator+=(const CVector& o) {
  require_same_dim(dim(), o.dim(), "CVector +");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

CVector& CVector::operator-=(const CVector& o) {
  require_same_dim(dim(), o.dim(), "CVector -");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

CVector& CVector::operator*=(cplx s) {
  for (auto& x : v_) x *= s;
  return *this;
}

cplx dot(const CVector& x, const CVector& y) {
  require_same_dim(x.dim(), y.dim(), "dot");
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

// ---- CMatrix -------------------------------------------------------------

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::outer(const CVector& x, const CVector& y) {
  CMatrix m(x.dim(), y.dim());
  for (std::size_t i = 0; i < x.dim(); ++i)
    for (std::size_t j = 0; j < y.dim(); ++j) m(i, j) = x[i] * std::conj(y[j]);
  return m;
}

CMatrix CMatrix::from_columns(std::span<const CVector> cols) {
  if (cols.empty()) return {};
  CMatrix m(cols[0].dim(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    require_same_dim(cols[j].dim(), m.rows(), "CMatrix::from_columns");
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = cols[j][i];
  }
  return m;
}

CVector CMatrix::column(std::size_t j) const {
  CVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("CMatrix::block out of range");
  CMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw DimensionError("CMatrix::set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : a_) m = std::max(m, std::abs(x));
  return m;
}

double CMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& x : a_) s += std::norm(x);
  return std::sqrt(s);
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_dim(rows_, o.rows_, "CMatrix +");
  require_same_dim(cols_, o.cols_, "CMatrix +");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_dim(rows_, o.rows_, "CMatrix -");
  require_same_dim(cols_, o.cols_, "CMatrix -");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& x : a_) x *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a.cols(), b.rows(), "CMatrix *");
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CVector operator*(const CMatrix& a, const CVector& x) {
  require_same_dim(a.cols(), x.dim(), "CMatrix * CVector");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// ---- HermitianMatrix -----------------------------------------------------

HermitianMatrix::HermitianMatrix(CMatrix a, Trusted) : m_(std::move(a)) {
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    for (std::size_t j = i + 1; j < m_.rows(); ++j) {
      const cplx avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
      m_(i, j) = avg;
      m_(j, i) = std::conj(avg);
    }
    m_(i, i) = m_(i, i).real();
  }
}

HermitianMatrix::HermitianMatrix(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("HermitianMatrix: not square");
  const double scale = std::max(1.0, a.max_abs());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.rows(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > 1e-9 * scale)
        throw DimensionError("HermitianMatrix: input is not Hermitian");
  *this = HermitianMatrix(a, Trusted{});
}

HermitianMatrix HermitianMatrix::zero(std::size_t n) { return HermitianMatrix(CMatrix(n, n), Trusted{}); }

HermitianMatrix HermitianMatrix::identity(std::size_t n) { return HermitianMatrix(CMatrix::identity(n), Trusted{}); }

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(std::move(m), Trusted{});
}

HermitianMatrix HermitianMatrix::outer(const CVector& x) { return HermitianMatrix(CMatrix::outer(x, x), Trusted{}); }

HermitianMatrix HermitianMatrix::congruence(const CMatrix& u, const HermitianMatrix& a) {
  return HermitianMatrix(u * a.m_ * u.adjoint(), Trusted{});
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i).real();
  return t;
}

double HermitianMatrix::quad_form(const CVector& x) const {
  require_same_dim(dim(), x.dim(), "quad_form");
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    cplx row = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) row += m_(i, j) * x[j];
    s += (std::conj(x[i]) * row).real();
  }
  return s;
}

HermitianMatrix HermitianMatrix::block(std::size_t offset, std::size_t n) const {
  return HermitianMatrix(m_.block(offset, offset, n, n), Trusted{});
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

// ---- UnitaryMatrix -------------------------------------------------------

UnitaryMatrix::UnitaryMatrix(CMatrix u, double tol) : u_(std::move(u)) {
  if (u_.rows() != u_.cols()) throw DimensionError("UnitaryMatrix: not square");
  if (unitarity_defect() > tol) throw NumericalError("UnitaryMatrix: U^dagger U deviates from I");
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t n) { return UnitaryMatrix(CMatrix::identity(n)); }

CVector UnitaryMatrix::apply_adjoint(const CVector& x) const {
  require_same_dim(dim(), x.dim(), "UnitaryMatrix::apply_adjoint");
  CVector y(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += std::conj(u_(i, j)) * x[i];
    y[j] = s;
  }
  return y;
}

double UnitaryMatrix::unitarity_defect() const {
  const std::size_t n = dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += std::conj(u_(k, i)) * u_(k, j);
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) { return UnitaryMatrix(a.u_ * b.u_); }

UnitaryMatrix unitary_completion(const CVector& h) {
  const std::size_t n = h.dim();
  if (n == 0) throw DimensionError("unitary_completion: empty vector");
  const double nh = h.norm();
  if (nh == 0.0) return UnitaryMatrix::identity(n);

  // Reflector H = I - 2 v v^dagger / (v^dagger v) with v = h + alpha ||h|| e1
  // maps h to -alpha ||h|| e1; right-multiplying by diag(-alpha, 1, ...)
  // makes the first column exactly h / ||h||.
  const cplx alpha = std::abs(h[0]) > 0.0 ? h[0] / std::abs(h[0]) : cplx(1.0);
  CVector v = h;
  v[0] += alpha * nh;
  const double vv = v.squared_norm();
  CMatrix u = CMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u(i, j) -= 2.0 * v[i] * std::conj(v[j]) / vv;
  for (std::size_t i = 0; i < n; ++i) u(i, 0) *= -alpha;
  // First column is h / ||h|| up to rounding; pin it.
  for (std::size_t i = 0; i < n; ++i) u(i, 0) = h[i] / nh;
  return UnitaryMatrix(std::move(u), 1e-12);
}

// ---- eigen ---------------------------------------------------------------

EigenDecomposition eig_hermitian(const HermitianMatrix& herm) {
  const std::size_t n = herm.dim();
  CMatrix a = herm.matrix();
  CMatrix v = CMatrix::identity(n);
  const double scale = std::max(a.frobenius(), std::numeric_limits<double>::min());
  constexpr int kMaxSweeps = 100;

  int sweep = 0;
  for (;; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * scale || off == 0.0) break;
    if (sweep == kMaxSweeps) throw NumericalError("eig_hermitian: Jacobi sweep cap reached");

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double b = std::abs(apq);
        if (b <= 1e-300) continue;
        // a_pq = b e^{i phi}; G = diag(1, e^{-i phi}) R reduces the pair to a
        // real symmetric rotation.
        const cplx ph = apq / b;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * b);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx gpp = c, gpq = s, gqp = -s * std::conj(ph), gqq = c * std::conj(ph);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  CMatrix q(n, n);
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) q(i, k) = v(i, order[k]);
  }
  return {UnitaryMatrix(std::move(q), 1e-10), std::move(values)};
}

double min_eigenvalue(const HermitianMatrix& a) {
  if (a.dim() == 0) return 0.0;
  return eig_hermitian(a).values.front();
}

bool psd_check(const HermitianMatrix& a, double tol) { return a.dim() == 0 || min_eigenvalue(a) >= -tol; }

HermitianMatrix compose(const UnitaryMatrix& q, std::span<const double> values) {
  const std::size_t n = q.dim();
  CMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (values[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx qik = values[k] * q(i, k);
      for (std::size_t j = 0; j < n; ++j) m(i, j) += qik * std::conj(q(j, k));
    }
  }
  return HermitianMatrix::congruence(CMatrix::identity(n), HermitianMatrix(m));
}

HermitianMatrix project_psd(const HermitianMatrix& a) {
  auto eig = eig_hermitian(a);
  for (auto& l : eig.values) l = std::max(l, 0.0);
  return compose(eig.vectors, eig.values);
}

std::size_t numerical_rank(const HermitianMatrix& a, double rel_threshold) {
  if (a.dim() == 0) return 0;
  const double thr = rel_threshold * a.max_abs();
  const auto eig = eig_hermitian(a);
  return static_cast<std::size_t>(
      std::count_if(eig.values.begin(), eig.values.end(), [thr](double l) { return l > thr && l > 0.0; }));
}

}  // namespace misosud
