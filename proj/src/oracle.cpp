#include "misosud/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "misosud/errors.hpp"
#include "misosud/region.hpp"

namespace misosud {

namespace {

using RealVec = std::vector<double>;

// Gaussian elimination with partial pivoting on a dense n x n system.
bool solve_dense(RealVec a, RealVec b, std::size_t n, RealVec& x) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-300) return false;
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
    x[r] = s / a[r * n + r];
  }
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double frob_diff2(const HermitianMatrix& a, const HermitianMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) s += std::norm(a(i, j) - b(i, j));
  return s;
}

// Projection onto {S PSD, tr S <= P} and onto that set intersected with the
// caps, the latter through the dual
//   max_nu  min_{X in K} 1/2 |X - Y|^2 + sum nu_j (b_j^dagger X b_j - c_j),
// whose inner minimizer is X(nu) = Pi_K(Y - sum nu_j b_j b_j^dagger).
class CapProjector {
 public:
  explicit CapProjector(const ConstrainedMaxProblem& p) : p_(p) {
    for (const auto& c : p.caps) {
      B_.push_back(HermitianMatrix::outer(c.h));
      bmax_ = std::max(bmax_, c.h.squared_norm());
      lip_ += c.h.squared_norm() * c.h.squared_norm();
      cmax_ = std::max(cmax_, c.bound);
    }
  }

  struct Result {
    HermitianMatrix X;
    RealVec nu;
    bool converged = false;
  };

  HermitianMatrix project_K(const HermitianMatrix& Y) const {
    auto eig = eig_hermitian(Y);
    auto& w = eig.values;
    double sum = 0.0;
    for (auto& l : w) sum += (l = std::max(l, 0.0));
    if (sum > p_.P) {
      // Euclidean projection of the spectrum onto {l >= 0, sum l <= P}.
      RealVec u(w);
      std::sort(u.rbegin(), u.rend());
      double css = 0.0, tau = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        css += u[k];
        const double t = (css - p_.P) / static_cast<double>(k + 1);
        if (u[k] - t > 0.0) tau = t;
      }
      for (auto& l : w) l = std::max(l - tau, 0.0);
    }
    return compose(eig.vectors, w);
  }

  HermitianMatrix X_of(const HermitianMatrix& Y, const RealVec& nu) const {
    HermitianMatrix Z = Y;
    for (std::size_t j = 0; j < B_.size(); ++j)
      if (nu[j] != 0.0) Z -= nu[j] * B_[j];
    return project_K(Z);
  }

  RealVec gaps(const HermitianMatrix& X) const {
    RealVec g(B_.size());
    for (std::size_t j = 0; j < B_.size(); ++j) g[j] = X.quad_form(p_.caps[j].h) - p_.caps[j].bound;
    return g;
  }

  Result project(const HermitianMatrix& Y, RealVec nu) const {
    const std::size_t k = B_.size();
    if (k == 0) return {project_K(Y), {}, true};
    // Gap accuracy is limited by cancellation in Y - sum nu B.
    const double tol = 1e-13 * std::max(1.0, cmax_) + 1e-15 * Y.frobenius() * bmax_ * 10.0;

    auto eq = [&](std::size_t j) { return p_.caps[j].kind == CapKind::equality; };
    auto dual = [&](const HermitianMatrix& X, const RealVec& n, const RealVec& g) {
      double v = 0.5 * frob_diff2(X, Y);
      for (std::size_t j = 0; j < k; ++j) v += n[j] * g[j];
      return v;
    };

    Result r;
    for (int it = 0; it < 100; ++it) {
      HermitianMatrix X = X_of(Y, nu);
      const RealVec g = gaps(X);
      const double val = dual(X, nu, g);

      double worst = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const bool pinned = !eq(j) && nu[j] <= 0.0 && g[j] < 0.0;
        if (!pinned) worst = std::max(worst, std::abs(g[j]));
      }
      r.X = std::move(X);
      r.nu = nu;
      if (worst <= tol) {
        r.converged = true;
        return r;
      }

      // Finite-difference Jacobian of the gaps (Hessian of the dual).
      double nmax = 1.0;
      for (double v : nu) nmax = std::max(nmax, std::abs(v));
      const double e = 1e-7 * nmax;
      RealVec J(k * k);
      double jmax = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        RealVec n2 = nu;
        n2[c] += e;
        const RealVec g2 = gaps(X_of(Y, n2));
        for (std::size_t rr = 0; rr < k; ++rr) {
          J[rr * k + c] = (g2[rr] - g[rr]) / e;
          jmax = std::max(jmax, std::abs(J[rr * k + c]));
        }
      }

      std::vector<std::size_t> free;
      for (std::size_t j = 0; j < k; ++j)
        if (eq(j) || nu[j] > 0.0 || g[j] > 0.0) free.push_back(j);
      // Newton on the free multipliers; plain ascent with step 1/L when the
      // Newton step does not improve (L bounds the dual curvature).
      RealVec newton(k, 0.0), ascent(k, 0.0);
      const std::size_t nf = free.size();
      RealVec Jf(nf * nf), rhs(nf), sol;
      for (std::size_t a = 0; a < nf; ++a) {
        rhs[a] = -g[free[a]];
        for (std::size_t b = 0; b < nf; ++b) Jf[a * nf + b] = J[free[a] * k + free[b]];
        Jf[a * nf + a] -= 1e-10 * std::max(jmax, lip_);
      }
      const bool have_newton = solve_dense(Jf, rhs, nf, sol);
      for (std::size_t a = 0; a < nf; ++a) {
        if (have_newton) newton[free[a]] = sol[a];
        ascent[free[a]] = g[free[a]] / lip_;
      }

      bool moved = false;
      for (const RealVec* step : {&newton, &ascent}) {
        if (step == &newton && !have_newton) continue;
        for (double alpha = 1.0; alpha > 1e-10 && !moved; alpha *= 0.5) {
          RealVec n2 = nu;
          for (std::size_t j = 0; j < k; ++j) {
            n2[j] += alpha * (*step)[j];
            if (!eq(j)) n2[j] = std::max(n2[j], 0.0);
          }
          if (n2 == nu) break;
          const HermitianMatrix X2 = X_of(Y, n2);
          if (dual(X2, n2, gaps(X2)) > val) {
            moved = true;
            nu = std::move(n2);
          }
        }
        if (moved) break;
      }
      if (!moved) break;
    }
    r.X = X_of(Y, nu);
    r.nu = nu;
    return r;
  }

 private:
  const ConstrainedMaxProblem& p_;
  std::vector<HermitianMatrix> B_;
  double bmax_ = 0.0;
  double cmax_ = 0.0;
  double lip_ = 1e-300;
};

RealVec residuals_of(const ConstrainedMaxProblem& p, const HermitianMatrix& S) {
  RealVec r;
  for (const auto& c : p.caps) {
    const double g = S.quad_form(c.h) - c.bound;
    r.push_back(c.kind == CapKind::equality ? std::abs(g) : std::max(0.0, g));
  }
  r.push_back(std::max(0.0, S.trace() - p.P));
  r.push_back(std::max(0.0, -min_eigenvalue(S)));
  return r;
}

double residual_scale(const ConstrainedMaxProblem& p) {
  double s = std::max(1.0, p.P);
  for (const auto& c : p.caps) s = std::max(s, c.bound);
  return s;
}

// x^T M x = z^dagger H z for the real coordinates of z.
struct RealQuad {
  std::size_t n = 0;
  RealVec M;

  RealQuad(const HermitianMatrix& H, bool real_only) {
    const std::size_t t = H.dim();
    n = real_only ? t : 2 * t;
    M.assign(n * n, 0.0);
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) {
        const cplx h = H(i, j);
        M[i * n + j] = h.real();
        if (!real_only) {
          M[(i + t) * n + (j + t)] = h.real();
          M[i * n + (j + t)] = -h.imag();
          M[(i + t) * n + j] = h.imag();
        }
      }
  }

  // Returns x^T M x and writes M x.
  double apply(const RealVec& x, RealVec& mx) const {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += M[i * n + j] * x[j];
      mx[i] = s;
      v += x[i] * s;
    }
    return v;
  }
};

CVector to_complex(const RealVec& x, std::size_t t, bool real_only) {
  CVector g(t);
  for (std::size_t i = 0; i < t; ++i) g[i] = real_only ? cplx(x[i]) : cplx(x[i], x[i + t]);
  return g;
}

// Dense BFGS with Armijo backtracking.
int bfgs(const std::function<double(const RealVec&, RealVec&)>& f, RealVec& x, int max_iter) {
  const std::size_t n = x.size();
  RealVec H(n * n, 0.0), g(n), g2(n), d(n), x2(n);
  auto reset = [&] {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
  };
  reset();
  double fx = f(x, g);
  int it = 0;
  for (; it < max_iter; ++it) {
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    if (gmax <= 1e-12) break;
    double gd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s -= H[i * n + j] * g[j];
      d[i] = s;
      gd += g[i] * s;
    }
    if (gd >= 0.0) {
      reset();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      gd = 0.0;
      for (std::size_t i = 0; i < n; ++i) gd -= g[i] * g[i];
    }
    double alpha = 1.0, f2 = 0.0;
    bool ok = false;
    for (; alpha > 1e-16; alpha *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) x2[i] = x[i] + alpha * d[i];
      f2 = f(x2, g2);
      if (f2 <= fx + 1e-4 * alpha * gd) {
        ok = true;
        break;
      }
    }
    if (!ok) break;
    RealVec s(n), y(n);
    double sy = 0.0, ss = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x2[i] - x[i];
      y[i] = g2[i] - g[i];
      sy += s[i] * y[i];
      ss += s[i] * s[i];
      yy += y[i] * y[i];
    }
    const double df = fx - f2;
    x = x2;
    g = g2;
    fx = f2;
    if (sy > 1e-12 * std::sqrt(ss * yy)) {
      // H <- (I - r s y^T) H (I - r y s^T) + r s s^T
      const double r = 1.0 / sy;
      RealVec Hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Hy[i] += H[i * n + j] * y[j];
      double yHy = 0.0;
      for (std::size_t i = 0; i < n; ++i) yHy += y[i] * Hy[i];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          H[i * n + j] += -r * (Hy[i] * s[j] + s[i] * Hy[j]) + (r * r * yHy + r) * s[i] * s[j];
    } else {
      reset();
    }
    if (df >= 0.0 && df <= 1e-16 * std::max(1.0, std::abs(fx))) break;
  }
  return it;
}

// The projection of 0 is feasible iff the constraint set is.
auto feasibility_prepass(const ConstrainedMaxProblem& p, const CapProjector& proj, double scale) {
  auto first = proj.project(HermitianMatrix::zero(p.dim()), RealVec(p.caps.size(), 0.0));
  for (double v : residuals_of(p, first.X))
    if (v > 1e-6 * scale) throw FeasibilityError("caps cannot be met within the trace budget");
  return first;
}

}  // namespace

void ConstrainedMaxProblem::validate() const {
  if (target.empty()) throw DimensionError("problem: empty target");
  if (!(P >= 0.0) || !std::isfinite(P)) throw FeasibilityError("problem: trace budget must be finite and >= 0");
  for (const auto& c : caps) {
    if (c.h.dim() != target.dim()) throw DimensionError("problem: cap dimension differs from target");
    if (!(c.bound >= 0.0) || !std::isfinite(c.bound)) throw FeasibilityError("problem: cap bounds must be >= 0");
  }
  if (field == Field::real) {
    bool real = target.is_real();
    for (const auto& c : caps) real = real && c.h.is_real();
    if (!real) throw HypothesisError("problem: real field with complex vectors");
  }
}

OracleReport general_rank_solve(const ConstrainedMaxProblem& p, double tol, int max_iter) {
  p.validate();
  const std::size_t t = p.dim();
  const std::size_t k = p.caps.size();
  const CapProjector proj(p);
  const double scale = residual_scale(p);

  auto first = feasibility_prepass(p, proj, scale);

  const HermitianMatrix A = HermitianMatrix::outer(p.target);
  const double a = std::max(p.target.squared_norm(), 1e-300);
  const double eta0 = std::max(p.P, 1e-12) / a;
  double eta = eta0;
  const double eta_max = 1e4 * eta0;

  OracleReport rep;
  HermitianMatrix S = first.X;
  RealVec nu = first.nu;
  double f_prev = -std::numeric_limits<double>::infinity();
  int stable = 0;
  bool converged = false;
  double eta_used = eta;
  int it = 0;
  for (; it < max_iter; ++it) {
    auto r = proj.project(S + eta * A, nu);
    S = std::move(r.X);
    nu = std::move(r.nu);
    eta_used = eta;
    const double f = S.quad_form(p.target);
    stable = std::abs(f - f_prev) <= 1e-11 * std::max(1.0, std::abs(f)) && r.converged ? stable + 1 : 0;
    f_prev = f;
    if (stable >= 3 && eta >= 1e2 * eta0) {
      converged = true;
      break;
    }
    if (eta < eta_max) {
      eta *= 2.0;
      for (auto& v : nu) v *= 2.0;
    }
  }

  rep.S = S;
  rep.value = S.quad_form(p.target);
  rep.residuals = residuals_of(p, S);
  rep.iterations = it;
  rep.multipliers.resize(k);
  for (std::size_t j = 0; j < k; ++j) rep.multipliers[j] = nu[j] / eta_used;

  bool ok = converged;
  for (double v : rep.residuals) ok = ok && v <= tol * scale;
  const bool signed_ok = std::all_of(rep.multipliers.begin(), rep.multipliers.end(), [](double l) { return l >= 0.0; });
  if (ok && signed_ok) {
    std::vector<CVector> hs;
    for (const auto& c : p.caps) hs.push_back(c.h);
    ok = kkt_inertia_check(p.target, hs, rep.multipliers);
  }
  rep.certified = ok;
  return rep;
}

OracleReport rank_one_search(const ConstrainedMaxProblem& p, int starts, std::uint64_t seed) {
  p.validate();
  if (starts < 1) throw DimensionError("rank_one_search: need at least one start");
  const std::size_t t = p.dim();
  const bool real_only = p.field == Field::real;
  const std::size_t k = p.caps.size();

  if (!p.caps.empty()) feasibility_prepass(p, CapProjector(p), residual_scale(p));

  OracleReport rep;
  if (p.P == 0.0) {
    bool feasible = true;
    for (const auto& c : p.caps) feasible = feasible && (c.kind == CapKind::upper || c.bound <= 1e-12);
    if (!feasible) throw FeasibilityError("rank_one_search: equality caps unreachable with zero power");
    rep.gamma = CVector(t);
    rep.S = HermitianMatrix::zero(t);
    rep.residuals = residuals_of(p, rep.S);
    rep.certified = true;
    return rep;
  }

  const RealQuad A(HermitianMatrix::outer(p.target), real_only);
  std::vector<RealQuad> B;
  RealVec sc(k);
  for (std::size_t j = 0; j < k; ++j) {
    B.emplace_back(HermitianMatrix::outer(p.caps[j].h), real_only);
    sc[j] = std::max({p.caps[j].bound, p.P * p.caps[j].h.squared_norm(), 1e-300});
  }
  const double sf = std::max(p.P * p.target.squared_norm(), 1e-300);
  const std::size_t n = A.n;

  // Constraint values (normalized): caps, then the power budget (<= 0).
  RealVec mu(k + 1, 0.0);
  double rho = 10.0;
  auto is_eq = [&](std::size_t j) { return j < k && p.caps[j].kind == CapKind::equality; };
  RealVec mx(n), cvals(k + 1);
  std::vector<RealVec> grads(k + 1, RealVec(n));

  auto constraints = [&](const RealVec& x) {
    for (std::size_t j = 0; j < k; ++j) {
      cvals[j] = (B[j].apply(x, grads[j]) - p.caps[j].bound) / sc[j];
      for (auto& v : grads[j]) v *= 2.0 / sc[j];
    }
    double xx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      xx += x[i] * x[i];
      grads[k][i] = 2.0 * x[i] / p.P;
    }
    cvals[k] = (xx - p.P) / p.P;
  };
  auto lagrangian = [&](const RealVec& x, RealVec& g) {
    const double f = A.apply(x, mx) / sf;
    for (std::size_t i = 0; i < n; ++i) g[i] = -2.0 * mx[i] / sf;
    double L = -f;
    constraints(x);
    for (std::size_t j = 0; j <= k; ++j) {
      double w;
      if (is_eq(j)) {
        L += mu[j] * cvals[j] + 0.5 * rho * cvals[j] * cvals[j];
        w = mu[j] + rho * cvals[j];
      } else {
        const double m = std::max(0.0, mu[j] + rho * cvals[j]);
        L += (m * m - mu[j] * mu[j]) / (2.0 * rho);
        w = m;
      }
      if (w != 0.0)
        for (std::size_t i = 0; i < n; ++i) g[i] += w * grads[j][i];
    }
    return L;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double feas_tol = 1e-9;

  double best = -std::numeric_limits<double>::infinity();
  double least_violation = std::numeric_limits<double>::infinity();
  CVector best_gamma, fallback;
  int total_iter = 0;

  for (int s = 0; s < starts; ++s) {
    RealVec x(n);
    double nx = 0.0;
    for (auto& v : x) {
      v = normal(rng);
      nx += v * v;
    }
    for (auto& v : x) v *= std::sqrt(p.P / nx);

    std::fill(mu.begin(), mu.end(), 0.0);
    rho = 10.0;
    double viol_prev = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < 60; ++outer) {
      total_iter += bfgs(lagrangian, x, 500);
      constraints(x);
      double viol = 0.0;
      for (std::size_t j = 0; j <= k; ++j) viol = std::max(viol, is_eq(j) ? std::abs(cvals[j]) : std::max(0.0, cvals[j]));
      for (std::size_t j = 0; j <= k; ++j)
        mu[j] = is_eq(j) ? mu[j] + rho * cvals[j] : std::max(0.0, mu[j] + rho * cvals[j]);
      if (viol < 1e-14) break;
      if (viol > 0.25 * viol_prev) rho = std::min(rho * 10.0, 1e12);
      viol_prev = viol;
    }

    CVector g = to_complex(x, t, real_only);
    // Repair what can be repaired by shrinking: budget and upper caps.
    double shrink = std::min(1.0, std::sqrt(p.P) / std::max(g.norm(), 1e-300));
    for (const auto& c : p.caps) {
      const double z = std::norm(dot(c.h, g));
      if (c.kind == CapKind::upper && z > c.bound) shrink = std::min(shrink, std::sqrt(c.bound / z));
    }
    g *= shrink;
    double viol = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const auto& c = p.caps[j];
      const double gap = std::norm(dot(c.h, g)) - c.bound;
      viol = std::max(viol, (c.kind == CapKind::equality ? std::abs(gap) : std::max(0.0, gap)) / sc[j]);
    }
    const double v = std::norm(dot(p.target, g));
    if (viol <= feas_tol) {
      if (v > best) {
        best = v;
        best_gamma = g;
      }
    } else if (viol < least_violation) {
      least_violation = viol;
      fallback = g;
    }
  }

  rep.certified = !best_gamma.empty();
  rep.gamma = rep.certified ? best_gamma : fallback;
  rep.S = HermitianMatrix::outer(rep.gamma);
  rep.value = std::norm(dot(p.target, rep.gamma));
  rep.residuals = residuals_of(p, rep.S);
  rep.iterations = total_iter;
  return rep;
}

int default_resolution(std::size_t users) { return users <= 2 ? 181 : 41; }

RegionSample weighted_sum_boundary(const MisoNetwork& net, std::span<const double> mu, int resolution,
                                   LogBase base) {
  const std::size_t m = net.users();
  if (mu.size() != m) throw DimensionError("weighted_sum_boundary: one weight per user");
  if (std::any_of(mu.begin(), mu.end(), [](double w) { return !(w >= 0.0); }) ||
      std::all_of(mu.begin(), mu.end(), [](double w) { return w == 0.0; }))
    throw HypothesisError("weighted_sum_boundary: weights must be >= 0 and not all zero");
  if (resolution < 2) throw DimensionError("weighted_sum_boundary: resolution must be >= 2");
  const RateConvention conv{net.field(), base};

  struct Choice {
    SphericalParams params;
    RealVec power;  // at each receiver
  };
  std::vector<UserFrame> frames;
  std::vector<std::vector<Choice>> table(m);
  RealVec best_signal(m, 0.0);
  for (std::size_t u = 0; u < m; ++u) {
    frames.push_back(make_user_frame(net, u));
    const auto& uf = frames.back();
    std::vector<SphericalParams> grid =
        uf.P == 0.0 ? std::vector<SphericalParams>{{RealVec(uf.angles(), 0.0), RealVec(uf.angles(), 0.0)}}
                    : angle_grid(uf.angles(), resolution, net.field() == Field::complex);
    for (auto& prm : grid) {
      const CVector g = user_beamformer(uf, prm);
      Choice c{std::move(prm), RealVec(m)};
      for (std::size_t i = 0; i < m; ++i) c.power[i] = std::norm(dot(net.h(u, i), g));
      best_signal[u] = std::max(best_signal[u], c.power[u]);
      table[u].push_back(std::move(c));
    }
  }

  // Depth-first over users. A partial choice is bounded by giving every
  // undecided user its best signal and no interference from undecided users.
  std::vector<std::size_t> pick(m, 0), best_pick(m, 0);
  double best = -std::numeric_limits<double>::infinity();
  RealVec interference(m, 0.0);

  std::function<void(std::size_t)> descend = [&](std::size_t d) {
    double bound = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mu[i] == 0.0) continue;
      const double sig = i < d ? table[i][pick[i]].power[i] : best_signal[i];
      bound += mu[i] * conv.rate(sig, interference[i]);
    }
    if (bound <= best) return;
    if (d == m) {
      best = bound;  // all users decided: the bound is the objective
      best_pick = pick;
      return;
    }
    for (std::size_t o = 0; o < table[d].size(); ++o) {
      pick[d] = o;
      const auto& pw = table[d][o].power;
      for (std::size_t i = 0; i < m; ++i)
        if (i != d) interference[i] += pw[i];
      descend(d + 1);
      for (std::size_t i = 0; i < m; ++i)
        if (i != d) interference[i] -= pw[i];
    }
  };
  descend(0);

  std::vector<SphericalParams> params;
  for (std::size_t u = 0; u < m; ++u) params.push_back(table[u][best_pick[u]].params);
  return build_sample(net, frames, params, base);
}

bool kkt_inertia_check(const CVector& target, std::span<const CVector> caps, std::span<const double> lambdas) {
  if (caps.size() != lambdas.size()) throw DimensionError("kkt_inertia_check: one multiplier per cap");
  for (const auto& c : caps)
    if (c.dim() != target.dim()) throw DimensionError("kkt_inertia_check: dimension mismatch");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw HypothesisError("kkt_inertia_check: multipliers must be >= 0");

  HermitianMatrix C = HermitianMatrix::outer(target);
  C *= -1.0;
  for (std::size_t j = 0; j < caps.size(); ++j) C += lambdas[j] * HermitianMatrix::outer(caps[j]);
  const double thr = 1e-9 * C.max_abs();
  const auto vals = eig_hermitian(C).values;
  return std::count_if(vals.begin(), vals.end(), [thr](double l) { return l < -thr; }) <= 1;
}

}  // namespace misosud
