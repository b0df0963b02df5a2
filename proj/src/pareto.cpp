#include "misosud/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>

#include "misosud/errors.hpp"

namespace misosud {

namespace {

bool dominates_or_equals(const double* q, const double* p, std::size_t dim) {
  for (std::size_t k = 0; k < dim; ++k)
    if (q[k] < p[k]) return false;
  return true;
}

// Sort descending lexicographically; ties keep input order so the first of a
// group of duplicates is the one that survives.
std::vector<std::size_t> lex_desc_order(std::span<const double> r, std::size_t n, std::size_t dim) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double x = r[a * dim + k], y = r[b * dim + k];
      if (x != y) return x > y;
    }
    return false;
  });
  return order;
}

std::vector<std::size_t> pareto_2d(std::span<const double> r, std::size_t n) {
  std::vector<std::size_t> keep;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i : lex_desc_order(r, n, 2)) {
    if (r[i * 2 + 1] > best) {
      keep.push_back(i);
      best = r[i * 2 + 1];
    }
  }
  return keep;
}

std::vector<std::size_t> pareto_3d(std::span<const double> r, std::size_t n) {
  // Staircase of the (y, z) projections of the points kept so far: y
  // ascending, z descending.
  std::map<double, double> stair;
  std::vector<std::size_t> keep;
  for (std::size_t i : lex_desc_order(r, n, 3)) {
    const double y = r[i * 3 + 1], z = r[i * 3 + 2];
    auto it = stair.lower_bound(y);
    if (it != stair.end() && it->second >= z) continue;
    keep.push_back(i);
    // Drop entries now covered by (y, z).
    auto hi = stair.upper_bound(y);
    auto lo = hi;
    while (lo != stair.begin()) {
      auto prev = std::prev(lo);
      if (prev->second > z) break;
      lo = prev;
    }
    stair.erase(lo, hi);
    stair[y] = z;
  }
  return keep;
}

std::vector<std::size_t> pareto_nd(std::span<const double> r, std::size_t n, std::size_t dim) {
  std::vector<std::size_t> keep;
  for (std::size_t i : lex_desc_order(r, n, dim)) {
    bool dominated = false;
    for (std::size_t j : keep)
      if (dominates_or_equals(&r[j * dim], &r[i * dim], dim)) {
        dominated = true;
        break;
      }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

double cross(const RatePoint& o, const RatePoint& a, const RatePoint& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double dist(const RatePoint& a, const RatePoint& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

std::vector<std::size_t> pareto_indices(std::span<const double> rates, std::size_t dim) {
  if (dim == 0) throw DimensionError("pareto_indices: zero dimension");
  if (rates.size() % dim != 0) throw DimensionError("pareto_indices: ragged rate buffer");
  const std::size_t n = rates.size() / dim;
  std::vector<std::size_t> keep;
  if (n == 0) return keep;
  if (dim == 1) {
    keep.push_back(lex_desc_order(rates, n, 1).front());
  } else if (dim == 2) {
    keep = pareto_2d(rates, n);
  } else if (dim == 3) {
    keep = pareto_3d(rates, n);
  } else {
    keep = pareto_nd(rates, n, dim);
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

std::vector<std::size_t> pareto_indices(std::span<const RatePoint> points) {
  if (points.empty()) return {};
  const std::size_t dim = points.front().size();
  std::vector<double> flat;
  flat.reserve(points.size() * dim);
  for (const auto& p : points) {
    if (p.size() != dim) throw DimensionError("pareto_indices: points of differing dimension");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return pareto_indices(flat, dim);
}

std::vector<RatePoint> convex_hull_2d(std::vector<RatePoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<RatePoint> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

std::vector<RatePoint> pareto_hull(std::span<const RatePoint> points, HullMode mode) {
  if (points.empty()) throw DimensionError("pareto_hull: empty input");
  const std::size_t dim = points.front().size();
  if (mode == HullMode::pareto || dim != 2) {
    std::vector<RatePoint> out;
    for (std::size_t i : pareto_indices(points)) out.push_back(points[i]);
    return out;
  }
  std::vector<RatePoint> pts;
  pts.reserve(3 * points.size() + 1);
  pts.push_back({0.0, 0.0});
  for (const auto& p : points) {
    pts.push_back(p);
    pts.push_back({p[0], 0.0});
    pts.push_back({0.0, p[1]});
  }
  // Monotone chain starts at the lexicographically smallest point, which is
  // the origin for nonnegative rates.
  return convex_hull_2d(std::move(pts));
}

double max_front_gap(std::span<const RatePoint> front) {
  std::vector<RatePoint> f(front.begin(), front.end());
  std::sort(f.begin(), f.end());
  double gap = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) gap = std::max(gap, dist(f[i - 1], f[i]));
  return gap;
}

double hausdorff(std::span<const RatePoint> a, std::span<const RatePoint> b) {
  auto directed = [](std::span<const RatePoint> from, std::span<const RatePoint> to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, dist(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace misosud
