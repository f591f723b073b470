#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sepcheck/errors.hpp"
#include "sepcheck/linalg.hpp"
#include "sepcheck/oracle.hpp"

namespace sepcheck {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double evaluate(const Polynomial& p, double x) {
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

// Rounding-error scale of evaluate(p, x).
double evaluation_noise(const Polynomial& p, double x) {
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * std::abs(x) + std::abs(p[i]);
  return 32.0 * kEps * acc;
}

Polynomial derivative(const Polynomial& p) {
  Polynomial d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(static_cast<double>(i) * p[i]);
  return d;
}

Complex determinant(std::vector<Complex> a, std::size_t n) {
  Complex det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (a[pivot * n + col] == Complex(0.0)) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
      det = -det;
    }
    det *= a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = a[r * n + col] / a[col * n + col];
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
    }
  }
  return det;
}

// Newton steps that are kept only while they reduce |p|.
double polish(const Polynomial& p, double x) {
  const Polynomial dp = derivative(p);
  double fx = evaluate(p, x);
  for (int iter = 0; iter < 4 && fx != 0.0; ++iter) {
    const double slope = evaluate(dp, x);
    if (slope == 0.0) break;
    const double next = x - fx / slope;
    const double fnext = evaluate(p, next);
    if (!(std::abs(fnext) < std::abs(fx))) break;
    x = next;
    fx = fnext;
  }
  return x;
}

std::vector<double> quadratic_roots(double b, double c) {
  // x^2 + b x + c, complex parts from roundoff are clamped away.
  const double disc = std::max(0.0, b * b - 4.0 * c);
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return {0.0, 0.0};
  std::vector<double> r = {q, c / q};
  std::sort(r.begin(), r.end());
  return r;
}

// Largest real root of x^3 + a2 x^2 + a1 x + a0.
double largest_cubic_root(double a2, double a1, double a0) {
  const double shift = -a2 / 3.0;
  const double p = a1 - a2 * a2 / 3.0;
  const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  double t;
  if (p < 0.0 && 4.0 * p * p * p + 27.0 * q * q <= 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    t = m * std::cos(std::acos(arg) / 3.0);
  } else {
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    const double s = std::sqrt(std::max(0.0, disc));
    t = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
  }
  return polish({a0, a1, a2, 1.0}, t + shift);
}

std::vector<double> cubic_roots(const Polynomial& poly) {
  const double a2 = poly[2];
  const double a1 = poly[1];
  const double a0 = poly[0];
  const double shift = -a2 / 3.0;
  const double p = a1 - a2 * a2 / 3.0;
  const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  const double disc = -(4.0 * p * p * p + 27.0 * q * q);
  if (disc < kCharpolyDiscriminantFloor) return real_roots_by_isolation(poly);

  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
  const double theta = std::acos(arg) / 3.0;
  std::vector<double> roots(3);
  for (int k = 0; k < 3; ++k) {
    const double t = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
    roots[k] = polish(poly, t + shift);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> quartic_roots(const Polynomial& poly) {
  const double c3 = poly[3];
  const double c2 = poly[2];
  const double c1 = poly[1];
  const double c0 = poly[0];
  // y^4 + p y^2 + q y + r with lambda = y - c3/4.
  const double shift = -c3 / 4.0;
  const double p = c2 - 3.0 * c3 * c3 / 8.0;
  const double q = c1 - c3 * c2 / 2.0 + c3 * c3 * c3 / 8.0;
  const double r = c0 - c3 * c1 / 4.0 + c3 * c3 * c2 / 16.0 -
                   3.0 * c3 * c3 * c3 * c3 / 256.0;
  const double disc = 256.0 * r * r * r - 128.0 * p * p * r * r +
                      144.0 * p * q * q * r - 27.0 * q * q * q * q +
                      16.0 * p * p * p * p * r - 4.0 * p * p * p * q * q;
  if (disc < kCharpolyDiscriminantFloor) return real_roots_by_isolation(poly);

  // Resolvent cubic m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0.
  const double m = largest_cubic_root(p, p * p / 4.0 - r, -q * q / 8.0);
  std::vector<double> ys;
  if (m <= 64.0 * kEps * (1.0 + std::abs(p))) {
    // q ~ 0: biquadratic in z = y^2.
    for (double z : quadratic_roots(p, r)) {
      const double y = std::sqrt(std::max(0.0, z));
      ys.push_back(y);
      ys.push_back(-y);
    }
  } else {
    const double s = std::sqrt(2.0 * m);
    for (double y : quadratic_roots(-s, p / 2.0 + m + q / (2.0 * s))) ys.push_back(y);
    for (double y : quadratic_roots(s, p / 2.0 + m - q / (2.0 * s))) ys.push_back(y);
  }
  std::vector<double> roots;
  for (double y : ys) roots.push_back(polish(poly, y + shift));
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

Polynomial characteristic_polynomial(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  // e_k = sum of k x k principal minors; det(lambda I - h) = sum_k (-1)^k e_k lambda^(n-k).
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const std::size_t k = idx.size();
    std::vector<Complex> sub(k * k);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) sub[r * k + c] = h(idx[r], idx[c]);
    }
    e[k] += determinant(std::move(sub), k).real();
  }
  Polynomial p(n + 1);
  for (std::size_t k = 0; k <= n; ++k) p[n - k] = (k % 2 == 0 ? 1.0 : -1.0) * e[k];
  return p;
}

std::vector<double> real_roots_by_isolation(const Polynomial& input) {
  Polynomial p = input;
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  const std::size_t degree = p.size() - 1;
  if (degree == 0) return {};
  if (degree == 1) return {-p[0] / p[1]};

  const std::vector<double> crit = real_roots_by_isolation(derivative(p));

  double bound = 0.0;
  for (std::size_t i = 0; i < degree; ++i) bound = std::max(bound, std::abs(p[i] / p[degree]));
  bound += 1.0;

  // Distinct critical points with multiplicities.
  std::vector<std::pair<double, std::size_t>> points;
  for (double c : crit) {
    if (!points.empty() && points.back().first == c) {
      ++points.back().second;
    } else {
      points.emplace_back(c, 1);
    }
  }

  std::vector<double> roots;
  std::vector<bool> is_root(points.size(), false);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double c = points[i].first;
    if (std::abs(evaluate(p, c)) <= evaluation_noise(p, c)) {
      is_root[i] = true;
      roots.insert(roots.end(), points[i].second + 1, c);
    }
  }

  // p is monotone between consecutive critical points: at most one root each.
  std::vector<double> knots = {-bound};
  for (const auto& [c, mult] : points) knots.push_back(c);
  knots.push_back(bound);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const bool lo_is_root = i > 0 && is_root[i - 1];
    const bool hi_is_root = i < points.size() && is_root[i];
    if (lo_is_root || hi_is_root) continue;
    double lo = knots[i];
    double hi = knots[i + 1];
    const double flo = evaluate(p, lo);
    const double fhi = evaluate(p, hi);
    if ((flo < 0.0) == (fhi < 0.0)) continue;
    for (int iter = 0; iter < 2000; ++iter) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      const double fmid = evaluate(p, mid);
      if (fmid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fmid < 0.0) == (flo < 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    roots.push_back(lo + 0.5 * (hi - lo));
  }

  // A near-multiple root whose value at the critical point came out with the
  // wrong sign leaves no sign change; attribute it to the closest candidates.
  if (roots.size() < degree) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!is_root[i]) candidates.push_back(i);
    }
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t x, std::size_t y) {
      return std::abs(evaluate(p, points[x].first)) < std::abs(evaluate(p, points[y].first));
    });
    for (std::size_t i : candidates) {
      if (roots.size() >= degree) break;
      const std::size_t add = std::min(points[i].second + 1, degree - roots.size());
      roots.insert(roots.end(), add, points[i].first);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.resize(std::min(roots.size(), degree));
  return roots;
}

std::vector<double> charpoly_eigenvalues(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  if (n == 0 || n > kCharpolyMaxDim) {
    throw Error(ErrorKind::DimensionCapExceeded,
                "characteristic polynomial oracle handles 1 <= n <= 4, got " +
                    std::to_string(n));
  }
  const double defect = h.hermiticity_defect();
  if (defect > kHermitianTolerance) {
    throw Error(ErrorKind::NotHermitian,
                "max |h_ij - conj(h_ji)| = " + std::to_string(defect), defect);
  }

  double largest = 0.0;
  for (const Complex& z : h.entries()) largest = std::max(largest, std::abs(z));
  if (largest == 0.0) return std::vector<double>(n, 0.0);
  int exponent = 0;
  std::frexp(largest, &exponent);
  const double scale = std::ldexp(1.0, exponent);

  ComplexMatrix scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      scaled(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i))) / scale;
    }
  }
  const Polynomial poly = characteristic_polynomial(scaled);

  std::vector<double> roots;
  switch (n) {
    case 1: roots = {-poly[0]}; break;
    case 2: {
      // Discriminant straight from the entries, (a - d)^2 + 4|b|^2, avoids
      // the cancellation in c1^2 - 4 c0 for nearly equal roots.
      const double a = scaled(0, 0).real();
      const double d = scaled(1, 1).real();
      const double gap = std::hypot(a - d, 2.0 * std::abs(scaled(0, 1)));
      roots = {0.5 * (a + d - gap), 0.5 * (a + d + gap)};
      break;
    }
    case 3: roots = cubic_roots(poly); break;
    default: roots = quartic_roots(poly); break;
  }
  for (double& r : roots) r *= scale;
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace sepcheck
