#include "sepcheck/detail/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sepcheck::detail {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Least squares over the selected columns by Householder QR.
std::vector<double> least_squares(std::span<const std::vector<double>> columns,
                                  const std::vector<std::size_t>& selected,
                                  std::span<const double> y) {
  const std::size_t m = y.size();
  const std::size_t k = selected.size();
  std::vector<std::vector<double>> a;
  a.reserve(k);
  for (std::size_t j : selected) a.push_back(columns[j]);
  std::vector<double> rhs(y.begin(), y.end());
  std::vector<double> diag(k, 0.0);

  for (std::size_t j = 0; j < k && j < m; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < m; ++i) norm += a[j][i] * a[j][i];
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = a[j][j] > 0.0 ? -norm : norm;
    // v = x - alpha e_j, stored in place below the diagonal.
    a[j][j] -= alpha;
    const double vnorm2 = norm * norm - 2.0 * alpha * (a[j][j] + alpha) + alpha * alpha;
    diag[j] = alpha;
    if (vnorm2 == 0.0) continue;
    auto reflect = [&](std::vector<double>& col) {
      double s = 0.0;
      for (std::size_t i = j; i < m; ++i) s += a[j][i] * col[i];
      s = 2.0 * s / vnorm2;
      for (std::size_t i = j; i < m; ++i) col[i] -= s * a[j][i];
    };
    for (std::size_t c = j + 1; c < k; ++c) reflect(a[c]);
    reflect(rhs);
  }

  std::vector<double> z(k, 0.0);
  for (std::size_t j = std::min(k, m); j-- > 0;) {
    double s = rhs[j];
    for (std::size_t c = j + 1; c < k; ++c) s -= a[c][j] * z[c];
    z[j] = diag[j] != 0.0 ? s / diag[j] : 0.0;
  }
  return z;
}

}  // namespace

std::vector<double> nnls(std::span<const std::vector<double>> columns,
                         std::span<const double> y) {
  const std::size_t n = columns.size();
  const std::size_t m = y.size();
  std::vector<double> x(n, 0.0);
  std::vector<bool> passive(n, false);

  double scale = std::sqrt(dot(y, y));
  for (const auto& col : columns) scale = std::max(scale, std::sqrt(dot(col, col)));
  const double tol = 1e3 * std::numeric_limits<double>::epsilon() * scale * scale;

  std::vector<double> residual(y.begin(), y.end());
  auto refresh_residual = [&] {
    residual.assign(y.begin(), y.end());
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j] == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) residual[i] -= x[j] * columns[j][i];
    }
  };

  for (std::size_t outer = 0; outer < 3 * n + 3; ++outer) {
    std::size_t best = n;
    double best_grad = tol;
    for (std::size_t j = 0; j < n; ++j) {
      if (passive[j]) continue;
      const double g = dot(columns[j], residual);
      if (g > best_grad) {
        best_grad = g;
        best = j;
      }
    }
    if (best == n) break;
    passive[best] = true;

    for (std::size_t inner = 0; inner < 3 * n + 3; ++inner) {
      std::vector<std::size_t> selected;
      for (std::size_t j = 0; j < n; ++j) {
        if (passive[j]) selected.push_back(j);
      }
      const std::vector<double> z = least_squares(columns, selected, y);
      bool feasible = true;
      for (double v : z) feasible = feasible && v > 0.0;
      if (feasible) {
        for (std::size_t t = 0; t < selected.size(); ++t) x[selected[t]] = z[t];
        break;
      }
      double alpha = 1.0;
      std::size_t blocking = selected.front();
      for (std::size_t t = 0; t < selected.size(); ++t) {
        const std::size_t j = selected[t];
        if (z[t] <= 0.0) {
          const double step = x[j] / (x[j] - z[t]);
          if (step <= alpha) {
            alpha = step;
            blocking = j;
          }
        }
      }
      for (std::size_t t = 0; t < selected.size(); ++t) {
        const std::size_t j = selected[t];
        x[j] += alpha * (z[t] - x[j]);
        if (j == blocking || x[j] <= 0.0) {
          x[j] = 0.0;
          passive[j] = false;
        }
      }
    }
    refresh_residual();
  }
  return x;
}

}  // namespace sepcheck::detail
