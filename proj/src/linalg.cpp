#include "sepcheck/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sepcheck/detail/jacobi.hpp"
#include "sepcheck/errors.hpp"

namespace sepcheck {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) {
          out(i * nb + k, j * nb + l) = aij * b(k, l);
        }
      }
    }
  }
  return out;
}

namespace detail {

std::vector<double> jacobi_symmetric(std::vector<double>& a, std::size_t n,
                                     std::vector<double>* vectors) {
  auto at = [&a, n](std::size_t r, std::size_t c) -> double& {
    return a[r * n + c];
  };
  if (vectors != nullptr) {
    vectors->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) (*vectors)[i * n + i] = 1.0;
  }

  double total = 0.0;
  for (double x : a) total += x * x;
  const double target = kJacobiRelativeTolerance * std::sqrt(total);

  auto off_norm = [&] {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (r != c) sum += at(r, c) * at(r, c);
      }
    }
    return std::sqrt(sum);
  };

  int sweep = 0;
  while (off_norm() > target) {
    if (sweep++ == kJacobiMaxSweeps) {
      throw Error(ErrorKind::NoConvergence,
                  "Jacobi did not converge in " +
                      std::to_string(kJacobiMaxSweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          at(r, p) = at(p, r) = c * arp - s * arq;
          at(r, q) = at(q, r) = s * arp + c * arq;
        }
        if (vectors != nullptr) {
          auto& v = *vectors;
          for (std::size_t r = 0; r < n; ++r) {
            const double vrp = v[r * n + p];
            const double vrq = v[r * n + q];
            v[r * n + p] = c * vrp - s * vrq;
            v[r * n + q] = s * vrp + c * vrq;
          }
        }
      }
    }
  }

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = at(i, i);
  return diag;
}

namespace {

// [[Re, -Im], [Im, Re]] of (h + h^dagger)/2, after the Hermiticity check.
std::vector<double> real_embedding(const ComplexMatrix& h) {
  const double defect = h.hermiticity_defect();
  if (defect > kHermitianTolerance) {
    throw Error(ErrorKind::NotHermitian,
                "max |h_ij - conj(h_ji)| = " + std::to_string(defect), defect);
  }
  const std::size_t n = h.dim();
  const std::size_t m = 2 * n;
  std::vector<double> a(m * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex z = 0.5 * (h(i, j) + std::conj(h(j, i)));
      a[i * m + j] = z.real();
      a[i * m + (j + n)] = -z.imag();
      a[(i + n) * m + j] = z.imag();
      a[(i + n) * m + (j + n)] = z.real();
    }
  }
  return a;
}

}  // namespace

Eigenpairs hermitian_eigenpairs(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  const std::size_t m = 2 * n;
  std::vector<double> a = real_embedding(h);
  std::vector<double> v;
  const std::vector<double> diag = jacobi_symmetric(a, m, &v);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

  Eigenpairs out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values.push_back(0.5 * (diag[order[2 * k]] + diag[order[2 * k + 1]]));
    // A real eigenvector (x; y) of the embedding gives h (x + iy) = lambda (x + iy).
    const std::size_t col = order[2 * k];
    std::vector<Complex> vec(n);
    for (std::size_t i = 0; i < n; ++i) {
      vec[i] = Complex(v[i * m + col], v[(i + n) * m + col]);
    }
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

}  // namespace detail

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  const std::size_t m = 2 * n;
  std::vector<double> a = detail::real_embedding(h);
  std::vector<double> diag = detail::jacobi_symmetric(a, m, nullptr);
  std::sort(diag.begin(), diag.end());
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = 0.5 * (diag[2 * k] + diag[2 * k + 1]);
  }
  return values;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t da,
                            std::size_t db, Subsystem keep) {
  if (da == 0 || db == 0 || da * db != m.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "subsystem dims " + std::to_string(da) + "x" +
                    std::to_string(db) + " do not match matrix dim " +
                    std::to_string(m.dim()));
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out(da);
    for (std::size_t r = 0; r < da; ++r) {
      for (std::size_t c = 0; c < da; ++c) {
        Complex sum = 0.0;
        for (std::size_t mu = 0; mu < db; ++mu) sum += m(r * db + mu, c * db + mu);
        out(r, c) = sum;
      }
    }
    return out;
  }
  ComplexMatrix out(db);
  for (std::size_t mu = 0; mu < db; ++mu) {
    for (std::size_t nu = 0; nu < db; ++nu) {
      Complex sum = 0.0;
      for (std::size_t r = 0; r < da; ++r) sum += m(r * db + mu, r * db + nu);
      out(mu, nu) = sum;
    }
  }
  return out;
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv.at(perm[k]) = k;
  return inv;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m,
                                 std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm) {
  const std::size_t k = dims.size();
  if (perm.size() != k) {
    throw Error(ErrorKind::DimensionMismatch,
                "permutation length differs from factor count");
  }
  std::vector<bool> seen(k, false);
  for (std::size_t p : perm) {
    if (p >= k || seen[p]) {
      throw Error(ErrorKind::DimensionMismatch, "not a permutation of factors");
    }
    seen[p] = true;
  }
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw Error(ErrorKind::DimensionMismatch, "zero factor dimension");
    total *= d;
  }
  if (total != m.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "factor dims multiply to " + std::to_string(total) +
                    ", matrix dim is " + std::to_string(m.dim()));
  }

  // Row-major strides of the output factor layout.
  std::vector<std::size_t> out_stride(k);
  {
    std::size_t s = 1;
    for (std::size_t j = k; j-- > 0;) {
      out_stride[j] = s;
      s *= dims[perm[j]];
    }
  }
  // Stride in the output for input factor i.
  std::vector<std::size_t> stride_of_input(k);
  for (std::size_t j = 0; j < k; ++j) stride_of_input[perm[j]] = out_stride[j];

  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digits(k, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t target = 0;
    for (std::size_t i = 0; i < k; ++i) target += digits[i] * stride_of_input[i];
    map[flat] = target;
    for (std::size_t i = k; i-- > 0;) {
      if (++digits[i] < dims[i]) break;
      digits[i] = 0;
    }
  }

  ComplexMatrix out(total);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) out(map[r], map[c]) = m(r, c);
  }
  return out;
}

}  // namespace sepcheck
