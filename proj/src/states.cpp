#include "sepcheck/states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "sepcheck/errors.hpp"
#include "sepcheck/rng.hpp"

namespace sepcheck {

namespace {

void require_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "x = " + std::to_string(x) + " outside [0, 1]", x);
  }
}

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  ComplexMatrix out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    }
  }
  return out;
}

void require_dims(std::size_t da, std::size_t db, std::size_t dim) {
  if (da == 0 || db == 0 || da * db != dim) {
    throw Error(ErrorKind::DimensionMismatch,
                "dims " + std::to_string(da) + "x" + std::to_string(db) +
                    " do not match matrix dim " + std::to_string(dim));
  }
}

// Modified Gram-Schmidt on the columns, run twice for orthogonality to
// roundoff.
ComplexMatrix orthonormalize_columns(ComplexMatrix g) {
  const std::size_t n = g.dim();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t prev = 0; prev < c; ++prev) {
        Complex dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += std::conj(g(r, prev)) * g(r, c);
        for (std::size_t r = 0; r < n; ++r) g(r, c) -= dot * g(r, prev);
      }
      double norm = 0.0;
      for (std::size_t r = 0; r < n; ++r) norm += std::norm(g(r, c));
      norm = std::sqrt(norm);
      for (std::size_t r = 0; r < n; ++r) g(r, c) /= norm;
    }
  }
  return g;
}

ComplexMatrix gaussian_matrix(std::size_t d, Rng& rng) {
  ComplexMatrix g(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
  }
  return g;
}

}  // namespace

BipartiteDensityMatrix validate(std::size_t da, std::size_t db, ComplexMatrix mat,
                                TraceHandling trace) {
  require_dims(da, db, mat.dim());
  const double defect = mat.hermiticity_defect();
  if (defect > kHermitianTolerance) {
    throw Error(ErrorKind::NotHermitian,
                "max |m_ij - conj(m_ji)| = " + std::to_string(defect), defect);
  }
  mat = symmetrized(mat);

  const double tr = mat.trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw Error(ErrorKind::TraceNotOne, "trace = " + std::to_string(tr), tr);
  }
  if (trace == TraceHandling::Renormalize && tr != 1.0) mat *= 1.0 / tr;

  const double min_eig = hermitian_eigenvalues(mat).front();
  if (min_eig < -kPsdTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "minimum eigenvalue %.17g", min_eig);
    throw Error(ErrorKind::NotPositiveSemidefinite, buf, min_eig);
  }
  return BipartiteDensityMatrix(da, db, std::move(mat));
}

ValidationReport inspect(std::size_t da, std::size_t db, const ComplexMatrix& mat) {
  require_dims(da, db, mat.dim());
  ValidationReport report;
  report.hermiticity_defect = mat.hermiticity_defect();
  const ComplexMatrix sym = symmetrized(mat);
  report.trace_defect = std::abs(mat.trace() - Complex(1.0));
  report.min_eigenvalue = hermitian_eigenvalues(sym).front();
  if (report.hermiticity_defect > kHermitianTolerance) {
    report.failure = to_string(ErrorKind::NotHermitian);
  } else if (report.trace_defect > kTraceTolerance) {
    report.failure = to_string(ErrorKind::TraceNotOne);
  } else if (report.min_eigenvalue < -kPsdTolerance) {
    report.failure = to_string(ErrorKind::NotPositiveSemidefinite);
  }
  report.valid = report.failure.empty();
  return report;
}

BipartiteDensityMatrix from_pure(std::size_t da, std::size_t db,
                                 std::span<const Complex> amplitudes) {
  require_dims(da, db, amplitudes.size());
  double norm2 = 0.0;
  for (const Complex& z : amplitudes) norm2 += std::norm(z);
  const double norm = std::sqrt(norm2);
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw Error(ErrorKind::NotNormalized,
                "amplitude norm = " + std::to_string(norm), norm);
  }
  return validate(da, db, ComplexMatrix::outer(amplitudes), TraceHandling::Keep);
}

BipartiteDensityMatrix separable_mixture(const Decomposition& decomp) {
  const std::size_t terms = decomp.weights.size();
  if (terms == 0 || decomp.factors_a.size() != terms ||
      decomp.factors_b.size() != terms) {
    throw Error(ErrorKind::DimensionMismatch,
                "decomposition lists must be non-empty and of equal length");
  }
  const std::size_t da = decomp.factors_a.front().dim();
  const std::size_t db = decomp.factors_b.front().dim();
  double total = 0.0;
  for (double w : decomp.weights) {
    if (!(w > 0.0)) {
      throw Error(ErrorKind::ParameterOutOfRange, "weights must be positive", w);
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "weights sum to " + std::to_string(total), total);
  }

  ComplexMatrix sum(da * db);
  for (std::size_t k = 0; k < terms; ++k) {
    const ComplexMatrix& fa = decomp.factors_a[k];
    const ComplexMatrix& fb = decomp.factors_b[k];
    if (fa.dim() != da || fb.dim() != db) {
      throw Error(ErrorKind::DimensionMismatch, "factor dimensions differ across terms");
    }
    // Factors must themselves be density matrices.
    validate(da, 1, fa, TraceHandling::Keep);
    validate(db, 1, fb, TraceHandling::Keep);
    sum += decomp.weights[k] * kron(fa, fb);
  }
  return validate(da, db, std::move(sum));
}

BipartiteDensityMatrix singlet() {
  ComplexMatrix s(4);
  s(1, 1) = s(2, 2) = 0.5;
  s(1, 2) = s(2, 1) = -0.5;
  return validate(2, 2, std::move(s), TraceHandling::Keep);
}

BipartiteDensityMatrix werner(double x) {
  require_unit_interval(x);
  const double mixed = (1.0 - x) / 4.0;
  ComplexMatrix m(4);
  m(0, 0) = m(3, 3) = mixed;
  m(1, 1) = m(2, 2) = x / 2.0 + mixed;
  m(1, 2) = m(2, 1) = -x / 2.0;
  return validate(2, 2, std::move(m), TraceHandling::Keep);
}

BipartiteDensityMatrix gisin(double x, Complex a, Complex b) {
  require_unit_interval(x);
  const double norm2 = std::norm(a) + std::norm(b);
  if (!(std::abs(norm2 - 1.0) <= kNormTolerance)) {
    throw Error(ErrorKind::NotNormalized,
                "|a|^2 + |b|^2 = " + std::to_string(norm2), norm2);
  }
  ComplexMatrix m(4);
  m(0, 0) = m(3, 3) = (1.0 - x) / 2.0;
  m(1, 1) = x * std::norm(a);
  m(2, 2) = x * std::norm(b);
  m(1, 2) = x * a * std::conj(b);
  m(2, 1) = std::conj(m(1, 2));
  return validate(2, 2, std::move(m), TraceHandling::Keep);
}

BipartiteDensityMatrix singlet_polarized(double x) {
  require_unit_interval(x);
  ComplexMatrix m(4);
  m(0, 0) = 1.0 - x;
  m(1, 1) = m(2, 2) = x / 2.0;
  m(1, 2) = m(2, 1) = -x / 2.0;
  return validate(2, 2, std::move(m), TraceHandling::Keep);
}

ComplexMatrix random_density(std::size_t d, std::uint64_t seed) {
  if (d == 0) throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
  Rng rng(seed);
  const ComplexMatrix g = gaussian_matrix(d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

LocalUnitaries random_local_unitary(std::size_t da, std::size_t db,
                                    std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix first = orthonormalize_columns(gaussian_matrix(da, rng));
  ComplexMatrix second = orthonormalize_columns(gaussian_matrix(db, rng));
  return {std::move(first), std::move(second)};
}

BipartiteDensityMatrix conjugate_local(const BipartiteDensityMatrix& rho,
                                       const LocalUnitaries& u) {
  const ComplexMatrix full = kron(u.first, u.second);
  return validate(rho.dim_a(), rho.dim_b(),
                  full * rho.matrix() * full.adjoint());
}

ComplexMatrix partial_trace(const BipartiteDensityMatrix& rho, Subsystem keep) {
  return partial_trace(rho.matrix(), rho.dim_a(), rho.dim_b(), keep);
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Werner: return "werner";
    case Family::Gisin: return "gisin";
    case Family::SingletPolarized: return "singlet_polarized";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "werner") return Family::Werner;
  if (name == "gisin") return Family::Gisin;
  if (name == "singlet_polarized") return Family::SingletPolarized;
  throw Error(ErrorKind::UnknownFamily, std::string(name));
}

BipartiteDensityMatrix make_state(const FamilySpec& spec, double x) {
  switch (spec.family) {
    case Family::Werner: return werner(x);
    case Family::Gisin: return gisin(x, spec.a, spec.b);
    case Family::SingletPolarized: return singlet_polarized(x);
  }
  throw Error(ErrorKind::UnknownFamily, "unhandled family");
}

BipartiteDensityMatrix make_state(const FamilySpec& spec) {
  return make_state(spec, spec.x);
}

}  // namespace sepcheck
