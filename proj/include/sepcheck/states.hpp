#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "sepcheck/complex_matrix.hpp"
#include "sepcheck/linalg.hpp"

namespace sepcheck {

inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kWeightSumTolerance = 1e-10;

enum class TraceHandling {
  Renormalize,  // divide by the trace when it is within kTraceTolerance of 1
  Keep,         // check only; entries are returned untouched
};

/// Density matrix on C^dA (x) C^dB.
///
/// Composite indices are first-subsystem major: the element rho_{m mu, n nu}
/// lives at row m*dB + mu, column n*dB + nu. Instances only come out of
/// validate(), so every live object is Hermitian, has unit trace and is
/// positive semidefinite within the library tolerances.
class BipartiteDensityMatrix {
 public:
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  const ComplexMatrix& matrix() const noexcept { return mat_; }

  const Complex& operator()(std::size_t row, std::size_t col) const {
    return mat_(row, col);
  }

  friend BipartiteDensityMatrix validate(std::size_t, std::size_t,
                                         ComplexMatrix, TraceHandling);

 private:
  BipartiteDensityMatrix(std::size_t da, std::size_t db, ComplexMatrix mat)
      : dim_a_(da), dim_b_(db), mat_(std::move(mat)) {}

  std::size_t dim_a_;
  std::size_t dim_b_;
  ComplexMatrix mat_;
};

/// Checks the density-matrix invariants and returns the state.
///
/// A matrix within kHermitianTolerance of Hermitian is replaced by
/// (m + m^dagger)/2. Throws Error with kind DimensionMismatch, NotHermitian,
/// TraceNotOne or NotPositiveSemidefinite (value() = minimum eigenvalue).
BipartiteDensityMatrix validate(std::size_t da, std::size_t db, ComplexMatrix mat,
                                TraceHandling trace = TraceHandling::Renormalize);

/// Defects of an arbitrary matrix, without throwing on invariant failures.
struct ValidationReport {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;  // |tr(m) - 1|
  double min_eigenvalue = 0.0;  // of (m + m^dagger)/2
  bool valid = false;
  std::string_view failure;  // empty when valid; otherwise the ErrorKind name
};
ValidationReport inspect(std::size_t da, std::size_t db, const ComplexMatrix& mat);

/// v v^dagger for a normalized amplitude vector of length dA*dB.
/// Throws Error{NotNormalized} if | ||v|| - 1 | > kNormTolerance.
BipartiteDensityMatrix from_pure(std::size_t da, std::size_t db,
                                 std::span<const Complex> amplitudes);

/// A convex mixture of product states, sum_k w_k factors_a[k] (x) factors_b[k].
struct Decomposition {
  std::vector<double> weights;
  std::vector<ComplexMatrix> factors_a;
  std::vector<ComplexMatrix> factors_b;
  double residual = 0.0;  // Frobenius distance to the target it approximates
};

BipartiteDensityMatrix separable_mixture(const Decomposition& decomp);

/// (|01> - |10>)/sqrt(2) as a density matrix, entries exactly +-1/2.
BipartiteDensityMatrix singlet();

/// x * singlet + (1 - x) * I/4.
BipartiteDensityMatrix werner(double x);

/// Fraction x of a|01> + b|10>, fractions (1-x)/2 of |00> and |11>.
BipartiteDensityMatrix gisin(double x, Complex a, Complex b);

/// x * singlet + (1 - x) * |00><00|.
BipartiteDensityMatrix singlet_polarized(double x);

/// G G^dagger / tr(G G^dagger) with G a d x d matrix of complex Gaussians.
ComplexMatrix random_density(std::size_t d, std::uint64_t seed);

struct LocalUnitaries {
  ComplexMatrix first;   // acts on subsystem A
  ComplexMatrix second;  // acts on subsystem B
};

/// Gram-Schmidt orthonormalized Gaussian matrices; U'' is drawn after U'
/// from the same stream.
LocalUnitaries random_local_unitary(std::size_t da, std::size_t db,
                                    std::uint64_t seed);

/// (U' (x) U'') rho (U' (x) U'')^dagger
BipartiteDensityMatrix conjugate_local(const BipartiteDensityMatrix& rho,
                                       const LocalUnitaries& u);

ComplexMatrix partial_trace(const BipartiteDensityMatrix& rho, Subsystem keep);

enum class Family { Werner, Gisin, SingletPolarized };

std::string_view to_string(Family family);
/// Accepts "werner", "gisin", "singlet_polarized". Throws Error{UnknownFamily}.
Family parse_family(std::string_view name);

/// A named one-parameter family; a and b are used by gisin only.
struct FamilySpec {
  Family family = Family::Werner;
  Complex a{1.0 / std::numbers::sqrt2, 0.0};
  Complex b{1.0 / std::numbers::sqrt2, 0.0};
  double x = 0.0;
};

BipartiteDensityMatrix make_state(const FamilySpec& spec);
BipartiteDensityMatrix make_state(const FamilySpec& spec, double x);

}  // namespace sepcheck
