#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sepcheck/complex_matrix.hpp"
#include "sepcheck/states.hpp"

namespace sepcheck {

// ---------------------------------------------------------------------------
// Characteristic-polynomial eigenvalues (n <= 4)
// ---------------------------------------------------------------------------

inline constexpr std::size_t kCharpolyMaxDim = 4;
/// Below this |discriminant| (of the scaled polynomial) closed forms are
/// abandoned for root isolation by bisection.
inline constexpr double kCharpolyDiscriminantFloor = 1e-20;

/// Eigenvalues of a Hermitian matrix of dimension <= 4, ascending, from the
/// roots of det(lambda I - h).
///
/// The matrix is first scaled by a power of two so its largest entry lies in
/// [0.5, 1). Coefficients are sums of principal minors. Roots come from the
/// quadratic formula, the trigonometric cubic, or Ferrari's quartic; when the
/// discriminant is below kCharpolyDiscriminantFloor the roots are instead
/// isolated between the critical points and bisected.
///
/// Throws Error{NotHermitian} or Error{DimensionCapExceeded}.
std::vector<double> charpoly_eigenvalues(const ComplexMatrix& h);

/// Monic-or-not polynomial, coefficients in ascending powers.
using Polynomial = std::vector<double>;

/// Coefficients of det(lambda I - h), ascending; leading coefficient 1.
Polynomial characteristic_polynomial(const ComplexMatrix& h);

/// All roots of a polynomial known to have only real roots, ascending and
/// repeated by multiplicity. Roots are isolated between the (recursively
/// computed) roots of the derivative and bisected.
std::vector<double> real_roots_by_isolation(const Polynomial& p);

// ---------------------------------------------------------------------------
// Separable decomposition search
// ---------------------------------------------------------------------------

inline constexpr std::size_t kSearchDimCap = 9;  // dA * dB

struct SearchConfig {
  /// Number of product terms; unset means (dA dB)^2.
  std::optional<std::size_t> max_terms;
  int restarts = 32;
  int iterations = 5000;
  double residual_tol = 1e-6;
  std::uint64_t seed = 0;
  /// Restarts run in batches of this many threads; 0 = hardware concurrency.
  unsigned threads = 0;
};

/// Looks for rho = sum_k w_k P_k (x) Q_k with pure-state projectors P_k, Q_k.
///
/// Each restart draws random unit vectors, then alternates exact block
/// updates of one term at a time (each factor becomes the top eigenvector of
/// its reduced residual), non-negative least squares on all weights, and
/// annealed random perturbations of single terms once progress stalls. A
/// restart ends on success, on its iteration budget, or after stagnating.
///
/// Returns the decomposition of the lowest-indexed successful restart, so
/// the result does not depend on thread scheduling. std::nullopt only means
/// the budget ran out; it is not a proof of entanglement.
///
/// Throws Error{DimensionCapExceeded} if dA * dB > kSearchDimCap and
/// Error{ParameterOutOfRange} for a malformed config.
std::optional<Decomposition> search_decomposition(const BipartiteDensityMatrix& rho,
                                                  const SearchConfig& cfg = {});

/// ||rho - sum_k w_k A_k (x) B_k||_F
double decomposition_residual(const BipartiteDensityMatrix& rho,
                              const Decomposition& decomp);

}  // namespace sepcheck
