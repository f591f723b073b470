#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sepcheck/complex_matrix.hpp"

namespace sepcheck {

enum class Subsystem { A, B };

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kJacobiRelativeTolerance = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;

/// Kronecker product; entry (i*db + k, j*db + l) is a(i,j) * b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// The input is checked against kHermitianTolerance and symmetrized as
/// (h + h^dagger)/2, then diagonalized by cyclic Jacobi on the real symmetric
/// embedding [[Re, -Im], [Im, Re]]. Each eigenvalue of h appears twice in the
/// embedding; adjacent sorted pairs are merged.
///
/// Throws Error{NotHermitian} or Error{NoConvergence}.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

/// Reduced matrix of the kept subsystem for a matrix on C^da (x) C^db.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t da,
                            std::size_t db, Subsystem keep);

/// Reorders tensor factors. Output factor k is input factor perm[k], applied
/// to both row and column multi-indices. Permuting by perm and then by its
/// inverse returns the input exactly.
///
/// Throws Error{DimensionMismatch} when the dims do not multiply to m.dim()
/// or perm is not a permutation of 0..dims.size()-1.
ComplexMatrix permute_subsystems(const ComplexMatrix& m,
                                 std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm);

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

}  // namespace sepcheck
