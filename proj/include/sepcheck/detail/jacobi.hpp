#pragma once

#include <vector>

#include "sepcheck/complex_matrix.hpp"

namespace sepcheck::detail {

struct Eigenpairs {
  std::vector<double> values;                // ascending
  std::vector<std::vector<Complex>> vectors; // vectors[i] pairs with values[i]
};

// Full eigendecomposition through the real embedding. Internal: used by the
// decomposition search and by tests that check residuals ||hv - lambda v||.
Eigenpairs hermitian_eigenpairs(const ComplexMatrix& h);

// Cyclic Jacobi on a dense real symmetric n x n matrix (row-major, modified
// in place). Returns the eigenvalues on the diagonal order; if vectors is
// non-null it receives the eigenvectors as columns (row-major n x n).
std::vector<double> jacobi_symmetric(std::vector<double>& a, std::size_t n,
                                     std::vector<double>* vectors);

}  // namespace sepcheck::detail
