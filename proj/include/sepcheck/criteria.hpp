#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "sepcheck/complex_matrix.hpp"
#include "sepcheck/states.hpp"

namespace sepcheck {

enum class Criterion { Ppt, ChshHorodecki, Renyi2 };

std::string_view to_string(Criterion criterion);
/// Accepts "ppt", "chsh", "chsh_horodecki", "renyi2".
Criterion parse_criterion(std::string_view name);

// Detection margins. They are one-sided so that roundoff can never make a
// separable state look entangled.
inline constexpr double kPptMargin = 1e-10;     // detected iff witness < -margin
inline constexpr double kChshMargin = 1e-10;    // detected iff witness > 1 + margin
inline constexpr double kRenyi2Margin = 1e-10;  // detected iff witness > margin

inline constexpr std::size_t kTensorPowerDimCap = 64;

struct CriterionReport {
  Criterion criterion = Criterion::Ppt;
  /// ppt: min eigenvalue of the partial transpose; chsh_horodecki: M(rho);
  /// renyi2: tr(rho^2) - min(tr(rho_A^2), tr(rho_B^2)).
  double witness = 0.0;
  std::optional<std::vector<double>> spectrum;  // ppt only, ascending
  bool inseparable_detected = false;
};

/// sigma_{m mu, n nu} = rho_{n mu, m nu}: transposes the first subsystem.
/// A pure permutation of entries, so it is an exact involution.
ComplexMatrix partial_transpose(const BipartiteDensityMatrix& rho);

CriterionReport ppt_report(const BipartiteDensityMatrix& rho);

/// Pauli correlation matrix T_ij = tr(rho sigma_i (x) sigma_j), i,j over x,y,z.
/// Requires a 2x2 bipartition (Error{DimensionMismatch} otherwise).
std::vector<std::vector<double>> correlation_matrix(const BipartiteDensityMatrix& rho);

/// Horodecki test: M(rho) = sum of the two largest eigenvalues of T^T T.
/// The best CHSH value attainable with rho is 2 sqrt(M), so a violation
/// happens exactly when M > 1.
CriterionReport chsh_horodecki(const BipartiteDensityMatrix& rho);

/// Purity (alpha = 2 entropy) test: a separable state is never purer than
/// either of its marginals.
CriterionReport renyi2_report(const BipartiteDensityMatrix& rho);

CriterionReport evaluate(Criterion criterion, const BipartiteDensityMatrix& rho);

/// rho^{(x) k} regrouped as (A_1 ... A_k | B_1 ... B_k), k in {2, 3}.
/// Throws Error{ParameterOutOfRange} for other k and
/// Error{DimensionCapExceeded} when (dA dB)^k exceeds kTensorPowerDimCap.
BipartiteDensityMatrix tensor_power(const BipartiteDensityMatrix& rho, int k);

/// Factor permutation taking (A1 B1 A2 B2 ...) to (A1 A2 ... B1 B2 ...).
std::vector<std::size_t> copies_to_bipartition(int k);

// Closed-form family thresholds.

/// Werner states are NPT exactly for x > 1/3.
double werner_ppt_threshold();
/// Werner states violate CHSH exactly for x > 1/sqrt(2).
double werner_chsh_threshold();
/// Werner states fail the purity test exactly for x > 1/sqrt(3).
double werner_renyi2_threshold();
/// Gisin states are NPT exactly for x > 1 / (1 + 2|ab|).
double gisin_ppt_threshold(Complex a, Complex b);
/// Gisin's Bell-violation bound, x > [1 + 2|ab|(sqrt(2) - 1)]^{-1}.
/// Throws Error{NotNormalized} unless |a|^2 + |b|^2 = 1.
double gisin_bell_threshold(Complex a, Complex b);

}  // namespace sepcheck
