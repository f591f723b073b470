#include "sepcheck/criteria.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sepcheck/errors.hpp"
#include "sepcheck/oracle.hpp"
#include "sepcheck/rng.hpp"
#include "support/oracles.hpp"

using namespace sepcheck;
using sepcheck::testing::pairwise_products;
using sepcheck::testing::partial_transpose_b;
using sepcheck::testing::random_matrix;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

double vec_diff(const std::vector<double>& a, const std::vector<double>& b) {
  return sepcheck::testing::max_abs_diff(a, b);
}

ComplexMatrix pauli(int i) {
  const Complex I(0.0, 1.0);
  switch (i) {
    case 0:
      return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
    case 1:
      return ComplexMatrix{{0.0, -I}, {I, 0.0}};
    default:
      return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
  }
}

std::vector<Complex> random_unit_vector(std::size_t n, Rng& rng) {
  std::vector<Complex> v(n);
  double norm = 0.0;
  for (auto& z : v) {
    z = rng.complex_gaussian();
    norm += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(norm);
  return v;
}

// Random convex mixture of products of random mixed states.
BipartiteDensityMatrix random_separable(std::size_t da, std::size_t db, int terms, Rng& rng) {
  Decomposition d;
  double total = 0.0;
  for (int k = 0; k < terms; ++k) {
    d.weights.push_back(0.05 + rng.uniform());
    total += d.weights.back();
    d.factors_a.push_back(random_density(da, rng.next_u64()));
    d.factors_b.push_back(random_density(db, rng.next_u64()));
  }
  for (double& w : d.weights) w /= total;
  return separable_mixture(d);
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no sepcheck::Error thrown";
  return ErrorKind::ParseError;
}

}  // namespace

TEST(partial_transpose, index_definition_and_involution) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rho = validate(2, 3, random_density(6, seed));
    const ComplexMatrix sigma = partial_transpose(rho);
    for (std::size_t m = 0; m < 2; ++m)
      for (std::size_t mu = 0; mu < 3; ++mu)
        for (std::size_t n = 0; n < 2; ++n)
          for (std::size_t nu = 0; nu < 3; ++nu)
            EXPECT_EQ(sigma(m * 3 + mu, n * 3 + nu), rho(n * 3 + mu, m * 3 + nu));
    EXPECT_EQ(sigma.hermiticity_defect(), 0.0);
  }
  // Involution needs a PSD partial transpose to rebuild a state from it.
  Rng rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = random_separable(2, 3, 3, rng);
    const auto back = validate(2, 3, partial_transpose(rho), TraceHandling::Keep);
    EXPECT_EQ(partial_transpose(back), rho.matrix());
  }
}

TEST(partial_transpose, product_state_transposes_first_factor) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ComplexMatrix a = random_density(3, seed);
    const ComplexMatrix b = random_density(2, seed + 50);
    const auto rho = validate(3, 2, kron(a, b), TraceHandling::Keep);
    EXPECT_LE(max_abs_diff(partial_transpose(rho), kron(a.transpose(), b)), 1e-15);
  }
}

TEST(partial_transpose, either_side_gives_same_spectrum) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = validate(2, 3, random_density(6, seed));
    EXPECT_LE(vec_diff(hermitian_eigenvalues(partial_transpose(rho)),
                       hermitian_eigenvalues(partial_transpose_b(rho.matrix(), 3))),
              1e-12);
  }
}

TEST(partial_transpose, local_unitaries_act_as_conjugate_on_first_factor) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = validate(2, 2, random_density(4, seed));
    const auto u = random_local_unitary(2, 2, seed + 7);
    // (U rho_A U^dagger)^T = conj(U) rho_A^T conj(U)^dagger.
    const ComplexMatrix v = kron(u.first.adjoint().transpose(), u.second);
    const ComplexMatrix expected = v * partial_transpose(rho) * v.adjoint();
    EXPECT_LE(max_abs_diff(partial_transpose(conjugate_local(rho, u)), expected), 1e-14);
  }
}

TEST(ppt, singlet_spectrum_against_charpoly) {
  const auto report = ppt_report(singlet());
  const std::vector<double> expected = {-0.5, 0.5, 0.5, 0.5};
  EXPECT_LE(vec_diff(*report.spectrum, expected), 1e-14);
  EXPECT_LE(vec_diff(charpoly_eigenvalues(partial_transpose(singlet())), expected), 1e-12);
  EXPECT_TRUE(report.inseparable_detected);
  EXPECT_EQ(report.criterion, Criterion::Ppt);
}

TEST(ppt, werner_spectrum) {
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    const auto report = ppt_report(werner(x));
    std::vector<double> expected = {(1.0 - 3.0 * x) / 4.0, (1.0 + x) / 4.0, (1.0 + x) / 4.0,
                                    (1.0 + x) / 4.0};
    std::sort(expected.begin(), expected.end());
    EXPECT_LE(vec_diff(*report.spectrum, expected), 1e-10) << x;
    EXPECT_EQ(report.witness, report.spectrum->front());
    EXPECT_EQ(report.inseparable_detected, 3 * i > 20) << x;
  }
}

TEST(ppt, gisin_witness_closed_form) {
  Rng rng(30);
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = 0.5 * std::numbers::pi * rng.uniform();
    const Complex a = std::polar(std::cos(theta), 6.0 * rng.uniform());
    const Complex b = std::polar(std::sin(theta), 6.0 * rng.uniform());
    const double x = rng.uniform();
    const double ab = std::abs(a) * std::abs(b);
    const double expected = std::min({(1.0 - x) / 2.0 - x * ab, x * std::norm(a), x * std::norm(b)});
    EXPECT_NEAR(ppt_report(gisin(x, a, b)).witness, expected, 1e-12);
  }
}

TEST(ppt, singlet_polarized_detected_for_any_positive_weight) {
  EXPECT_NEAR(ppt_report(singlet_polarized(0.5)).witness, -0.10355339059327379, 1e-12);
  for (double x : {1e-3, 1e-2, 0.1, 0.5, 0.9, 1.0}) {
    const auto report = ppt_report(singlet_polarized(x));
    EXPECT_NEAR(report.witness, ((1.0 - x) - std::hypot(1.0 - x, x)) / 2.0, 1e-12);
    EXPECT_TRUE(report.inseparable_detected) << x;
  }
  EXPECT_FALSE(ppt_report(singlet_polarized(0.0)).inseparable_detected);
}

TEST(ppt, random_separable_mixtures_never_detected) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t da = 2 + trial % 2;
    const std::size_t db = 2 + (trial / 2) % 2;
    const auto report = ppt_report(random_separable(da, db, 1 + trial % 8, rng));
    EXPECT_GE(report.witness, -1e-10);
    EXPECT_FALSE(report.inseparable_detected);
  }
}

TEST(ppt, pure_two_qubit_states_negative_eigenvalue) {
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = from_pure(2, 2, random_unit_vector(4, rng));
    const ComplexMatrix reduced = partial_trace(rho, Subsystem::A);
    const double det = (reduced(0, 0) * reduced(1, 1) - reduced(0, 1) * reduced(1, 0)).real();
    // Product of Schmidt coefficients.
    EXPECT_NEAR(ppt_report(rho).witness, -std::sqrt(std::max(det, 0.0)), 1e-9);
  }
}

TEST(correlation_matrix, matches_pauli_traces) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rho = validate(2, 2, random_density(4, seed));
    const auto t = correlation_matrix(rho);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        EXPECT_NEAR(t[i][j], (rho.matrix() * kron(pauli(i), pauli(j))).trace().real(), 1e-14);
  }
  const auto s = correlation_matrix(singlet());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(s[i][j], i == j ? -1.0 : 0.0, 1e-15);
}

TEST(chsh_horodecki, werner_and_reference_states) {
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    const auto report = chsh_horodecki(werner(x));
    EXPECT_NEAR(report.witness, 2.0 * x * x, 1e-10);
    EXPECT_EQ(report.inseparable_detected, x > kInvSqrt2);
    EXPECT_FALSE(report.spectrum.has_value());
  }
  EXPECT_NEAR(chsh_horodecki(singlet()).witness, 2.0, 1e-14);
  const auto classical = chsh_horodecki(validate(2, 2, ComplexMatrix::diagonal({0.5, 0.0, 0.0, 0.5})));
  EXPECT_NEAR(classical.witness, 1.0, 1e-15);
  EXPECT_FALSE(classical.inseparable_detected);
}

TEST(chsh_horodecki, singlet_polarized_closed_form) {
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    const double expected = x * x + std::max(x * x, (1.0 - 2.0 * x) * (1.0 - 2.0 * x));
    EXPECT_NEAR(chsh_horodecki(singlet_polarized(x)).witness, expected, 1e-12) << x;
  }
  const auto half = chsh_horodecki(singlet_polarized(0.5));
  EXPECT_NEAR(half.witness, 0.5, 1e-12);
  EXPECT_FALSE(half.inseparable_detected);
}

TEST(chsh_horodecki, requires_two_qubits) {
  const auto rho = validate(2, 3, random_density(6, 1));
  EXPECT_EQ(kind_of([&] { chsh_horodecki(rho); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { correlation_matrix(rho); }), ErrorKind::DimensionMismatch);
}

TEST(chsh_horodecki, separable_states_never_violate) {
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_FALSE(chsh_horodecki(random_separable(2, 2, 1 + trial % 6, rng)).inseparable_detected);
  }
}

TEST(renyi2, werner_values) {
  EXPECT_NEAR(renyi2_report(werner(0.6)).witness, 0.02, 1e-14);
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    const double purity = ((1.0 + 3.0 * x) * (1.0 + 3.0 * x) + 3.0 * (1.0 - x) * (1.0 - x)) / 16.0;
    const auto report = renyi2_report(werner(x));
    EXPECT_NEAR(report.witness, purity - 0.5, 1e-14);
    EXPECT_EQ(report.inseparable_detected, x > 1.0 / std::sqrt(3.0));
  }
  EXPECT_NEAR(renyi2_report(singlet()).witness, 0.5, 1e-15);
}

TEST(renyi2, separable_states_never_detected) {
  Rng rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t da = 2 + trial % 2;
    const auto report = renyi2_report(random_separable(da, 3, 1 + trial % 8, rng));
    EXPECT_LE(report.witness, 1e-10);
    EXPECT_FALSE(report.inseparable_detected);
  }
}

TEST(evaluate, dispatch_and_names) {
  const auto rho = werner(0.9);
  EXPECT_EQ(evaluate(Criterion::Ppt, rho).witness, ppt_report(rho).witness);
  EXPECT_EQ(evaluate(Criterion::ChshHorodecki, rho).witness, chsh_horodecki(rho).witness);
  EXPECT_EQ(evaluate(Criterion::Renyi2, rho).witness, renyi2_report(rho).witness);
  EXPECT_EQ(parse_criterion("chsh"), Criterion::ChshHorodecki);
  EXPECT_EQ(parse_criterion("chsh_horodecki"), Criterion::ChshHorodecki);
  EXPECT_EQ(parse_criterion("renyi2"), Criterion::Renyi2);
  EXPECT_EQ(to_string(Criterion::Ppt), "ppt");
  EXPECT_EQ(kind_of([] { parse_criterion("bell"); }), ErrorKind::UnknownCriterion);
}

TEST(tensor_power, maximally_mixed_and_regrouping) {
  const auto mixed = tensor_power(werner(0.0), 2);
  EXPECT_EQ(mixed.dim_a(), 4u);
  EXPECT_EQ(mixed.dim_b(), 4u);
  EXPECT_LE(max_abs_diff(mixed.matrix(), ComplexMatrix::identity(16) * (1.0 / 16.0)), 1e-17);

  const std::vector<std::size_t> expected_perm = {0, 2, 1, 3};
  EXPECT_EQ(copies_to_bipartition(2), expected_perm);
  const std::vector<std::size_t> expected_perm3 = {0, 2, 4, 1, 3, 5};
  EXPECT_EQ(copies_to_bipartition(3), expected_perm3);
}

TEST(tensor_power, partial_transpose_of_square_is_square_of_partial_transpose) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rho = validate(2, 2, random_density(4, seed));
    const ComplexMatrix sigma = partial_transpose(rho);
    const std::vector<std::size_t> dims = {2, 2, 2, 2};
    const ComplexMatrix regrouped =
        permute_subsystems(kron(sigma, sigma), dims, copies_to_bipartition(2));
    EXPECT_LE(max_abs_diff(partial_transpose(tensor_power(rho, 2)), regrouped), 1e-14);
  }
}

TEST(tensor_power, spectrum_is_pairwise_products) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = validate(2, 2, random_density(4, seed));
    const auto single = *ppt_report(rho).spectrum;
    EXPECT_LE(vec_diff(*ppt_report(tensor_power(rho, 2)).spectrum, pairwise_products(single)), 1e-9);
  }
  const auto w = tensor_power(werner(0.2), 2);
  EXPECT_FALSE(ppt_report(w).inseparable_detected);
  EXPECT_FALSE(ppt_report(tensor_power(werner(0.2), 3)).inseparable_detected);
  EXPECT_TRUE(ppt_report(tensor_power(werner(0.5), 2)).inseparable_detected);
}

TEST(tensor_power, argument_checks) {
  EXPECT_EQ(kind_of([] { tensor_power(werner(0.5), 1); }), ErrorKind::ParameterOutOfRange);
  EXPECT_EQ(kind_of([] { tensor_power(werner(0.5), 4); }), ErrorKind::ParameterOutOfRange);
  const auto big = validate(2, 3, random_density(6, 2));
  EXPECT_EQ(kind_of([&] { tensor_power(big, 3); }), ErrorKind::DimensionCapExceeded);
  EXPECT_NO_THROW(tensor_power(big, 2));
}

TEST(thresholds, closed_forms) {
  EXPECT_DOUBLE_EQ(werner_ppt_threshold(), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(werner_chsh_threshold(), kInvSqrt2);
  EXPECT_DOUBLE_EQ(werner_renyi2_threshold(), 1.0 / std::sqrt(3.0));
  EXPECT_NEAR(gisin_ppt_threshold(0.6, 0.8), 1.0 / 1.96, 1e-15);
  EXPECT_NEAR(gisin_ppt_threshold(0.28, 0.96), 0.6503642039542143, 1e-15);
  EXPECT_NEAR(gisin_bell_threshold(kInvSqrt2, kInvSqrt2), kInvSqrt2, 1e-12);
  EXPECT_DOUBLE_EQ(gisin_bell_threshold(1.0, 0.0), 1.0);
  EXPECT_NEAR(gisin_bell_threshold(0.6, 0.8), 0.7154892592735508, 1e-15);
  EXPECT_EQ(kind_of([] { gisin_bell_threshold(0.6, 0.6); }), ErrorKind::NotNormalized);
}

TEST(thresholds, bell_bound_never_below_ppt_bound) {
  Rng rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    const double theta = 0.5 * std::numbers::pi * rng.uniform();
    const Complex a = std::polar(std::cos(theta), 6.0 * rng.uniform());
    const Complex b = std::polar(std::sin(theta), 6.0 * rng.uniform());
    const double ppt = gisin_ppt_threshold(a, b);
    EXPECT_GE(gisin_bell_threshold(a, b), ppt - 1e-15);
    EXPECT_GE(ppt, 0.5 - 1e-15);
    EXPECT_LE(ppt, 1.0);
    // Verdicts on either side of the closed-form threshold.
    if (ppt < 1.0 - 1e-6) {
      EXPECT_TRUE(ppt_report(gisin(std::min(1.0, ppt + 1e-6), a, b)).inseparable_detected);
    }
    EXPECT_FALSE(ppt_report(gisin(ppt - 1e-6, a, b)).inseparable_detected);
  }
}
