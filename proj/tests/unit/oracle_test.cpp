#include "sepcheck/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "sepcheck/criteria.hpp"
#include "sepcheck/detail/nnls.hpp"
#include "sepcheck/errors.hpp"
#include "sepcheck/rng.hpp"
#include "support/oracles.hpp"

using namespace sepcheck;
using sepcheck::testing::random_hermitian;

namespace {

double vec_diff(const std::vector<double>& a, const std::vector<double>& b) {
  return sepcheck::testing::max_abs_diff(a, b);
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

void expect_sound(const BipartiteDensityMatrix& rho, const Decomposition& d, double tol) {
  ASSERT_EQ(d.weights.size(), d.factors_a.size());
  ASSERT_EQ(d.weights.size(), d.factors_b.size());
  EXPECT_LE(d.residual, tol);
  const auto rebuilt = separable_mixture(d);
  EXPECT_LE((rebuilt.matrix() - rho.matrix()).frobenius_norm(), tol + 1e-12);
  EXPECT_NEAR(decomposition_residual(rho, d), d.residual, 1e-12);
  EXPECT_GE(ppt_report(rebuilt).witness, -1e-10);
  for (std::size_t k = 0; k < d.weights.size(); ++k) {
    // Pure-state projectors.
    EXPECT_LE(max_abs_diff(d.factors_a[k] * d.factors_a[k], d.factors_a[k]), 1e-10);
    EXPECT_LE(max_abs_diff(d.factors_b[k] * d.factors_b[k], d.factors_b[k]), 1e-10);
  }
}

}  // namespace

TEST(charpoly_eigenvalues, small_examples) {
  EXPECT_EQ(charpoly_eigenvalues(ComplexMatrix{{2.0}}), std::vector<double>{2.0});
  EXPECT_LE(vec_diff(charpoly_eigenvalues(singlet().matrix()), {0.0, 0.0, 0.0, 1.0}), 1e-12);
  EXPECT_LE(vec_diff(charpoly_eigenvalues(partial_transpose(werner(0.5))),
                     {-0.125, 0.375, 0.375, 0.375}),
            1e-12);
  EXPECT_LE(vec_diff(charpoly_eigenvalues(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}), {-1.0, 1.0}), 0.0);
  EXPECT_LE(vec_diff(charpoly_eigenvalues(ComplexMatrix::diagonal({3.0, 1.0, 2.0})), {1.0, 2.0, 3.0}),
            1e-14);
}

TEST(charpoly_eigenvalues, degenerate_and_scaled_spectra) {
  EXPECT_LE(vec_diff(charpoly_eigenvalues(ComplexMatrix::identity(4) * 0.3), {0.3, 0.3, 0.3, 0.3}),
            1e-14);
  EXPECT_LE(vec_diff(charpoly_eigenvalues(ComplexMatrix::identity(3) * 1e6), {1e6, 1e6, 1e6}), 1e-8);
  EXPECT_LE(vec_diff(charpoly_eigenvalues(ComplexMatrix::diagonal({1e-9, 2e-9})), {1e-9, 2e-9}), 1e-22);
  EXPECT_EQ(charpoly_eigenvalues(ComplexMatrix(3)), std::vector<double>(3, 0.0));
  Rng rng(40);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = random_local_unitary(4, 1, rng.next_u64()).first;
    const ComplexMatrix h = u * ComplexMatrix::diagonal({-1.0, 0.5, 0.5, 2.0}) * u.adjoint();
    const ComplexMatrix sym = (h + h.adjoint()) * 0.5;
    EXPECT_LE(vec_diff(charpoly_eigenvalues(sym), {-1.0, 0.5, 0.5, 2.0}), 1e-7);
  }
}

TEST(charpoly_eigenvalues, matches_jacobi_on_random_matrices) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix h = random_hermitian(1 + trial % 4, rng);
    EXPECT_LE(vec_diff(charpoly_eigenvalues(h), hermitian_eigenvalues(h)), 1e-8);
  }
}

TEST(charpoly_eigenvalues, errors) {
  EXPECT_EQ(kind_of([] { charpoly_eigenvalues(ComplexMatrix::identity(5)); }),
            ErrorKind::DimensionCapExceeded);
  EXPECT_EQ(kind_of([] { charpoly_eigenvalues(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}); }),
            ErrorKind::NotHermitian);
}

TEST(characteristic_polynomial, coefficients) {
  // det(l I - diag(1, 2, 3)) = l^3 - 6 l^2 + 11 l - 6
  const Polynomial p = characteristic_polynomial(ComplexMatrix::diagonal({1.0, 2.0, 3.0}));
  EXPECT_LE(vec_diff(p, {-6.0, 11.0, -6.0, 1.0}), 1e-14);
  const Polynomial q = characteristic_polynomial(ComplexMatrix{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
  EXPECT_LE(vec_diff(q, {-1.0, 0.0, 1.0}), 1e-15);
}

TEST(real_roots_by_isolation, multiple_roots) {
  // (x - 1)^2 (x + 2)
  EXPECT_LE(vec_diff(real_roots_by_isolation({2.0, -3.0, 0.0, 1.0}), {-2.0, 1.0, 1.0}), 1e-7);
  // (x - 0.5)^4
  EXPECT_LE(vec_diff(real_roots_by_isolation({0.0625, -0.5, 1.5, -2.0, 1.0}), {0.5, 0.5, 0.5, 0.5}),
            1e-4);
  // (x + 1) x (x - 3)
  EXPECT_LE(vec_diff(real_roots_by_isolation({0.0, -3.0, -2.0, 1.0}), {-1.0, 0.0, 3.0}), 1e-12);
  EXPECT_LE(vec_diff(real_roots_by_isolation({-4.0, 2.0}), {2.0}), 0.0);
}

TEST(nnls, small_problems) {
  const std::vector<std::vector<double>> unit = {{1.0, 0.0}, {0.0, 1.0}};
  const std::vector<double> y1 = {1.0, -1.0};
  EXPECT_LE(vec_diff(detail::nnls(unit, y1), {1.0, 0.0}), 1e-15);

  const std::vector<std::vector<double>> cone = {{1.0, 0.0}, {1.0, 1.0}};
  const std::vector<double> y2 = {2.0, 1.0};
  EXPECT_LE(vec_diff(detail::nnls(cone, y2), {1.0, 1.0}), 1e-14);

  const std::vector<double> y3 = {-1.0, -1.0};
  EXPECT_LE(vec_diff(detail::nnls(cone, y3), {0.0, 0.0}), 0.0);

  // Overdetermined; unconstrained optimum has a negative weight.
  const std::vector<std::vector<double>> tall = {{1.0, 1.0, 1.0}, {0.0, 1.0, 2.0}};
  const std::vector<double> y4 = {3.0, 2.0, 1.0};
  EXPECT_LE(vec_diff(detail::nnls(tall, y4), {2.0, 0.0}), 1e-14);
}

TEST(search_decomposition, werner_inside_ppt_region) {
  for (double x : {0.0, 0.1, 0.25}) {
    const auto rho = werner(x);
    const auto found = search_decomposition(rho);
    ASSERT_TRUE(found.has_value()) << x;
    expect_sound(rho, *found, 1e-6);
    EXPECT_LE(found->weights.size(), 16u);
  }
}

TEST(search_decomposition, classical_mixture_two_terms) {
  const auto rho = validate(2, 2, ComplexMatrix::diagonal({0.5, 0.0, 0.0, 0.5}));
  SearchConfig cfg;
  cfg.residual_tol = 1e-12;
  const auto found = search_decomposition(rho, cfg);
  ASSERT_TRUE(found.has_value());
  EXPECT_LE(found->weights.size(), 2u);
  expect_sound(rho, *found, 1e-12);
}

TEST(search_decomposition, product_state_one_term) {
  const ComplexMatrix a = ComplexMatrix::outer(std::vector<Complex>{0.6, Complex(0.0, 0.8)});
  const ComplexMatrix b = ComplexMatrix::outer(std::vector<Complex>{1.0, 0.0, 0.0});
  const auto rho = validate(2, 3, kron(a, b));
  const auto found = search_decomposition(rho);
  ASSERT_TRUE(found.has_value());
  EXPECT_EQ(found->weights.size(), 1u);
  expect_sound(rho, *found, 1e-6);
}

TEST(search_decomposition, mixed_separable_two_by_three) {
  Decomposition d;
  d.weights = {0.3, 0.7};
  d.factors_a = {random_density(2, 1), random_density(2, 2)};
  d.factors_b = {random_density(3, 3), random_density(3, 4)};
  const auto rho = separable_mixture(d);
  const auto found = search_decomposition(rho);
  ASSERT_TRUE(found.has_value());
  expect_sound(rho, *found, 1e-6);
}

TEST(search_decomposition, entangled_states_never_decomposed) {
  EXPECT_FALSE(search_decomposition(singlet()).has_value());
  SearchConfig small;
  small.restarts = 4;
  small.iterations = 1000;
  for (const auto& rho : {werner(0.5), singlet_polarized(0.5), gisin(0.8, 0.6, 0.8)}) {
    ASSERT_LT(ppt_report(rho).witness, -1e-6);
    EXPECT_FALSE(search_decomposition(rho, small).has_value());
  }
}

TEST(search_decomposition, deterministic_for_fixed_seed) {
  const auto rho = werner(0.2);
  SearchConfig cfg;
  cfg.seed = 9;
  cfg.threads = 1;
  const auto first = search_decomposition(rho, cfg);
  cfg.threads = 3;
  const auto second = search_decomposition(rho, cfg);
  ASSERT_TRUE(first.has_value());
  ASSERT_TRUE(second.has_value());
  EXPECT_EQ(first->weights, second->weights);
  EXPECT_EQ(first->factors_a, second->factors_a);
  EXPECT_EQ(first->factors_b, second->factors_b);
  EXPECT_EQ(first->residual, second->residual);
}

TEST(search_decomposition, argument_checks) {
  const auto big = validate(2, 5, random_density(10, 1));
  EXPECT_EQ(kind_of([&] { search_decomposition(big); }), ErrorKind::DimensionCapExceeded);
  SearchConfig cfg;
  cfg.max_terms = 0;
  EXPECT_EQ(kind_of([&] { search_decomposition(werner(0.1), cfg); }), ErrorKind::ParameterOutOfRange);
  cfg = SearchConfig{};
  cfg.residual_tol = 0.0;
  EXPECT_EQ(kind_of([&] { search_decomposition(werner(0.1), cfg); }), ErrorKind::ParameterOutOfRange);
  cfg = SearchConfig{};
  cfg.restarts = 0;
  EXPECT_EQ(kind_of([&] { search_decomposition(werner(0.1), cfg); }), ErrorKind::ParameterOutOfRange);
}
