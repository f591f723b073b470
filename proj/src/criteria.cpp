#include "sepcheck/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "sepcheck/errors.hpp"
#include "sepcheck/linalg.hpp"

namespace sepcheck {

namespace {

const std::array<ComplexMatrix, 3>& paulis() {
  static const std::array<ComplexMatrix, 3> kPaulis = {
      ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}},
      ComplexMatrix{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}},
      ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}},
  };
  return kPaulis;
}

double purity(const ComplexMatrix& m) { return frobenius_inner(m, m); }

void require_normalized(Complex a, Complex b) {
  const double norm2 = std::norm(a) + std::norm(b);
  if (!(std::abs(norm2 - 1.0) <= kNormTolerance)) {
    throw Error(ErrorKind::NotNormalized,
                "|a|^2 + |b|^2 = " + std::to_string(norm2), norm2);
  }
}

}  // namespace

std::string_view to_string(Criterion criterion) {
  switch (criterion) {
    case Criterion::Ppt: return "ppt";
    case Criterion::ChshHorodecki: return "chsh_horodecki";
    case Criterion::Renyi2: return "renyi2";
  }
  return "unknown";
}

Criterion parse_criterion(std::string_view name) {
  if (name == "ppt") return Criterion::Ppt;
  if (name == "chsh" || name == "chsh_horodecki") return Criterion::ChshHorodecki;
  if (name == "renyi2") return Criterion::Renyi2;
  throw Error(ErrorKind::UnknownCriterion, std::string(name));
}

ComplexMatrix partial_transpose(const BipartiteDensityMatrix& rho) {
  const std::size_t da = rho.dim_a();
  const std::size_t db = rho.dim_b();
  ComplexMatrix sigma(da * db);
  for (std::size_t m = 0; m < da; ++m) {
    for (std::size_t n = 0; n < da; ++n) {
      for (std::size_t mu = 0; mu < db; ++mu) {
        for (std::size_t nu = 0; nu < db; ++nu) {
          sigma(m * db + mu, n * db + nu) = rho(n * db + mu, m * db + nu);
        }
      }
    }
  }
  return sigma;
}

CriterionReport ppt_report(const BipartiteDensityMatrix& rho) {
  CriterionReport report;
  report.criterion = Criterion::Ppt;
  report.spectrum = hermitian_eigenvalues(partial_transpose(rho));
  report.witness = report.spectrum->front();
  report.inseparable_detected = report.witness < -kPptMargin;
  return report;
}

std::vector<std::vector<double>> correlation_matrix(const BipartiteDensityMatrix& rho) {
  if (rho.dim_a() != 2 || rho.dim_b() != 2) {
    throw Error(ErrorKind::DimensionMismatch,
                "correlation matrix needs a 2x2 bipartition, got " +
                    std::to_string(rho.dim_a()) + "x" + std::to_string(rho.dim_b()));
  }
  std::vector<std::vector<double>> t(3, std::vector<double>(3));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      // tr(rho P) for Hermitian rho, P equals <P, rho> in the Frobenius sense.
      t[i][j] = frobenius_inner(kron(paulis()[i], paulis()[j]), rho.matrix());
    }
  }
  return t;
}

CriterionReport chsh_horodecki(const BipartiteDensityMatrix& rho) {
  const auto t = correlation_matrix(rho);
  ComplexMatrix tt(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < 3; ++k) sum += t[k][i] * t[k][j];
      tt(i, j) = sum;
    }
  }
  const std::vector<double> eig = hermitian_eigenvalues(tt);
  CriterionReport report;
  report.criterion = Criterion::ChshHorodecki;
  report.witness = eig[1] + eig[2];
  report.inseparable_detected = report.witness > 1.0 + kChshMargin;
  return report;
}

CriterionReport renyi2_report(const BipartiteDensityMatrix& rho) {
  const double global = purity(rho.matrix());
  const double marginal = std::min(purity(partial_trace(rho, Subsystem::A)),
                                   purity(partial_trace(rho, Subsystem::B)));
  CriterionReport report;
  report.criterion = Criterion::Renyi2;
  report.witness = global - marginal;
  report.inseparable_detected = report.witness > kRenyi2Margin;
  return report;
}

CriterionReport evaluate(Criterion criterion, const BipartiteDensityMatrix& rho) {
  switch (criterion) {
    case Criterion::Ppt: return ppt_report(rho);
    case Criterion::ChshHorodecki: return chsh_horodecki(rho);
    case Criterion::Renyi2: return renyi2_report(rho);
  }
  throw Error(ErrorKind::UnknownCriterion, "unhandled criterion");
}

std::vector<std::size_t> copies_to_bipartition(int k) {
  std::vector<std::size_t> perm;
  for (int i = 0; i < k; ++i) perm.push_back(2 * static_cast<std::size_t>(i));
  for (int i = 0; i < k; ++i) perm.push_back(2 * static_cast<std::size_t>(i) + 1);
  return perm;
}

BipartiteDensityMatrix tensor_power(const BipartiteDensityMatrix& rho, int k) {
  if (k != 2 && k != 3) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "tensor power must be 2 or 3, got " + std::to_string(k), k);
  }
  const std::size_t da = rho.dim_a();
  const std::size_t db = rho.dim_b();
  std::size_t power_a = 1;
  std::size_t power_b = 1;
  for (int i = 0; i < k; ++i) {
    power_a *= da;
    power_b *= db;
  }
  if (power_a * power_b > kTensorPowerDimCap) {
    throw Error(ErrorKind::DimensionCapExceeded,
                "tensor power dimension " + std::to_string(power_a * power_b) +
                    " exceeds " + std::to_string(kTensorPowerDimCap));
  }

  ComplexMatrix copies = rho.matrix();
  std::vector<std::size_t> dims = {da, db};
  for (int i = 1; i < k; ++i) {
    copies = kron(copies, rho.matrix());
    dims.push_back(da);
    dims.push_back(db);
  }
  const auto perm = copies_to_bipartition(k);
  return validate(power_a, power_b, permute_subsystems(copies, dims, perm),
                  TraceHandling::Keep);
}

double werner_ppt_threshold() { return 1.0 / 3.0; }

double werner_chsh_threshold() { return 1.0 / std::numbers::sqrt2; }

double werner_renyi2_threshold() { return std::numbers::inv_sqrt3; }

double gisin_ppt_threshold(Complex a, Complex b) {
  require_normalized(a, b);
  return 1.0 / (1.0 + 2.0 * std::abs(a * b));
}

double gisin_bell_threshold(Complex a, Complex b) {
  require_normalized(a, b);
  return 1.0 / (1.0 + 2.0 * std::abs(a * b) * (std::numbers::sqrt2 - 1.0));
}

}  // namespace sepcheck
