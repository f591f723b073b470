#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "sepcheck/detail/jacobi.hpp"
#include "sepcheck/detail/nnls.hpp"
#include "sepcheck/errors.hpp"
#include "sepcheck/linalg.hpp"
#include "sepcheck/oracle.hpp"
#include "sepcheck/rng.hpp"

namespace sepcheck {

namespace {

// Stagnation: fewer than this relative gain over kStallWindow iterations.
constexpr int kStallWindow = 40;
constexpr double kStallGain = 0.05;
// Annealing rounds without a new best before the restart is abandoned.
constexpr int kMaxAnnealRounds = 12;
constexpr int kMovesPerRound = 8;
// Terms whose projectors overlap this closely are merged.
constexpr double kMergeFidelity = 1.0 - 1e-12;

using Vector = std::vector<Complex>;

Vector random_unit(std::size_t d, Rng& rng) {
  Vector v(d);
  double norm = 0.0;
  for (Complex& z : v) {
    z = rng.complex_gaussian();
    norm += std::norm(z);
  }
  norm = std::sqrt(norm);
  for (Complex& z : v) z /= norm;
  return v;
}

void normalize(Vector& v) {
  double norm = 0.0;
  for (const Complex& z : v) norm += std::norm(z);
  norm = std::sqrt(norm);
  for (Complex& z : v) z /= norm;
}

Vector product_vector(const Vector& a, const Vector& b) {
  Vector z;
  z.reserve(a.size() * b.size());
  for (const Complex& x : a) {
    for (const Complex& y : b) z.push_back(x * y);
  }
  return z;
}

Vector top_eigenvector(const ComplexMatrix& m) {
  return detail::hermitian_eigenpairs(m).vectors.back();
}

std::vector<double> realify(const ComplexMatrix& m) {
  std::vector<double> out;
  out.reserve(2 * m.entries().size());
  for (const Complex& z : m.entries()) {
    out.push_back(z.real());
    out.push_back(z.imag());
  }
  return out;
}

double overlap2(const Vector& u, const Vector& v) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return std::norm(s);
}

// One restart's working state: rho ~ sum_k w_k |a_k b_k><a_k b_k|.
class Mixture {
 public:
  Mixture(const BipartiteDensityMatrix& rho, std::size_t terms, Rng& rng)
      : rho_(rho.matrix()), da_(rho.dim_a()), db_(rho.dim_b()), target_(realify(rho_)) {
    for (std::size_t k = 0; k < terms; ++k) {
      a_.push_back(random_unit(da_, rng));
      b_.push_back(random_unit(db_, rng));
    }
    w_.assign(terms, 0.0);
    fit_weights();
  }

  double residual_norm() const { return residual_.frobenius_norm(); }

  // Exact minimization over (a_k, b_k, w_k) one block at a time.
  void sweep() {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      ComplexMatrix rk = residual_;
      if (w_[k] > 0.0) rk += w_[k] * projector(k);

      ComplexMatrix ma(da_);
      for (std::size_t m = 0; m < da_; ++m) {
        for (std::size_t n = 0; n < da_; ++n) {
          Complex s = 0.0;
          for (std::size_t mu = 0; mu < db_; ++mu) {
            for (std::size_t nu = 0; nu < db_; ++nu) {
              s += std::conj(b_[k][mu]) * rk(m * db_ + mu, n * db_ + nu) * b_[k][nu];
            }
          }
          ma(m, n) = s;
        }
      }
      a_[k] = top_eigenvector(ma);

      ComplexMatrix mb(db_);
      for (std::size_t mu = 0; mu < db_; ++mu) {
        for (std::size_t nu = 0; nu < db_; ++nu) {
          Complex s = 0.0;
          for (std::size_t m = 0; m < da_; ++m) {
            for (std::size_t n = 0; n < da_; ++n) {
              s += std::conj(a_[k][m]) * rk(m * db_ + mu, n * db_ + nu) * a_[k][n];
            }
          }
          mb(mu, nu) = s;
        }
      }
      b_[k] = top_eigenvector(mb);

      const ComplexMatrix pk = projector(k);
      w_[k] = std::max(0.0, frobenius_inner(pk, rk));
      residual_ = rk;
      if (w_[k] > 0.0) residual_ -= w_[k] * pk;
    }
  }

  void fit_weights() {
    std::vector<std::vector<double>> columns;
    columns.reserve(w_.size());
    for (std::size_t k = 0; k < w_.size(); ++k) columns.push_back(realify(projector(k)));
    w_ = detail::nnls(columns, target_);
    refresh_residual();
  }

  void perturb(std::size_t k, double scale, Rng& rng) {
    for (Complex& z : a_[k]) z += scale * rng.complex_gaussian();
    for (Complex& z : b_[k]) z += scale * rng.complex_gaussian();
    normalize(a_[k]);
    normalize(b_[k]);
  }

  std::size_t size() const { return w_.size(); }

  // Drops zero-weight terms and fuses near-duplicates (weights added, the
  // heavier term's vectors kept). Returns true if the term count changed.
  bool compact(double min_fidelity) {
    std::vector<std::size_t> order(w_.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return w_[x] > w_[y]; });
    std::vector<Vector> a;
    std::vector<Vector> b;
    std::vector<double> w;
    for (std::size_t k : order) {
      if (!(w_[k] > 0.0)) continue;
      bool merged = false;
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (overlap2(a[j], a_[k]) * overlap2(b[j], b_[k]) >= min_fidelity) {
          w[j] += w_[k];
          merged = true;
          break;
        }
      }
      if (!merged) {
        a.push_back(a_[k]);
        b.push_back(b_[k]);
        w.push_back(w_[k]);
      }
    }
    if (w.empty() || w.size() == w_.size()) return false;
    a_ = std::move(a);
    b_ = std::move(b);
    w_ = std::move(w);
    fit_weights();
    return true;
  }

  // Removes the lightest term, refitting the weights, for as long as the
  // residual stays within tol.
  void prune(double tol) {
    while (w_.size() > 1) {
      const auto k = static_cast<std::size_t>(
          std::min_element(w_.begin(), w_.end()) - w_.begin());
      Mixture trial = *this;
      trial.a_.erase(trial.a_.begin() + static_cast<std::ptrdiff_t>(k));
      trial.b_.erase(trial.b_.begin() + static_cast<std::ptrdiff_t>(k));
      trial.w_.erase(trial.w_.begin() + static_cast<std::ptrdiff_t>(k));
      trial.fit_weights();
      if (trial.residual_norm() > tol) return;
      *this = std::move(trial);
    }
  }

  Decomposition extract() const {
    // Merge coinciding product terms and drop empty ones.
    std::vector<Vector> a;
    std::vector<Vector> b;
    std::vector<double> w;
    for (std::size_t k = 0; k < w_.size(); ++k) {
      if (!(w_[k] > 0.0)) continue;
      bool merged = false;
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (overlap2(a[j], a_[k]) >= kMergeFidelity && overlap2(b[j], b_[k]) >= kMergeFidelity) {
          w[j] += w_[k];
          merged = true;
          break;
        }
      }
      if (!merged) {
        a.push_back(a_[k]);
        b.push_back(b_[k]);
        w.push_back(w_[k]);
      }
    }
    double total = 0.0;
    for (double x : w) total += x;
    Decomposition d;
    for (std::size_t k = 0; k < w.size(); ++k) {
      d.weights.push_back(w[k] / total);
      d.factors_a.push_back(ComplexMatrix::outer(a[k]));
      d.factors_b.push_back(ComplexMatrix::outer(b[k]));
    }
    return d;
  }

 private:
  ComplexMatrix projector(std::size_t k) const {
    return ComplexMatrix::outer(product_vector(a_[k], b_[k]));
  }

  void refresh_residual() {
    residual_ = rho_;
    for (std::size_t k = 0; k < w_.size(); ++k) {
      if (w_[k] > 0.0) residual_ -= w_[k] * projector(k);
    }
  }

  ComplexMatrix rho_;
  std::size_t da_;
  std::size_t db_;
  std::vector<double> target_;
  std::vector<Vector> a_;
  std::vector<Vector> b_;
  std::vector<double> w_;
  ComplexMatrix residual_;
};

std::optional<Decomposition> run_restart(const BipartiteDensityMatrix& rho,
                                         const SearchConfig& cfg, std::size_t terms,
                                         std::uint64_t restart) {
  Rng rng(cfg.seed, restart);
  Mixture mix(rho, terms, rng);

  auto finish = [&](Mixture m) -> std::optional<Decomposition> {
    m.prune(0.5 * cfg.residual_tol);
    Decomposition d = m.extract();
    d.residual = decomposition_residual(rho, d);
    if (d.residual <= cfg.residual_tol) return d;
    return std::nullopt;
  };

  double best = mix.residual_norm();
  std::vector<double> history;
  int anneal_rounds = 0;
  double temperature = 0.1 * best;

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    mix.sweep();
    mix.fit_weights();
    const double f = mix.residual_norm();
    if (f <= 0.5 * cfg.residual_tol) {
      if (auto d = finish(mix)) return d;
    }
    if (f < best) {
      best = f;
      anneal_rounds = 0;
    }
    history.push_back(f);
    const std::size_t h = history.size();
    if (h <= static_cast<std::size_t>(kStallWindow)) continue;
    if (f < (1.0 - kStallGain) * history[h - 1 - kStallWindow]) continue;

    history.clear();
    // Terms closer than the current residual can resolve are fused.
    if (mix.compact(1.0 - std::clamp(10.0 * f, 1e-12, 1e-2))) continue;
    // Stalled: anneal single-term perturbations from the current point.
    if (++anneal_rounds > kMaxAnnealRounds) break;
    temperature = std::max(temperature * 0.7, 1e-3 * f);
    for (int move = 0; move < kMovesPerRound; ++move) {
      Mixture trial = mix;
      const auto k = static_cast<std::size_t>(rng.next_u64() % trial.size());
      trial.perturb(k, std::sqrt(f), rng);
      trial.fit_weights();
      trial.sweep();
      const double g = trial.residual_norm();
      if (g < f || rng.uniform() < std::exp(-(g - f) / temperature)) {
        mix = std::move(trial);
        if (g < best) best = g;
        break;
      }
    }
  }
  if (mix.residual_norm() <= cfg.residual_tol) return finish(mix);
  return std::nullopt;
}

}  // namespace

double decomposition_residual(const BipartiteDensityMatrix& rho,
                              const Decomposition& decomp) {
  ComplexMatrix diff = rho.matrix();
  for (std::size_t k = 0; k < decomp.weights.size(); ++k) {
    diff -= decomp.weights[k] * kron(decomp.factors_a[k], decomp.factors_b[k]);
  }
  return diff.frobenius_norm();
}

std::optional<Decomposition> search_decomposition(const BipartiteDensityMatrix& rho,
                                                  const SearchConfig& cfg) {
  const std::size_t n = rho.dim_a() * rho.dim_b();
  if (n > kSearchDimCap) {
    throw Error(ErrorKind::DimensionCapExceeded,
                "decomposition search handles dA*dB <= " +
                    std::to_string(kSearchDimCap) + ", got " + std::to_string(n));
  }
  const std::size_t terms = cfg.max_terms.value_or(n * n);
  if (terms == 0 || cfg.restarts < 1 || cfg.iterations < 1 || !(cfg.residual_tol > 0.0)) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "search needs max_terms >= 1, restarts >= 1, iterations >= 1, "
                "residual_tol > 0");
  }

  unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, threads);
  const auto restarts = static_cast<std::uint64_t>(cfg.restarts);

  for (std::uint64_t first = 0; first < restarts; first += threads) {
    const std::uint64_t last = std::min<std::uint64_t>(restarts, first + threads);
    if (threads == 1) {
      if (auto d = run_restart(rho, cfg, terms, first)) return d;
      continue;
    }
    std::vector<std::future<std::optional<Decomposition>>> batch;
    for (std::uint64_t r = first; r < last; ++r) {
      batch.push_back(std::async(std::launch::async, run_restart, std::cref(rho),
                                 std::cref(cfg), terms, r));
    }
    // Collect everything before choosing so the winner is the lowest index.
    std::vector<std::optional<Decomposition>> results;
    for (auto& f : batch) results.push_back(f.get());
    for (auto& result : results) {
      if (result) return result;
    }
  }
  return std::nullopt;
}

}  // namespace sepcheck
