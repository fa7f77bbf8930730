#include "normgrid/nikolskii.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace normgrid {

namespace {

struct RatioEval {
  double ratio = 0.0;
  Eigen::Index argmax = 0;
};

double lq_norm_of_values(const Vector& values, const Vector& weights, double q) {
  const double scale = values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return scale * std::pow(weights.dot((values.array().abs() / scale).pow(q).matrix()), 1.0 / q);
}

RatioEval eval_ratio(const Matrix& grid, const Vector& weights, const Vector& c, double q,
                     double n_factor) {
  const Vector f = grid * c;
  RatioEval r;
  const double sup = f.cwiseAbs().maxCoeff(&r.argmax);
  const double norm = lq_norm_of_values(f, weights, q);
  r.ratio = norm > 0.0 ? sup / (n_factor * norm) : 0.0;
  return r;
}

// Rescales c so that ||f||_q = 1 on the grid.
void normalize(const Matrix& grid, const Vector& weights, Vector& c, double q) {
  const double norm = lq_norm_of_values(grid * c, weights, q);
  if (norm > 0.0) c /= norm;
}

struct AscentResult {
  Vector coeffs;
  RatioEval eval;
};

AscentResult ascend(const Matrix& grid, const Vector& weights, Vector c, double q,
                    double n_factor, const AscentOptions& opt) {
  normalize(grid, weights, c, q);
  RatioEval best = eval_ratio(grid, weights, c, q, n_factor);
  double step = opt.initial_step;
  for (int iter = 0; iter < opt.max_iterations && step > 1e-14; ++iter) {
    const Vector f = grid * c;
    const double fmax = f[best.argmax];
    if (fmax == 0.0) break;
    // d/dc [log|f(x*)| - log ||f||_q] with ||f||_q = 1.
    const Vector weighted = (weights.array() * f.array().abs().pow(q - 1.0) *
                             f.array().sign()).matrix();
    Vector grad = grid.row(best.argmax).transpose() / fmax - grid.transpose() * weighted;
    const double gnorm = grad.norm();
    if (!(gnorm > 0.0) || !std::isfinite(gnorm)) break;
    grad *= c.norm() / gnorm;

    bool improved = false;
    while (step > 1e-14) {
      Vector trial = c + step * grad;
      normalize(grid, weights, trial, q);
      const RatioEval e = eval_ratio(grid, weights, trial, q, n_factor);
      if (e.ratio > best.ratio) {
        const double gain = (e.ratio - best.ratio) / best.ratio;
        c = std::move(trial);
        best = e;
        improved = true;
        if (gain < opt.relative_tolerance) step = 0.0;
        break;
      }
      step *= 0.5;
    }
    if (!improved || step == 0.0) break;
    step = std::min(2.0 * step, opt.initial_step);
  }
  return {std::move(c), best};
}

}  // namespace

std::string to_string(NikolskiiMethod method) {
  return method == NikolskiiMethod::ExactGrid ? "exact-grid" : "multistart";
}

double NikolskiiEstimate::induced_lp_constant(double p) const {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
  if (q != 2.0) throw std::invalid_argument("induced constants are derived from q = 2 estimates");
  if (p < 2.0) return std::pow(constant, 2.0 / p);
  return constant * std::pow(static_cast<double>(dimension), 0.5 - 1.0 / p);
}

double sup_over_l2_factor_from_lp(double lp_constant, double p, std::size_t dimension) {
  if (!(p >= 2.0)) throw std::invalid_argument("requires p >= 2");
  return std::pow(lp_constant, p / 2.0) * std::sqrt(static_cast<double>(dimension));
}

double nikolskii_ratio(const Subspace& subspace, const Vector& coeffs, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must be at least 1");
  const double n_factor = std::pow(static_cast<double>(subspace.dimension()), 1.0 / q);
  return eval_ratio(subspace.grid_values(), subspace.measure().grid_weights(), coeffs, q, n_factor)
      .ratio;
}

NikolskiiEstimate nikolskii_q2(const Subspace& subspace) {
  if (!subspace.orthonormal())
    throw std::invalid_argument("nikolskii_q2 requires an orthonormal basis");
  const Matrix& grid = subspace.grid_values();
  const Vector kernel = grid.rowwise().squaredNorm();
  Eigen::Index g = 0;
  const double kmax = kernel.maxCoeff(&g);
  NikolskiiEstimate est;
  est.q = 2.0;
  est.dimension = subspace.dimension();
  est.constant = std::sqrt(kmax / static_cast<double>(subspace.dimension()));
  est.argmax = subspace.measure().grid_points()[g];
  est.maximizer = FunctionCoeffs(grid.row(g).transpose() / std::sqrt(kmax));
  est.method = NikolskiiMethod::ExactGrid;
  return est;
}

NikolskiiEstimate nikolskii_general(const Subspace& subspace, double q, int restarts,
                                    std::uint64_t seed, AscentOptions options) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("q must lie in [1, inf)");
  if (restarts < 0) throw std::invalid_argument("restarts must be nonnegative");
  const Matrix& grid = subspace.grid_values();
  const Vector& weights = subspace.measure().grid_weights();
  const auto n = static_cast<Eigen::Index>(subspace.dimension());
  const double n_factor = std::pow(static_cast<double>(n), 1.0 / q);

  // Kernel directions are u(x_g) in an orthonormal basis; for a general basis
  // the reproducing direction at x is G^{-1} u(x).
  Matrix start_map = Matrix::Identity(n, n);
  if (!subspace.orthonormal()) start_map = subspace.gram().ldlt().solve(Matrix::Identity(n, n));

  const auto grid_starts = static_cast<std::size_t>(grid.rows());
  const std::size_t total = grid_starts + static_cast<std::size_t>(restarts);
  std::vector<Vector> starts(total);
  for (std::size_t s = 0; s < grid_starts; ++s)
    starts[s] = start_map * grid.row(static_cast<Eigen::Index>(s)).transpose();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (std::size_t s = grid_starts; s < total; ++s) {
    starts[s].resize(n);
    for (Eigen::Index i = 0; i < n; ++i) starts[s][i] = normal(rng);
  }

  std::vector<AscentResult> results(total);
  parallel_for(total, [&](std::size_t s) {
    if (starts[s].norm() == 0.0) {
      results[s] = {Vector::Zero(n), {}};
      return;
    }
    results[s] = ascend(grid, weights, starts[s], q, n_factor, options);
  });

  std::size_t best = 0;
  for (std::size_t s = 1; s < total; ++s)
    if (results[s].eval.ratio > results[best].eval.ratio) best = s;

  NikolskiiEstimate est;
  est.q = q;
  est.dimension = subspace.dimension();
  est.constant = results[best].eval.ratio;
  est.argmax = subspace.measure().grid_points()[results[best].eval.argmax];
  est.maximizer = FunctionCoeffs(results[best].coeffs);
  est.method = NikolskiiMethod::Multistart;
  return est;
}

}  // namespace normgrid
