#include "normgrid/discretization.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace normgrid {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double weighted_pow_sum(const Vector& values, const Vector& weights, double p) {
  if (p == 2.0) return weights.dot(values.cwiseAbs2());
  return weights.dot(values.array().abs().pow(p).matrix());
}

// Gradient of sum_j a_j |v_j|^p with respect to c, where v = rows * c.
Vector pow_sum_gradient(const Matrix& rows, const Vector& values, const Vector& weights, double p) {
  // |v|^{p-1} sign(v) vanishes at v = 0 for p > 1.
  const Vector inner =
      (weights.array() * values.array().abs().pow(p - 1.0) * values.array().sign()).matrix();
  return p * (rows.transpose() * inner);
}

// Maximizes |S(c) / T(c) - offset| where S(c) = sum_j a_j |E_j c|^p and
// T(c) = ||f||_p^p on the grid. Returns the best coefficients normalized to
// T = 1 and the attained value.
struct DeviationProblem {
  const Matrix& samples;
  const Vector& sample_weights;
  const Matrix& grid;
  const Vector& grid_weights;
  double p;
  double offset;

  double norm_pow(const Vector& c) const { return weighted_pow_sum(grid * c, grid_weights, p); }
  double sample_pow(const Vector& c) const {
    return weighted_pow_sum(samples * c, sample_weights, p);
  }

  bool normalize(Vector& c) const {
    const double t = norm_pow(c);
    if (!(t > 0.0) || !std::isfinite(t)) return false;
    c /= std::pow(t, 1.0 / p);
    return true;
  }

  // Signed deviation r - offset for c with T(c) = 1.
  double signed_value(const Vector& c) const { return sample_pow(c) - offset; }
};

struct DeviationResult {
  Vector coeffs;
  double value = -1.0;
};

DeviationResult ascend_deviation(const DeviationProblem& prob, Vector c, const AscentOptions& opt) {
  if (!prob.normalize(c)) return {};
  double current = prob.signed_value(c);
  double step = opt.initial_step;
  for (int iter = 0; iter < opt.max_iterations && step > 1e-14; ++iter) {
    const double direction = current >= 0.0 ? 1.0 : -1.0;
    const Vector sv = prob.samples * c;
    const Vector gv = prob.grid * c;
    // grad of S/T at T = 1: grad S - S grad T.
    const double s = weighted_pow_sum(sv, prob.sample_weights, prob.p);
    Vector grad = pow_sum_gradient(prob.samples, sv, prob.sample_weights, prob.p) -
                  s * pow_sum_gradient(prob.grid, gv, prob.grid_weights, prob.p);
    const double gnorm = grad.norm();
    if (!(gnorm > 0.0) || !std::isfinite(gnorm)) break;
    grad *= direction * c.norm() / gnorm;

    bool improved = false;
    while (step > 1e-14) {
      Vector trial = c + step * grad;
      if (prob.normalize(trial)) {
        const double v = prob.signed_value(trial);
        if (std::abs(v) > std::abs(current)) {
          const double gain = (std::abs(v) - std::abs(current)) / std::max(std::abs(current), 1e-300);
          c = std::move(trial);
          current = v;
          improved = true;
          if (gain < opt.relative_tolerance) step = 0.0;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved || step == 0.0) break;
    step = std::min(2.0 * step, opt.initial_step);
  }
  return {std::move(c), std::abs(current)};
}

DeviationResult maximize_deviation(const DeviationProblem& prob, const std::vector<Vector>& starts,
                                   const AscentOptions& opt) {
  DeviationResult best;
  for (const auto& s : starts) {
    if (s.norm() == 0.0) continue;
    DeviationResult r = ascend_deviation(prob, s, opt);
    if (r.value > best.value) best = std::move(r);
  }
  return best;
}

Matrix empirical_gram(const SampleSet& samples) {
  const Matrix weighted = samples.weights.asDiagonal() * samples.evaluations;
  return samples.evaluations.transpose() * weighted;
}

std::vector<Vector> random_starts(Eigen::Index n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vector> starts(static_cast<std::size_t>(count), Vector(n));
  for (auto& s : starts)
    for (Eigen::Index i = 0; i < n; ++i) s[i] = normal(rng);
  return starts;
}

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in (1, inf)");
}

}  // namespace

std::string to_string(Exactness exactness) {
  return exactness == Exactness::EigenExact ? "eigen-exact" : "lower-bound";
}

SampleSet make_sample_set(const Subspace& subspace, std::vector<double> points,
                          std::optional<Vector> weights, std::uint64_t seed) {
  if (points.empty()) throw std::invalid_argument("sample set needs at least one point");
  for (double x : points)
    if (!subspace.measure().contains(x)) throw std::invalid_argument("sample point outside domain");
  const auto m = static_cast<Eigen::Index>(points.size());
  SampleSet s;
  s.evaluations = subspace.evaluate(points);
  if (weights) {
    if (weights->size() != m) throw std::invalid_argument("weights and points differ in length");
    if ((weights->array() <= 0.0).any() || !weights->allFinite())
      throw std::invalid_argument("sample weights must be strictly positive");
    s.weights = std::move(*weights);
  } else {
    s.weights = Vector::Constant(m, 1.0 / static_cast<double>(m));
  }
  s.points = std::move(points);
  s.seed = seed;
  return s;
}

SampleSet sample_points(const Subspace& subspace, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  std::mt19937_64 rng(seed);
  std::vector<double> points(m);
  for (auto& x : points) x = subspace.measure().draw(rng);
  return make_sample_set(subspace, std::move(points), std::nullopt, seed);
}

double normalized_deviation(const Subspace& subspace, const SampleSet& samples,
                            const Vector& coeffs, double p) {
  const double norm = lp_norm(FunctionCoeffs(coeffs), subspace, p);
  if (norm == 0.0) return 0.0;
  const Vector c = coeffs / norm;
  const double empirical = weighted_pow_sum(samples.evaluations * c, samples.weights, p);
  const double truth = lp_norm_pow(FunctionCoeffs(c), subspace, p);
  return std::abs(empirical - truth);
}

DiscretizationReport v2_exact(const Subspace& subspace, const SampleSet& samples) {
  if (!subspace.orthonormal()) throw std::invalid_argument("v2_exact requires an orthonormal basis");
  const auto start = Clock::now();
  const auto n = static_cast<Eigen::Index>(subspace.dimension());
  const Matrix deviation = empirical_gram(samples) - Matrix::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(deviation);
  const Vector& lambda = eig.eigenvalues();
  const Eigen::Index extreme = std::abs(lambda[0]) >= std::abs(lambda[n - 1]) ? 0 : n - 1;

  DiscretizationReport r;
  r.p = 2.0;
  r.m = samples.size();
  r.dimension = subspace.dimension();
  r.value = std::abs(lambda[extreme]);
  r.exactness = Exactness::EigenExact;
  r.worst = FunctionCoeffs(eig.eigenvectors().col(extreme));
  r.seed = samples.seed;
  r.elapsed_ms = elapsed_ms_since(start);
  return r;
}

DiscretizationReport vp_lower_bound(const Subspace& subspace, const SampleSet& samples, double p,
                                    int restarts, std::uint64_t seed, AscentOptions options) {
  require_p(p);
  if (restarts < 0) throw std::invalid_argument("restarts must be nonnegative");
  const auto start = Clock::now();
  const auto n = static_cast<Eigen::Index>(subspace.dimension());

  std::vector<Vector> starts = random_starts(n, restarts, seed);
  {
    const Matrix deviation = empirical_gram(samples) - subspace.gram();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(deviation);
    starts.push_back(eig.eigenvectors().col(0));
    if (n > 1) starts.push_back(eig.eigenvectors().col(n - 1));
  }

  const DeviationProblem prob{samples.evaluations, samples.weights, subspace.grid_values(),
                              subspace.measure().grid_weights(), p, 1.0};
  DeviationResult best = maximize_deviation(prob, starts, options);

  DiscretizationReport r;
  r.p = p;
  r.m = samples.size();
  r.dimension = subspace.dimension();
  r.value = std::max(best.value, 0.0);
  r.exactness = Exactness::LowerBound;
  r.worst = FunctionCoeffs(best.value >= 0.0 ? best.coeffs : Vector::Zero(n));
  r.seed = seed;
  r.elapsed_ms = elapsed_ms_since(start);
  return r;
}

Verdict check_discretization(const DiscretizationReport& report, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  return {report.value <= eps, report.exactness == Exactness::EigenExact};
}

DiscretizationReport with_verdict(DiscretizationReport report, double eps) {
  const Verdict v = check_discretization(report, eps);
  report.epsilon = eps;
  report.pass = v.pass;
  report.not_refuted_only = v.pass && !v.certified;
  return report;
}

DiscretizationReport discretization_report(const Subspace& subspace, const SampleSet& samples,
                                           double p, int restarts, std::uint64_t seed) {
  if (p == 2.0 && subspace.orthonormal()) return v2_exact(subspace, samples);
  return vp_lower_bound(subspace, samples, p, restarts, seed);
}

SuccessEstimate success_probability(const Subspace& subspace, double p, std::size_t m, double eps,
                                    std::size_t trials, std::uint64_t seed, int restarts) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  const SampleSource source = [&subspace, m](std::uint64_t s) { return sample_points(subspace, m, s); };
  return success_probability(subspace, p, eps, trials, seed, source, restarts);
}

SuccessEstimate success_probability(const Subspace& subspace, double p, double eps,
                                    std::size_t trials, std::uint64_t seed,
                                    const SampleSource& source, int restarts) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  std::vector<char> passed(trials, 0);
  parallel_for(trials, [&](std::size_t k) {
    const std::uint64_t trial_seed = split_seed(seed, k);
    const SampleSet samples = source(trial_seed);
    const auto report =
        discretization_report(subspace, samples, p, restarts, split_seed(trial_seed, 1));
    passed[k] = check_discretization(report, eps).pass ? 1 : 0;
  });
  SuccessEstimate est;
  est.trials = trials;
  for (char c : passed) est.successes += static_cast<std::size_t>(c);
  est.rate = static_cast<double>(est.successes) / static_cast<double>(trials);
  est.interval = wilson_interval(est.successes, trials);
  return est;
}

double rademacher_sup(const Subspace& subspace, const SampleSet& samples, const Vector& signs,
                      double p, int restarts, std::uint64_t seed) {
  require_p(p);
  if (signs.size() != static_cast<Eigen::Index>(samples.size()))
    throw std::invalid_argument("one sign per sample point required");
  const auto n = static_cast<Eigen::Index>(subspace.dimension());
  const Matrix process = samples.evaluations.transpose() * signs.asDiagonal() * samples.evaluations;
  if (p == 2.0 && subspace.orthonormal()) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(process, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
  }
  std::vector<Vector> starts = random_starts(n, restarts, seed);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(process);
  starts.push_back(eig.eigenvectors().col(0));
  if (n > 1) starts.push_back(eig.eigenvectors().col(n - 1));
  const DeviationProblem prob{samples.evaluations, signs, subspace.grid_values(),
                              subspace.measure().grid_weights(), p, 0.0};
  return std::max(0.0, maximize_deviation(prob, starts, AscentOptions{}).value);
}

bool SymmetrizationEstimate::holds(double k) const {
  return lhs <= rhs + k * (lhs_stderr + rhs_stderr);
}

SymmetrizationEstimate symmetrization_check(const Subspace& subspace, double p, std::size_t m,
                                            std::size_t trials, int restarts, std::uint64_t seed) {
  require_p(p);
  if (m == 0) throw std::invalid_argument("m must be positive");
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  std::vector<double> lhs(trials);
  std::vector<double> rhs(trials);
  parallel_for(trials, [&](std::size_t t) {
    const std::uint64_t trial_seed = split_seed(seed, t);
    const SampleSet samples = sample_points(subspace, m, trial_seed);
    const auto report =
        discretization_report(subspace, samples, p, restarts, split_seed(trial_seed, 1));
    std::mt19937_64 rng(split_seed(trial_seed, 2));
    std::bernoulli_distribution coin(0.5);
    Vector signs(static_cast<Eigen::Index>(m));
    for (Eigen::Index j = 0; j < signs.size(); ++j) signs[j] = coin(rng) ? 1.0 : -1.0;
    lhs[t] = static_cast<double>(m) * report.value;
    rhs[t] = 2.0 * rademacher_sup(subspace, samples, signs, p, restarts, split_seed(trial_seed, 3));
  });

  auto mean_and_stderr = [trials](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    const double n = static_cast<double>(trials);
    const double se = trials > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    return std::pair{mean, se};
  };
  SymmetrizationEstimate est;
  est.trials = trials;
  std::tie(est.lhs, est.lhs_stderr) = mean_and_stderr(lhs);
  std::tie(est.rhs, est.rhs_stderr) = mean_and_stderr(rhs);
  return est;
}

}  // namespace normgrid
