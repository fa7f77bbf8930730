#include "normgrid/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace normgrid {

namespace {

double linf_distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

std::size_t covering_cardinality(int k) {
  if (k < 0 || k > 5) throw std::invalid_argument("level k must lie in [0, 5]");
  if (k == 0) return 1;
  return std::size_t{1} << (std::size_t{1} << k);
}

CoverEstimates greedy_cover_profile(const Matrix& cloud, int k_max) {
  if (k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
  const std::size_t n = static_cast<std::size_t>(cloud.rows());
  if (n == 0) throw std::invalid_argument("empty candidate cloud");
  const std::size_t max_centers = covering_cardinality(k_max);

  // Column-major transpose so each candidate is contiguous.
  const Matrix points = cloud.transpose();
  const auto dim = points.rows();

  Vector from_origin(static_cast<Eigen::Index>(n));
  Vector from_first(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    from_origin[c] = dim ? points.col(c).cwiseAbs().maxCoeff() : 0.0;
    from_first[c] = dim ? linf_distance(points.col(c), points.col(0)) : 0.0;
  }
  Vector dist = from_origin.maxCoeff() <= from_first.maxCoeff() ? from_origin : from_first;

  // radius[j]: covering radius with j + 1 centers. insertion[j]: distance of
  // traversal point j + 1 to the previous ones (equals radius[j]).
  std::vector<double> radius;
  radius.reserve(max_centers);
  double separation = std::numeric_limits<double>::infinity();
  std::vector<double> packing;
  packing.reserve(max_centers);
  for (std::size_t centers = 1;; ++centers) {
    Eigen::Index far = 0;
    const double r = dist.maxCoeff(&far);
    radius.push_back(r);
    separation = std::min(separation, r);
    packing.push_back(separation / 2.0);
    if (centers == max_centers) break;
    if (r == 0.0) {
      radius.resize(max_centers, 0.0);
      packing.resize(max_centers, 0.0);
      break;
    }
    const auto col = points.col(far);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<Eigen::Index>(i);
      dist[c] = std::min(dist[c], linf_distance(points.col(c), col));
    }
  }

  CoverEstimates out;
  for (int k = 0; k <= k_max; ++k) {
    const std::size_t centers = covering_cardinality(k);
    out.e_hat.push_back(radius[centers - 1]);
    out.p_hat.push_back(packing[centers - 1]);
  }
  return out;
}

EntropyProfile entropy_profile(const Subspace& subspace, double p, const SampleSet& samples,
                               int k_max, std::size_t candidate_count, std::uint64_t seed) {
  if (k_max < 0 || k_max > 4) throw std::invalid_argument("k_max must lie in [0, 4]");
  if (candidate_count < covering_cardinality(k_max))
    throw std::invalid_argument("candidate_count must be at least 2^{2^k_max}");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");

  const auto n = static_cast<Eigen::Index>(subspace.dimension());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix directions(n, static_cast<Eigen::Index>(candidate_count));
  for (Eigen::Index j = 0; j < directions.cols(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) directions(i, j) = normal(rng);
    const double norm = lp_norm(FunctionCoeffs(directions.col(j)), subspace, p);
    if (norm > 0.0) directions.col(j) /= norm;
  }
  const Matrix cloud = (samples.evaluations * directions).transpose();
  CoverEstimates cover = greedy_cover_profile(cloud, k_max);

  EntropyProfile profile;
  profile.e_hat = std::move(cover.e_hat);
  profile.p_hat = std::move(cover.p_hat);
  profile.m = samples.size();
  profile.seed = seed;
  profile.candidate_count = candidate_count;
  if (profile.e_hat.size() >= 3) {
    try {
      const DecayFit fit = fit_decay(profile.e_hat);
      profile.W = fit.W;
      profile.theta = fit.theta;
    } catch (const NumericalError&) {
    }
  }
  return profile;
}

DecayFit fit_decay(std::span<const double> e_hat) {
  if (e_hat.size() < 3) throw std::invalid_argument("fit_decay needs at least 3 levels");
  std::vector<double> ks;
  std::vector<double> logs;
  for (std::size_t k = 0; k < e_hat.size(); ++k) {
    if (!std::isfinite(e_hat[k]) || e_hat[k] < 0.0)
      throw std::invalid_argument("entropy estimates must be finite and nonnegative");
    if (e_hat[k] > 0.0) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log2(e_hat[k]));
    }
  }
  if (ks.size() < 2) throw NumericalError("profile too flat");
  const double count = static_cast<double>(ks.size());
  double mk = 0.0;
  double ml = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    mk += ks[i];
    ml += logs[i];
  }
  mk /= count;
  ml /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxy += (ks[i] - mk) * (logs[i] - ml);
    sxx += (ks[i] - mk) * (ks[i] - mk);
  }
  const double slope = sxy / sxx;
  const double intercept = ml - slope * mk;
  // A flat or rising profile gives theta = +inf or a negative theta.
  return {std::exp2(intercept), slope == 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / slope};
}

DecayFit fit_decay(const EntropyProfile& profile) { return fit_decay(profile.e_hat); }

double dudley_sum(std::span<const double> e_hat, double tau) {
  if (!(tau >= 2.0)) throw std::invalid_argument("tau must be at least 2");
  double sum = 0.0;
  for (std::size_t k = 0; k < e_hat.size(); ++k)
    sum += std::exp2(static_cast<double>(k) / tau) * e_hat[k];
  return sum;
}

double dudley_sum(const EntropyProfile& profile, double tau) {
  return dudley_sum(profile.e_hat, tau);
}

PropagationCheck decay_propagation_check(std::span<const double> e_hat, std::size_t dimension,
                                         double slack) {
  if (dimension == 0) throw std::invalid_argument("dimension must be positive");
  const double n = static_cast<double>(dimension);
  PropagationCheck check;
  for (std::size_t k0 = 0; k0 < e_hat.size(); ++k0) {
    for (std::size_t k = k0 + 1; k < e_hat.size(); ++k) {
      PropagationTerm t;
      t.k0 = static_cast<int>(k0);
      t.k = static_cast<int>(k);
      t.measured = e_hat[k];
      const double exponent =
          (std::exp2(static_cast<double>(k0)) - std::exp2(static_cast<double>(k))) / n;
      t.bound = 3.0 * std::exp2(exponent) * e_hat[k0] * (1.0 + slack);
      t.holds = t.measured <= t.bound;
      check.holds = check.holds && t.holds;
      check.terms.push_back(t);
    }
  }
  return check;
}

PropagationCheck decay_propagation_check(const EntropyProfile& profile, std::size_t dimension,
                                         double slack) {
  return decay_propagation_check(profile.e_hat, dimension, slack);
}

bool lp_envelope_check(std::span<const double> e_hat, double p, double factor) {
  if (e_hat.empty()) return true;
  const std::size_t last = std::min<std::size_t>(3, e_hat.size() - 1);
  for (std::size_t k = 1; k <= last; ++k)
    if (e_hat[k] > factor * e_hat[0] * std::exp2(-static_cast<double>(k) / p)) return false;
  return true;
}

}  // namespace normgrid
