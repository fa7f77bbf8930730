#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "normgrid/function_spaces.hpp"
#include "normgrid/nikolskii.hpp"

namespace normgrid {

/// Grid density a weighted sample set was drawn from (dnu/dmu per grid point).
struct DensityDescriptor {
  double p = 2.0;
  Vector grid_points;
  Vector density;  // rho_g = nu_g / mu_g
};

/// m points with their basis evaluations (m x N) and quadrature weights
/// lambda_j. Unweighted sets carry lambda_j = 1/m.
struct SampleSet {
  std::vector<double> points;
  Matrix evaluations;
  Vector weights;
  std::uint64_t seed = 0;
  std::optional<DensityDescriptor> density;

  std::size_t size() const { return points.size(); }
};

/// Builds a sample set at explicit points. Weights default to 1/m each and
/// must be strictly positive when given.
SampleSet make_sample_set(const Subspace& subspace, std::vector<double> points,
                          std::optional<Vector> weights = std::nullopt, std::uint64_t seed = 0);

/// m i.i.d. draws from the reference measure, deterministic in `seed`.
SampleSet sample_points(const Subspace& subspace, std::size_t m, std::uint64_t seed);

enum class Exactness { EigenExact, LowerBound };

std::string to_string(Exactness exactness);

struct DiscretizationReport {
  double p = 2.0;
  std::size_t m = 0;
  std::size_t dimension = 0;
  double value = 0.0;
  Exactness exactness = Exactness::EigenExact;
  FunctionCoeffs worst;  // normalized to ||f||_p = 1
  std::optional<double> epsilon;
  bool pass = false;
  bool not_refuted_only = false;  // pass is "not refuted" rather than certified
  double elapsed_ms = 0.0;
  std::uint64_t seed = 0;
};

/// |sum_j lambda_j |f(X_j)|^p - ||f||_p^p| for f normalized to ||f||_p = 1.
double normalized_deviation(const Subspace& subspace, const SampleSet& samples,
                            const Vector& coeffs, double p);

/// V_2 as the spectral norm of sum_j lambda_j E_j^T E_j - I, by symmetric
/// eigendecomposition. Requires an orthonormal basis.
DiscretizationReport v2_exact(const Subspace& subspace, const SampleSet& samples);

/// Multi-start lower bound on V_p. Starts are `restarts` Gaussian directions
/// and the two extreme eigenvectors of the p = 2 deviation matrix. Every
/// iterate is renormalized to ||f||_p = 1, so the value is attained by a
/// feasible function.
DiscretizationReport vp_lower_bound(const Subspace& subspace, const SampleSet& samples, double p,
                                    int restarts, std::uint64_t seed,
                                    AscentOptions options = {});

struct Verdict {
  bool pass = false;
  /// False for lower-bound reports: a pass only means "not refuted".
  bool certified = false;
};

/// V_p <= eps. Throws std::invalid_argument unless eps lies in (0, 1).
Verdict check_discretization(const DiscretizationReport& report, double eps);
/// Copy of `report` with epsilon, pass and not_refuted_only filled in.
DiscretizationReport with_verdict(DiscretizationReport report, double eps);

/// Report for one sample set: exact at p = 2, lower bound otherwise.
DiscretizationReport discretization_report(const Subspace& subspace, const SampleSet& samples,
                                           double p, int restarts, std::uint64_t seed);

struct SuccessEstimate {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double rate = 0.0;
  WilsonInterval interval;
};

/// Produces the sample set for one trial from its derived seed.
using SampleSource = std::function<SampleSet(std::uint64_t trial_seed)>;

/// Fraction of independent sample sets passing check_discretization with a
/// 95% Wilson interval. Trial k uses seed split_seed(seed, k). For p != 2
/// the rate overestimates the true success rate (lower-bound verdicts).
SuccessEstimate success_probability(const Subspace& subspace, double p, std::size_t m, double eps,
                                    std::size_t trials, std::uint64_t seed, int restarts = 4);
SuccessEstimate success_probability(const Subspace& subspace, double p, double eps,
                                    std::size_t trials, std::uint64_t seed,
                                    const SampleSource& source, int restarts = 4);

/// sup over ||f||_p <= 1 of |sum_j signs_j |f(X_j)|^p|. Exact (spectral
/// norm) at p = 2; multi-start lower bound otherwise.
double rademacher_sup(const Subspace& subspace, const SampleSet& samples, const Vector& signs,
                      double p, int restarts, std::uint64_t seed);

/// Monte Carlo sides of the symmetrization inequality
/// m E[V_p] <= 2 E sup_f |sum_j eps_j |f(X_j)|^p|.
struct SymmetrizationEstimate {
  std::size_t trials = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs_stderr = 0.0;

  /// lhs <= rhs + k (lhs_stderr + rhs_stderr).
  bool holds(double k = 3.0) const;
};

SymmetrizationEstimate symmetrization_check(const Subspace& subspace, double p, std::size_t m,
                                            std::size_t trials, int restarts, std::uint64_t seed);

}  // namespace normgrid
