#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "normgrid/discretization.hpp"
#include "normgrid/function_spaces.hpp"

namespace normgrid {

/// Number of centers allowed at level k: 1 for k = 0, 2^{2^k} for k >= 1.
std::size_t covering_cardinality(int k);

/// Covering (e_hat) and packing (p_hat) estimates per level.
struct CoverEstimates {
  std::vector<double> e_hat;
  std::vector<double> p_hat;
};

/// Farthest-first traversal of a point cloud (rows) under the max-coordinate
/// metric. The first center is the origin or the first row, whichever covers
/// the cloud with the smaller radius; later centers are the farthest
/// remaining rows. e_hat[k] is the covering radius with covering_cardinality(k)
/// centers (nonincreasing, since center sets are nested); p_hat[k] is half
/// the minimum pairwise distance among the first covering_cardinality(k) + 1
/// traversal points.
CoverEstimates greedy_cover_profile(const Matrix& cloud, int k_max);

struct EntropyProfile {
  std::vector<double> e_hat;
  std::vector<double> p_hat;
  std::optional<double> W;
  std::optional<double> theta;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::size_t candidate_count = 0;

  int k_max() const { return static_cast<int>(e_hat.size()) - 1; }
};

/// Empirical entropy numbers of B_p(L) under ||.||_{inf,X}: `candidate_count`
/// random directions normalized to ||f||_p = 1 are mapped to their values on
/// the sample points and covered greedily. Requires k_max <= 4 and
/// candidate_count >= 2^{2^k_max}.
EntropyProfile entropy_profile(const Subspace& subspace, double p, const SampleSet& samples,
                               int k_max = 3, std::size_t candidate_count = 8192,
                               std::uint64_t seed = 0);

struct DecayFit {
  double W = 0.0;
  double theta = 0.0;
};

/// Least-squares fit of log2 e_k = log2 W - k / theta. Zero entries are
/// dropped. Needs at least 3 input values and 2 nonzero ones, else throws
/// std::invalid_argument / NumericalError("profile too flat").
DecayFit fit_decay(std::span<const double> e_hat);
DecayFit fit_decay(const EntropyProfile& profile);

/// sum_{k=0}^{k_max} 2^{k/tau} e_k.
double dudley_sum(std::span<const double> e_hat, double tau);
double dudley_sum(const EntropyProfile& profile, double tau);

struct PropagationTerm {
  int k0 = 0;
  int k = 0;
  double measured = 0.0;
  double bound = 0.0;
  bool holds = true;
};

struct PropagationCheck {
  bool holds = true;
  std::vector<PropagationTerm> terms;
};

/// Checks e_k <= 3 2^{2^{k0}/N} e_{k0} 2^{-2^k/N} (1 + slack) for every
/// measured pair k0 < k.
PropagationCheck decay_propagation_check(std::span<const double> e_hat, std::size_t dimension,
                                         double slack = 0.2);
PropagationCheck decay_propagation_check(const EntropyProfile& profile, std::size_t dimension,
                                         double slack = 0.2);

/// e_k <= factor * e_0 * 2^{-k/p} for k = 1..min(3, k_max); the shape of the
/// p in (1, 2) entropy bound with its constant fitted at k = 0.
bool lp_envelope_check(std::span<const double> e_hat, double p, double factor = 2.0);

}  // namespace normgrid
