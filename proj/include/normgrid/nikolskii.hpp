#pragma once

#include <cstdint>
#include <string>

#include "normgrid/function_spaces.hpp"

namespace normgrid {

enum class NikolskiiMethod { ExactGrid, Multistart };

std::string to_string(NikolskiiMethod method);

/// Estimate of the constant M in ||f||_inf <= M N^{1/q} ||f||_q, where
/// ||f||_inf is the maximum over the quadrature grid.
///
/// `maximizer` normalized to ||f*||_q = 1 certifies the value: re-evaluating
/// ratio(f*) reproduces `constant`. For Multistart estimates the constant is
/// a lower bound on the true grid constant.
struct NikolskiiEstimate {
  double q = 2.0;
  double constant = 1.0;
  double argmax = 0.0;
  FunctionCoeffs maximizer;
  NikolskiiMethod method = NikolskiiMethod::ExactGrid;
  std::size_t dimension = 1;

  /// K with ||f||_inf <= K N^{1/p} ||f||_p implied by a q = 2 estimate:
  /// M^{2/p} for p < 2 (interpolating ||f||_2^2 <= ||f||_inf^{2-p} ||f||_p^p),
  /// and M N^{1/2 - 1/p} for p >= 2 (monotonicity of L^p norms).
  double induced_lp_constant(double p) const;
};

/// Given an (inf, p) constant M_p with p >= 2, the factor K in
/// ||f||_inf <= K ||f||_2, namely M_p^{p/2} sqrt(N).
double sup_over_l2_factor_from_lp(double lp_constant, double p, std::size_t dimension);

/// ||f||_inf,grid / (N^{1/q} ||f||_q) for the given coefficients.
double nikolskii_ratio(const Subspace& subspace, const Vector& coeffs, double q);

/// Exact grid constant for q = 2 via the reproducing kernel:
/// M = max_g sqrt(sum_i u_i(x_g)^2 / N). Requires an orthonormal basis.
NikolskiiEstimate nikolskii_q2(const Subspace& subspace);

struct AscentOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-10;
  double initial_step = 0.5;
};

/// Multi-start lower bound on the (inf, q) constant. Starts are the
/// reproducing-kernel direction at every grid point plus `restarts` random
/// Gaussian directions; each is refined by normalized gradient ascent with
/// step halving on non-improvement.
NikolskiiEstimate nikolskii_general(const Subspace& subspace, double q, int restarts,
                                    std::uint64_t seed = 0, AscentOptions options = {});

}  // namespace normgrid
