#pragma once

#include <cstdint>
#include <string>

#include "normgrid/discretization.hpp"
#include "normgrid/function_spaces.hpp"

namespace normgrid {

/// l_p Lewis weights of a design, one per grid point.
///
/// For a subspace the design rows are a_g = mu_g^{1/p} u(x_g), so that
/// ||A c||_p^p = ||f||_p^p on the grid. The weights sum to N.
struct LewisWeightVector {
  double p = 2.0;
  Vector weights;
  double residual = 0.0;
  int iterations = 0;
  /// drho = dnu/dmu per grid point, with nu_g = w_g / sum(w). Empty for raw designs.
  Vector density;
};

class LewisNotConverged : public NumericalError {
 public:
  explicit LewisNotConverged(double residual);
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Leverage scores a_g^T (A^T A)^{-1} a_g.
Vector leverage_scores(const Matrix& design);

/// The fixed-point map w -> (a_g^T (A^T W^{1-2/p} A)^{-1} a_g)^{p/2}.
/// Throws NumericalError("degenerate design") when the weighted Gram is singular.
Vector lewis_map(const Matrix& design, const Vector& weights, double p);

/// max_g |w_g - lewis_map(w)_g|.
double lewis_residual(const Matrix& design, const Vector& weights, double p);

/// Plain fixed-point iteration from w = N/G for p in (1, 4), where the map
/// is a contraction. Throws LewisNotConverged after `max_iter` updates.
LewisWeightVector lewis_weights(const Matrix& design, double p, double tol = 1e-10,
                                int max_iter = 500);
LewisWeightVector lewis_weights(const Subspace& subspace, double p, double tol = 1e-10,
                                int max_iter = 500);

/// Lewis change of density: nu = (w / N) on the grid and the isometric image
/// L' = { f (dmu/dnu)^{1/p} } re-orthonormalized in L2(nu).
struct ChangeOfDensity {
  LewisWeightVector lewis;
  ReferenceMeasure nu;
  Subspace transformed;
  /// Coefficients of f in `transformed` = coefficient_map * (coefficients in the source basis).
  Matrix coefficient_map;
  /// Grid indices (into the source grid) of the atoms of nu.
  std::vector<std::size_t> support;

  FunctionCoeffs image(const FunctionCoeffs& f) const;
};

ChangeOfDensity change_of_density(const Subspace& subspace, double p, double tol = 1e-10,
                                  int max_iter = 500);

/// X_j i.i.d. from nu with lambda_j = (1/m) (dmu/dnu)(X_j), so that
/// E sum_j lambda_j |f(X_j)|^p = ||f||_p^p on the grid.
SampleSet weighted_discretization(const Subspace& subspace, const ChangeOfDensity& change,
                                  std::size_t m, std::uint64_t seed);
SampleSet weighted_discretization(const Subspace& subspace, double p, std::size_t m,
                                  std::uint64_t seed);

/// CSV with header grid_index,point,w,rho.
std::string lewis_weights_csv(const Subspace& subspace, const LewisWeightVector& lewis);

}  // namespace normgrid
