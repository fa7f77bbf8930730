#include "normgrid/lewis_weights.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

namespace normgrid {

namespace {

void require_lewis_p(double p) {
  if (!(p > 1.0 && p < 4.0)) throw std::invalid_argument("Lewis weights require p in (1, 4)");
}

// Rows a_g = mu_g^{1/p} u(x_g).
Matrix subspace_design(const Subspace& subspace, double p) {
  const Vector scale = subspace.measure().grid_weights().array().pow(1.0 / p).matrix();
  return scale.asDiagonal() * subspace.grid_values();
}

Vector quadratic_forms(const Matrix& design, const Vector& row_scale) {
  const Matrix gram = design.transpose() * row_scale.asDiagonal() * design;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalError("degenerate design");
  const Matrix solved = llt.matrixL().solve(design.transpose());
  if (!solved.allFinite()) throw NumericalError("degenerate design");
  return solved.colwise().squaredNorm().transpose();
}

}  // namespace

LewisNotConverged::LewisNotConverged(double residual)
    : NumericalError("lewis fixed point not converged (residual " + std::to_string(residual) + ")"),
      residual_(residual) {}

Vector leverage_scores(const Matrix& design) {
  return quadratic_forms(design, Vector::Ones(design.rows()));
}

Vector lewis_map(const Matrix& design, const Vector& weights, double p) {
  if (weights.size() != design.rows()) throw std::invalid_argument("one weight per design row");
  const double exponent = 1.0 - 2.0 / p;
  Vector row_scale(weights.size());
  for (Eigen::Index g = 0; g < weights.size(); ++g)
    row_scale[g] = weights[g] > 0.0 ? std::pow(weights[g], exponent) : 0.0;
  return quadratic_forms(design, row_scale).array().pow(p / 2.0).matrix();
}

double lewis_residual(const Matrix& design, const Vector& weights, double p) {
  return (weights - lewis_map(design, weights, p)).cwiseAbs().maxCoeff();
}

LewisWeightVector lewis_weights(const Matrix& design, double p, double tol, int max_iter) {
  require_lewis_p(p);
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
  const auto rows = design.rows();
  const auto n = design.cols();
  Vector w = Vector::Constant(rows, static_cast<double>(n) / static_cast<double>(rows));
  for (int iter = 0;; ++iter) {
    const Vector next = lewis_map(design, w, p);
    const double residual = (w - next).cwiseAbs().maxCoeff();
    if (residual <= tol) return {p, std::move(w), residual, iter, {}};
    if (iter == max_iter) throw LewisNotConverged(residual);
    w = next;
  }
}

LewisWeightVector lewis_weights(const Subspace& subspace, double p, double tol, int max_iter) {
  require_lewis_p(p);
  LewisWeightVector lw = lewis_weights(subspace_design(subspace, p), p, tol, max_iter);
  const Vector nu = lw.weights / lw.weights.sum();
  lw.density = nu.cwiseQuotient(subspace.measure().grid_weights());
  return lw;
}

FunctionCoeffs ChangeOfDensity::image(const FunctionCoeffs& f) const {
  return FunctionCoeffs(coefficient_map * f.values);
}

ChangeOfDensity change_of_density(const Subspace& subspace, double p, double tol, int max_iter) {
  LewisWeightVector lw = lewis_weights(subspace, p, tol, max_iter);
  const Vector& points = subspace.measure().grid_points();
  const Vector& mu = subspace.measure().grid_weights();
  const Matrix& values = subspace.grid_values();

  std::vector<std::size_t> support;
  for (Eigen::Index g = 0; g < lw.weights.size(); ++g)
    if (lw.density[g] > 0.0) support.push_back(static_cast<std::size_t>(g));

  const auto k = static_cast<Eigen::Index>(support.size());
  std::vector<double> atom_points(support.size());
  Vector nu(k);
  Matrix table(k, values.cols());
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto g = static_cast<Eigen::Index>(support[static_cast<std::size_t>(i)]);
    atom_points[static_cast<std::size_t>(i)] = points[g];
    nu[i] = lw.density[g] * mu[g];
    table.row(i) = values.row(g) * std::pow(lw.density[g], -1.0 / p);
  }
  Subspace image = build_atom_subspace(atom_points, std::move(table), nu);
  Orthonormalization ortho = orthonormalize_with_map(image);
  ReferenceMeasure nu_measure = ortho.subspace.measure();
  return {std::move(lw), std::move(nu_measure), std::move(ortho.subspace),
          std::move(ortho.coefficient_map), std::move(support)};
}

SampleSet weighted_discretization(const Subspace& subspace, const ChangeOfDensity& change,
                                  std::size_t m, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  std::mt19937_64 rng(seed);
  std::vector<double> points(m);
  Vector weights(static_cast<Eigen::Index>(m));
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = change.nu.draw(rng);
    const std::size_t atom = change.nu.atom_index(x);
    const auto g = static_cast<Eigen::Index>(change.support[atom]);
    const double rho = change.lewis.density[g];
    if (!(rho > 0.0)) throw NumericalError("drew an atom outside the support of nu");
    points[j] = x;
    weights[static_cast<Eigen::Index>(j)] = inv_m / rho;
  }
  SampleSet set = make_sample_set(subspace, std::move(points), std::move(weights), seed);
  set.density = DensityDescriptor{change.lewis.p, subspace.measure().grid_points(),
                                  change.lewis.density};
  return set;
}

SampleSet weighted_discretization(const Subspace& subspace, double p, std::size_t m,
                                  std::uint64_t seed) {
  return weighted_discretization(subspace, change_of_density(subspace, p), m, seed);
}

std::string lewis_weights_csv(const Subspace& subspace, const LewisWeightVector& lewis) {
  std::ostringstream out;
  out << "grid_index,point,w,rho\n";
  const Vector& points = subspace.measure().grid_points();
  char line[128];
  for (Eigen::Index g = 0; g < lewis.weights.size(); ++g) {
    std::snprintf(line, sizeof line, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(g),
                  points[g], lewis.weights[g], lewis.density.size() ? lewis.density[g] : 0.0);
    out << line;
  }
  return out.str();
}

}  // namespace normgrid
