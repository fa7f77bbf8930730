#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "normgrid/common.hpp"

namespace normgrid {

enum class DomainKind { Interval, Torus, Atoms };

/// Probability measure on a one-dimensional domain, paired with the
/// quadrature grid every norm in the library is evaluated on.
///
/// Grid weights are strictly positive and sum to one. For atom measures the
/// grid is the atom set itself (sorted coordinates), so sampling and norm
/// evaluation see exactly the same measure.
class ReferenceMeasure {
 public:
  /// Uniform measure on [0, 2*pi) with an equispaced grid.
  static ReferenceMeasure torus_uniform(std::size_t grid_size);
  /// Normalized Lebesgue measure on [a, b] with a Gauss-Legendre grid.
  static ReferenceMeasure interval_uniform(double a, double b, std::size_t grid_size);
  /// Finite atom set. Points must be strictly increasing; weights are
  /// normalized to sum to one and must be positive.
  static ReferenceMeasure atoms(std::vector<double> points, Vector weights);

  DomainKind kind() const { return kind_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  std::size_t grid_size() const { return static_cast<std::size_t>(grid_points_.size()); }
  const Vector& grid_points() const { return grid_points_; }
  const Vector& grid_weights() const { return grid_weights_; }

  bool contains(double x) const;
  double draw(std::mt19937_64& rng) const;
  /// Index of the atom at coordinate x; throws std::invalid_argument when x
  /// is not an atom. Atom measures only.
  std::size_t atom_index(double x) const;

 private:
  ReferenceMeasure() = default;

  DomainKind kind_ = DomainKind::Torus;
  double lower_ = 0.0;
  double upper_ = 0.0;
  Vector grid_points_;
  Vector grid_weights_;
  std::vector<double> cumulative_;  // atoms only
};

/// Coefficients of f = sum_i c_i u_i in a given subspace basis.
struct FunctionCoeffs {
  Vector values;

  FunctionCoeffs() = default;
  explicit FunctionCoeffs(Vector v) : values(std::move(v)) {}
  Eigen::Index size() const { return values.size(); }
};

/// Serializable recipe for the built-in subspace families.
struct SubspaceDescriptor {
  std::string kind = "custom";  // "trig" | "discrete" | "custom"
  int degree = 0;               // trig
  int dimension = 0;            // discrete
  int atoms = 0;                // discrete
  std::uint64_t seed = 0;       // discrete
  double heavy_atom_scale = 1.0;  // discrete: row-0 multiplier before orthonormalization
  std::size_t grid_size = 0;
};

/// Evaluates the raw (pre-transform) basis at x into `out` (length N).
using RawBasis = std::function<void(double x, Eigen::Ref<Vector> out)>;

/// N-dimensional subspace of C(domain) with basis u(x) = T * raw(x).
///
/// Immutable after construction and cheap to copy (shared state). The grid
/// evaluation matrix (grid points x basis functions) is computed once.
class Subspace {
 public:
  Subspace(std::size_t dimension, RawBasis raw, ReferenceMeasure measure,
           SubspaceDescriptor descriptor = {});

  std::size_t dimension() const { return state_->dimension; }
  const ReferenceMeasure& measure() const { return state_->measure; }
  const SubspaceDescriptor& descriptor() const { return state_->descriptor; }
  bool orthonormal() const { return state_->orthonormal; }

  /// u_1(x), ..., u_N(x).
  Vector evaluate(double x) const;
  /// Rows are basis evaluations at each point.
  Matrix evaluate(std::span<const double> points) const;
  double value(const FunctionCoeffs& f, double x) const;

  /// Basis values on the quadrature grid, grid_size x N.
  const Matrix& grid_values() const { return state_->grid_values; }
  /// L2(mu) Gram matrix on the quadrature grid.
  Matrix gram() const;

  /// Same raw basis with u(x) = transform * (current u)(x).
  Subspace transformed(const Matrix& transform, bool orthonormal) const;
  Subspace with_descriptor(SubspaceDescriptor descriptor) const;

 private:
  struct State {
    std::size_t dimension = 0;
    RawBasis raw;
    Matrix transform;
    ReferenceMeasure measure;
    SubspaceDescriptor descriptor;
    bool orthonormal = false;
    Matrix grid_values;
  };
  explicit Subspace(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  static Matrix compute_grid_values(const State& s);

  std::shared_ptr<const State> state_;
};

/// Default grid resolution for an N-dimensional subspace: 8 * max(N, 64).
std::size_t default_grid_size(std::size_t dimension);

/// span{1, sqrt2 cos kx, sqrt2 sin kx : 1 <= k <= n} on the torus with the
/// uniform measure, ordered 1, cos x, sin x, cos 2x, sin 2x, ...
/// The grid is at least 8(2n+1) points; grid_size = 0 selects the default.
Subspace build_trig_subspace(int degree, std::size_t grid_size = 0);

/// Random subspace over K uniform atoms: a K x N standard normal table,
/// orthonormalized in L2(mu). Row 0 is multiplied by `heavy_atom_scale`
/// before orthonormalization, which raises the leverage of atom 0.
/// Retries with fresh derived seeds up to 8 times on rank deficiency.
Subspace build_discrete_subspace(int dimension, int atoms, std::uint64_t seed,
                                 double heavy_atom_scale = 1.0);

/// Subspace spanned by the given functions on [a, b] with the normalized
/// Lebesgue measure. Not orthonormalized.
Subspace build_interval_subspace(std::vector<std::function<double(double)>> functions,
                                 double a, double b, std::size_t grid_size = 0);

/// Subspace over atoms 0..K-1 whose basis values are the columns of `table`
/// (K x N), with atom probabilities `weights`. Not orthonormalized.
Subspace build_table_subspace(Matrix table, Vector weights);

/// Subspace over the atoms `points` (strictly increasing) with basis values
/// given by the rows of `table`. Not orthonormalized.
Subspace build_atom_subspace(std::vector<double> points, Matrix table, Vector weights);

/// Rebuilds a built-in family from its descriptor.
Subspace build_subspace(const SubspaceDescriptor& descriptor);

struct Orthonormalization {
  Subspace subspace;
  /// Maps coefficients in the input basis to coefficients in the output basis.
  Matrix coefficient_map;
};

/// Orthonormalizes with the symmetric inverse square root of the grid Gram
/// matrix. Throws NumericalError("ill-conditioned basis") when the Gram
/// condition number exceeds 1e12.
Orthonormalization orthonormalize_with_map(const Subspace& subspace);
Subspace orthonormalize(const Subspace& subspace);

/// (sum_g w_g |f(x_g)|^p) over the quadrature grid, i.e. ||f||_p^p.
double lp_norm_pow(const FunctionCoeffs& f, const Subspace& subspace, double p);
/// ||f||_p on the quadrature grid; p in [1, inf).
double lp_norm(const FunctionCoeffs& f, const Subspace& subspace, double p);

/// Sum over grid points g and basis functions i of w_g u_i(x_g)^2.
double gram_trace(const Subspace& subspace);

}  // namespace normgrid
