#include "normgrid/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace normgrid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxGramCondition = 1e12;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(std::size_t n, Vector& nodes, Vector& weights) {
  nodes.resize(static_cast<Eigen::Index>(n));
  weights.resize(static_cast<Eigen::Index>(n));
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<Eigen::Index>(i);
    const auto hi = static_cast<Eigen::Index>(n - 1 - i);
    nodes[lo] = -x;
    nodes[hi] = x;
    weights[lo] = w;
    weights[hi] = w;
  }
  if (n % 2 == 1) nodes[static_cast<Eigen::Index>(n / 2)] = 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// ReferenceMeasure

ReferenceMeasure ReferenceMeasure::torus_uniform(std::size_t grid_size) {
  if (grid_size == 0) throw std::invalid_argument("grid_size must be positive");
  ReferenceMeasure m;
  m.kind_ = DomainKind::Torus;
  m.lower_ = 0.0;
  m.upper_ = kTwoPi;
  const auto n = static_cast<Eigen::Index>(grid_size);
  m.grid_points_.resize(n);
  for (Eigen::Index g = 0; g < n; ++g)
    m.grid_points_[g] = kTwoPi * static_cast<double>(g) / static_cast<double>(n);
  m.grid_weights_ = Vector::Constant(n, 1.0 / static_cast<double>(n));
  return m;
}

ReferenceMeasure ReferenceMeasure::interval_uniform(double a, double b, std::size_t grid_size) {
  if (!(b > a)) throw std::invalid_argument("interval requires a < b");
  if (grid_size == 0) throw std::invalid_argument("grid_size must be positive");
  ReferenceMeasure m;
  m.kind_ = DomainKind::Interval;
  m.lower_ = a;
  m.upper_ = b;
  Vector nodes;
  Vector weights;
  gauss_legendre(grid_size, nodes, weights);
  m.grid_points_ = (a + (b - a) * (nodes.array() + 1.0) / 2.0).matrix();
  m.grid_weights_ = weights / weights.sum();
  return m;
}

ReferenceMeasure ReferenceMeasure::atoms(std::vector<double> points, Vector weights) {
  if (points.empty()) throw std::invalid_argument("atom set must be non-empty");
  if (static_cast<Eigen::Index>(points.size()) != weights.size())
    throw std::invalid_argument("atom points and weights differ in length");
  if (!std::is_sorted(points.begin(), points.end()) ||
      std::adjacent_find(points.begin(), points.end()) != points.end())
    throw std::invalid_argument("atom points must be strictly increasing");
  if ((weights.array() <= 0.0).any() || !weights.allFinite())
    throw std::invalid_argument("atom weights must be positive and finite");
  ReferenceMeasure m;
  m.kind_ = DomainKind::Atoms;
  m.lower_ = points.front();
  m.upper_ = points.back();
  m.grid_points_ = Eigen::Map<const Vector>(points.data(), static_cast<Eigen::Index>(points.size()));
  m.grid_weights_ = weights / weights.sum();
  m.cumulative_.resize(points.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    acc += m.grid_weights_[static_cast<Eigen::Index>(i)];
    m.cumulative_[i] = acc;
  }
  m.cumulative_.back() = 1.0;
  return m;
}

bool ReferenceMeasure::contains(double x) const {
  switch (kind_) {
    case DomainKind::Torus:
      return x >= 0.0 && x < kTwoPi;
    case DomainKind::Interval:
      return x >= lower_ && x <= upper_;
    case DomainKind::Atoms: {
      const auto* begin = grid_points_.data();
      const auto* end = begin + grid_points_.size();
      return std::binary_search(begin, end, x);
    }
  }
  return false;
}

double ReferenceMeasure::draw(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (kind_) {
    case DomainKind::Torus: {
      double x = kTwoPi * unit(rng);
      return x >= kTwoPi ? 0.0 : x;
    }
    case DomainKind::Interval:
      return lower_ + (upper_ - lower_) * unit(rng);
    case DomainKind::Atoms: {
      const double u = unit(rng);
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      if (it == cumulative_.end()) --it;
      return grid_points_[it - cumulative_.begin()];
    }
  }
  return 0.0;
}

std::size_t ReferenceMeasure::atom_index(double x) const {
  if (kind_ != DomainKind::Atoms) throw std::invalid_argument("atom_index on a non-atom measure");
  const auto* begin = grid_points_.data();
  const auto* end = begin + grid_points_.size();
  const auto* it = std::lower_bound(begin, end, x);
  if (it == end || *it != x) throw std::invalid_argument("point is not an atom of the measure");
  return static_cast<std::size_t>(it - begin);
}

// ---------------------------------------------------------------------------
// Subspace

Subspace::Subspace(std::size_t dimension, RawBasis raw, ReferenceMeasure measure,
                   SubspaceDescriptor descriptor) {
  if (dimension == 0) throw std::invalid_argument("subspace dimension must be positive");
  auto s = std::make_shared<State>(State{dimension, std::move(raw),
                                         Matrix::Identity(static_cast<Eigen::Index>(dimension),
                                                          static_cast<Eigen::Index>(dimension)),
                                         std::move(measure), std::move(descriptor), false, {}});
  s->grid_values = compute_grid_values(*s);
  state_ = std::move(s);
}

Matrix Subspace::compute_grid_values(const State& s) {
  const auto n = static_cast<Eigen::Index>(s.dimension);
  const Vector& pts = s.measure.grid_points();
  Matrix values(pts.size(), n);
  Vector raw(n);
  for (Eigen::Index g = 0; g < pts.size(); ++g) {
    s.raw(pts[g], raw);
    values.row(g) = (s.transform * raw).transpose();
  }
  return values;
}

Vector Subspace::evaluate(double x) const {
  Vector raw(static_cast<Eigen::Index>(dimension()));
  state_->raw(x, raw);
  return state_->transform * raw;
}

Matrix Subspace::evaluate(std::span<const double> points) const {
  const auto n = static_cast<Eigen::Index>(dimension());
  Matrix raw(n, static_cast<Eigen::Index>(points.size()));
  Vector col(n);
  for (std::size_t j = 0; j < points.size(); ++j) {
    state_->raw(points[j], col);
    raw.col(static_cast<Eigen::Index>(j)) = col;
  }
  return (state_->transform * raw).transpose();
}

double Subspace::value(const FunctionCoeffs& f, double x) const {
  if (static_cast<std::size_t>(f.size()) != dimension())
    throw std::invalid_argument("coefficient length differs from subspace dimension");
  return evaluate(x).dot(f.values);
}

Matrix Subspace::gram() const {
  const Matrix& v = grid_values();
  return v.transpose() * measure().grid_weights().asDiagonal() * v;
}

Subspace Subspace::transformed(const Matrix& transform, bool orthonormal) const {
  const auto n = static_cast<Eigen::Index>(dimension());
  if (transform.rows() != n || transform.cols() != n)
    throw std::invalid_argument("transform must be N x N");
  auto s = std::make_shared<State>(*state_);
  s->transform = transform * state_->transform;
  s->orthonormal = orthonormal;
  s->grid_values = state_->grid_values * transform.transpose();
  return Subspace(std::move(s));
}

Subspace Subspace::with_descriptor(SubspaceDescriptor descriptor) const {
  auto s = std::make_shared<State>(*state_);
  s->descriptor = std::move(descriptor);
  return Subspace(std::move(s));
}

// ---------------------------------------------------------------------------
// Builders

std::size_t default_grid_size(std::size_t dimension) {
  return 8 * std::max<std::size_t>(dimension, 64);
}

Subspace build_trig_subspace(int degree, std::size_t grid_size) {
  if (degree < 0) throw std::invalid_argument("trig degree must be nonnegative");
  const auto n = static_cast<std::size_t>(degree);
  const std::size_t dim = 2 * n + 1;
  const std::size_t grid = std::max(grid_size == 0 ? default_grid_size(dim) : grid_size, 8 * dim);

  RawBasis raw = [n](double x, Eigen::Ref<Vector> out) {
    out[0] = 1.0;
    if (n == 0) return;
    const double c1 = std::cos(x);
    const double s1 = std::sin(x);
    double c = c1;
    double s = s1;
    for (std::size_t k = 1; k <= n; ++k) {
      if (k > 1) {
        // Re-anchor periodically to bound recurrence drift.
        if (k % 16 == 0) {
          c = std::cos(static_cast<double>(k) * x);
          s = std::sin(static_cast<double>(k) * x);
        } else {
          const double cn = c * c1 - s * s1;
          s = s * c1 + c * s1;
          c = cn;
        }
      }
      out[static_cast<Eigen::Index>(2 * k - 1)] = std::numbers::sqrt2 * c;
      out[static_cast<Eigen::Index>(2 * k)] = std::numbers::sqrt2 * s;
    }
  };

  SubspaceDescriptor desc;
  desc.kind = "trig";
  desc.degree = degree;
  desc.grid_size = grid;
  Subspace base(dim, std::move(raw), ReferenceMeasure::torus_uniform(grid), desc);
  return base.transformed(Matrix::Identity(static_cast<Eigen::Index>(dim),
                                           static_cast<Eigen::Index>(dim)),
                          true);
}

Subspace build_atom_subspace(std::vector<double> points, Matrix table, Vector weights) {
  if (table.rows() == 0 || table.cols() == 0) throw std::invalid_argument("empty basis table");
  if (table.rows() != weights.size() || static_cast<std::size_t>(table.rows()) != points.size())
    throw std::invalid_argument("table rows, atom points and weights differ in length");
  auto measure = ReferenceMeasure::atoms(std::move(points), std::move(weights));
  auto shared = std::make_shared<const Matrix>(std::move(table));
  const auto dim = static_cast<std::size_t>(shared->cols());
  RawBasis raw = [shared, measure](double x, Eigen::Ref<Vector> out) {
    out = shared->row(static_cast<Eigen::Index>(measure.atom_index(x))).transpose();
  };
  SubspaceDescriptor desc;
  desc.kind = "custom";
  desc.grid_size = static_cast<std::size_t>(shared->rows());
  return Subspace(dim, std::move(raw), std::move(measure), desc);
}

Subspace build_table_subspace(Matrix table, Vector weights) {
  std::vector<double> points(static_cast<std::size_t>(table.rows()));
  for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<double>(i);
  return build_atom_subspace(std::move(points), std::move(table), std::move(weights));
}

Subspace build_discrete_subspace(int dimension, int atoms, std::uint64_t seed,
                                 double heavy_atom_scale) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (atoms < dimension) throw std::invalid_argument("atom count must be at least the dimension");
  if (!(heavy_atom_scale > 0.0)) throw std::invalid_argument("heavy_atom_scale must be positive");

  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    std::mt19937_64 rng(split_seed(seed, attempt));
    std::normal_distribution<double> normal;
    Matrix table(atoms, dimension);
    for (Eigen::Index j = 0; j < table.cols(); ++j)
      for (Eigen::Index i = 0; i < table.rows(); ++i) table(i, j) = normal(rng);
    // Sign convention: nonnegative first row. Keeps the law of the table.
    for (Eigen::Index j = 0; j < table.cols(); ++j)
      if (table(0, j) < 0.0) table.col(j) *= -1.0;
    table.row(0) *= heavy_atom_scale;

    Subspace raw = build_table_subspace(std::move(table), Vector::Ones(atoms));
    try {
      Subspace ortho = orthonormalize(raw);
      SubspaceDescriptor desc;
      desc.kind = "discrete";
      desc.dimension = dimension;
      desc.atoms = atoms;
      desc.seed = seed;
      desc.heavy_atom_scale = heavy_atom_scale;
      desc.grid_size = static_cast<std::size_t>(atoms);
      return ortho.with_descriptor(desc);
    } catch (const NumericalError&) {
      continue;
    }
  }
  throw NumericalError("degenerate random subspace");
}

Subspace build_interval_subspace(std::vector<std::function<double(double)>> functions,
                                 double a, double b, std::size_t grid_size) {
  if (functions.empty()) throw std::invalid_argument("need at least one basis function");
  const std::size_t dim = functions.size();
  const std::size_t grid = grid_size == 0 ? default_grid_size(dim) : grid_size;
  auto fns = std::make_shared<const std::vector<std::function<double(double)>>>(std::move(functions));
  RawBasis raw = [fns](double x, Eigen::Ref<Vector> out) {
    for (std::size_t i = 0; i < fns->size(); ++i) out[static_cast<Eigen::Index>(i)] = (*fns)[i](x);
  };
  SubspaceDescriptor desc;
  desc.kind = "custom";
  desc.grid_size = grid;
  return Subspace(dim, std::move(raw), ReferenceMeasure::interval_uniform(a, b, grid), desc);
}

Subspace build_subspace(const SubspaceDescriptor& d) {
  if (d.kind == "trig") return build_trig_subspace(d.degree, d.grid_size);
  if (d.kind == "discrete")
    return build_discrete_subspace(d.dimension, d.atoms, d.seed, d.heavy_atom_scale);
  throw std::invalid_argument("cannot rebuild subspace of kind '" + d.kind + "'");
}

// ---------------------------------------------------------------------------
// Orthonormalization and norms

Orthonormalization orthonormalize_with_map(const Subspace& subspace) {
  const Matrix gram = subspace.gram();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericalError("ill-conditioned basis");
  const Vector& lambda = eig.eigenvalues();
  const double lo = lambda.minCoeff();
  const double hi = lambda.maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxGramCondition) throw NumericalError("ill-conditioned basis");
  const Matrix& q = eig.eigenvectors();
  const Matrix inv_sqrt = q * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
  const Matrix sqrt = q * lambda.cwiseSqrt().asDiagonal() * q.transpose();
  return {subspace.transformed(inv_sqrt, true), sqrt};
}

Subspace orthonormalize(const Subspace& subspace) {
  return orthonormalize_with_map(subspace).subspace;
}

double lp_norm_pow(const FunctionCoeffs& f, const Subspace& subspace, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in [1, inf)");
  if (static_cast<std::size_t>(f.size()) != subspace.dimension())
    throw std::invalid_argument("coefficient length differs from subspace dimension");
  const Vector values = subspace.grid_values() * f.values;
  return subspace.measure().grid_weights().dot(values.array().abs().pow(p).matrix());
}

double lp_norm(const FunctionCoeffs& f, const Subspace& subspace, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in [1, inf)");
  if (static_cast<std::size_t>(f.size()) != subspace.dimension())
    throw std::invalid_argument("coefficient length differs from subspace dimension");
  const Vector values = subspace.grid_values() * f.values;
  // Scale out the max to keep |f|^p in range for large p.
  const double scale = values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const double s = subspace.measure().grid_weights().dot(
      (values.array().abs() / scale).pow(p).matrix());
  return scale * std::pow(s, 1.0 / p);
}

double gram_trace(const Subspace& subspace) {
  return subspace.gram().trace();
}

}  // namespace normgrid
