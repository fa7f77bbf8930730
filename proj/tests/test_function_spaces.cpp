#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "normgrid/function_spaces.hpp"
#include "normgrid/io.hpp"

using namespace normgrid;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace

TEST_CASE("reference measures: positive weights summing to one, draws in domain") {
  std::mt19937_64 rng(3);
  const auto torus = ReferenceMeasure::torus_uniform(40);
  const auto interval = ReferenceMeasure::interval_uniform(-1.0, 2.0, 33);
  Vector w(4);
  w << 1.0, 2.0, 3.0, 4.0;
  const auto atoms = ReferenceMeasure::atoms({0.5, 1.0, 7.0, 9.0}, w);
  for (const auto* m : {&torus, &interval, &atoms}) {
    CHECK((m->grid_weights().array() > 0.0).all());
    CHECK(std::abs(m->grid_weights().sum() - 1.0) <= 1e-12);
    for (int i = 0; i < 1000; ++i) CHECK(m->contains(m->draw(rng)));
  }
  // equispaced torus grid
  const Vector& pts = torus.grid_points();
  for (Eigen::Index g = 1; g < pts.size(); ++g)
    CHECK(std::abs(pts[g] - pts[g - 1] - 2.0 * std::numbers::pi / 40.0) <= 1e-14);
  CHECK(atoms.grid_weights()[3] == doctest::Approx(0.4));
  CHECK_THROWS_AS(ReferenceMeasure::atoms({1.0, 1.0}, Vector::Ones(2)), std::invalid_argument);
}

TEST_CASE("Gauss-Legendre grid integrates polynomials exactly") {
  const auto m = ReferenceMeasure::interval_uniform(-1.0, 1.0, 12);
  // E[x^k] under uniform [-1,1] is 1/(k+1) for even k, 0 for odd k.
  for (int k = 0; k <= 23; ++k) {
    const double got = m.grid_weights().dot(m.grid_points().array().pow(k).matrix());
    const double want = k % 2 == 0 ? 1.0 / (k + 1) : 0.0;
    CHECK(std::abs(got - want) <= 1e-14);
  }
}

TEST_CASE("build_trig_subspace") {
  SUBCASE("degree 0 is the constant function") {
    const Subspace s = build_trig_subspace(0);
    CHECK(s.dimension() == 1);
    CHECK(s.orthonormal());
    CHECK(s.evaluate(1.234)[0] == 1.0);
    CHECK((s.grid_values().array() == 1.0).all());
  }
  SUBCASE("degree 2 Gram is the identity") {
    const Subspace s = build_trig_subspace(2);
    CHECK(s.dimension() == 5);
    CHECK(s.measure().grid_size() >= 8 * 5);
    CHECK(max_abs(s.gram() - identity(5)) <= 1e-10);
  }
  SUBCASE("degree 3 evaluation of sqrt2 cos x at 0") {
    const Subspace s = build_trig_subspace(3);
    Vector c = Vector::Zero(7);
    c[1] = 1.0;
    CHECK(std::abs(s.value(FunctionCoeffs(c), 0.0) - std::numbers::sqrt2) <= 1e-15);
  }
  SUBCASE("high degree recurrence stays accurate") {
    const Subspace s = build_trig_subspace(40);
    const double x = 2.7;
    const Vector u = s.evaluate(x);
    for (int k = 1; k <= 40; ++k) {
      CHECK(std::abs(u[2 * k - 1] - std::numbers::sqrt2 * std::cos(k * x)) <= 1e-12);
      CHECK(std::abs(u[2 * k] - std::numbers::sqrt2 * std::sin(k * x)) <= 1e-12);
    }
    CHECK(max_abs(s.gram() - identity(81)) <= 1e-10);
  }
  CHECK_THROWS_AS(build_trig_subspace(-1), std::invalid_argument);
}

TEST_CASE("build_discrete_subspace") {
  SUBCASE("single atom, single function") {
    const Subspace s = build_discrete_subspace(1, 1, 42);
    CHECK(s.dimension() == 1);
    CHECK(std::abs(s.evaluate(0.0)[0] - 1.0) <= 1e-14);
  }
  SUBCASE("N=3, K=100, seed 7 is orthonormal") {
    const Subspace s = build_discrete_subspace(3, 100, 7);
    CHECK(s.orthonormal());
    CHECK(max_abs(s.gram() - identity(3)) <= 1e-10);
  }
  SUBCASE("N=2, K=2: weighted sum of squared basis values is N") {
    const Subspace s = build_discrete_subspace(2, 2, 5);
    double total = 0.0;
    for (int atom = 0; atom < 2; ++atom) total += 0.5 * s.evaluate(atom).squaredNorm();
    CHECK(std::abs(total - 2.0) <= 1e-12);
  }
  SUBCASE("deterministic in the seed") {
    const Subspace a = build_discrete_subspace(4, 30, 11);
    const Subspace b = build_discrete_subspace(4, 30, 11);
    CHECK(max_abs(a.grid_values() - b.grid_values()) == 0.0);
  }
  SUBCASE("a heavy atom raises that atom's leverage") {
    const Subspace s = build_discrete_subspace(3, 50, 9, 20.0);
    const Vector lev = s.grid_values().rowwise().squaredNorm() / 50.0;
    CHECK(lev[0] == doctest::Approx(lev.maxCoeff()));
    CHECK(lev[0] > 0.5);
  }
  CHECK_THROWS_AS(build_discrete_subspace(3, 2, 1), std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_discrete_subspace(2, 2, 1, 1e-12), "degenerate random subspace",
                       NumericalError);
}

TEST_CASE("orthonormalize") {
  SUBCASE("identity on an orthonormal input") {
    const Subspace trig = build_trig_subspace(3);
    const Orthonormalization o = orthonormalize_with_map(trig);
    CHECK(max_abs(o.coefficient_map - identity(7)) <= 1e-10);
    CHECK(max_abs(o.subspace.grid_values() - trig.grid_values()) <= 1e-9);
  }
  SUBCASE("{1, 1+x} on [-1, 1] against the closed-form Gram") {
    const Subspace raw = build_interval_subspace(
        {[](double) { return 1.0; }, [](double x) { return 1.0 + x; }}, -1.0, 1.0);
    CHECK_FALSE(raw.orthonormal());
    const Subspace out = orthonormalize(raw);
    CHECK(max_abs(out.gram() - identity(2)) <= 1e-10);
    // u = T raw with T the linear part; recover T from two evaluations and
    // check T G T^T = I for the analytic Gram of {1, 1+x}: [[1, 1], [1, 4/3]].
    const Vector u0 = out.evaluate(0.0);  // raw = (1, 1)
    const Vector u1 = out.evaluate(1.0);  // raw = (1, 2)
    Matrix t(2, 2);
    t.col(1) = u1 - u0;
    t.col(0) = u0 - t.col(1);
    Matrix g(2, 2);
    g << 1.0, 1.0, 1.0, 4.0 / 3.0;
    CHECK(max_abs(t * g * t.transpose() - identity(2)) <= 1e-10);
  }
  SUBCASE("monomials keep their span") {
    std::vector<std::function<double(double)>> fns = {
        [](double) { return 1.0; }, [](double x) { return x; }, [](double x) { return x * x; }};
    const Subspace raw = build_interval_subspace(fns, -1.0, 1.0);
    const Subspace out = orthonormalize(raw);
    CHECK(max_abs(out.gram() - identity(3)) <= 1e-10);
    const Matrix& v = out.grid_values();
    for (int i = 0; i < 3; ++i) {
      const Vector target = raw.grid_values().col(i);
      const Vector coef = v.colPivHouseholderQr().solve(target);
      CHECK((v * coef - target).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  SUBCASE("dependent functions are rejected") {
    const Subspace raw = build_interval_subspace(
        {[](double x) { return x; }, [](double x) { return 2.0 * x; }}, 0.0, 1.0);
    CHECK_THROWS_WITH_AS(orthonormalize(raw), "ill-conditioned basis", NumericalError);
  }
}

TEST_CASE("lp_norm examples") {
  const Subspace trig = build_trig_subspace(1);
  Vector c = Vector::Zero(3);
  CHECK(lp_norm(FunctionCoeffs(c), trig, 3.0) == 0.0);
  c[1] = 1.0;
  CHECK(std::abs(lp_norm(FunctionCoeffs(c), trig, 2.0) - 1.0) <= 1e-10);

  // Oracle: dense midpoint rule for (1/2pi) int (sqrt2 cos x)^4 dx.
  const int n = 200000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * std::numbers::pi * (i + 0.5) / n;
    acc += std::pow(std::numbers::sqrt2 * std::cos(x), 4);
  }
  const double oracle = std::pow(acc / n, 0.25);
  CHECK(std::abs(oracle - std::pow(1.5, 0.25)) <= 1e-10);
  CHECK(std::abs(lp_norm(FunctionCoeffs(c), trig, 4.0) - oracle) <= 1e-8);

  CHECK_THROWS_AS(lp_norm(FunctionCoeffs(c), trig, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lp_norm(FunctionCoeffs(Vector::Ones(2)), trig, 2.0), std::invalid_argument);
}

TEST_CASE("properties: trace, homogeneity, monotonicity in p") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  const std::vector<Subspace> spaces = {build_trig_subspace(2), build_trig_subspace(5),
                                        build_discrete_subspace(4, 60, 3),
                                        build_discrete_subspace(6, 200, 8, 5.0)};
  for (const auto& s : spaces) {
    CHECK(std::abs(gram_trace(s) - static_cast<double>(s.dimension())) <= 1e-8);
    for (int rep = 0; rep < 20; ++rep) {
      Vector c(static_cast<Eigen::Index>(s.dimension()));
      for (auto& x : c) x = normal(rng);
      for (double p : {1.0, 1.5, 2.0, 3.0, 7.5}) {
        const double base = lp_norm(FunctionCoeffs(c), s, p);
        for (double t : {-2.0, 0.5, 3.0})
          CHECK(std::abs(lp_norm(FunctionCoeffs(t * c), s, p) - std::abs(t) * base) <=
                1e-12 * std::abs(t) * base);
      }
      double previous = 0.0;
      for (double p : {1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 10.0}) {
        const double v = lp_norm(FunctionCoeffs(c), s, p);
        CHECK(previous <= v + 1e-10);
        previous = v;
      }
    }
  }
}

TEST_CASE("subspace descriptors serialize and rebuild") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const bool trig = rep % 2 == 0;
    const Subspace s = trig ? build_trig_subspace(static_cast<int>(rng() % 6))
                            : build_discrete_subspace(static_cast<int>(1 + rng() % 4),
                                                      static_cast<int>(8 + rng() % 40), rng());
    const json j = to_json(s.descriptor());
    CHECK(j.at("kind") == (trig ? "trig" : "discrete"));
    const Subspace rebuilt = build_subspace(descriptor_from_json(json::parse(j.dump())));
    CHECK(max_abs(rebuilt.grid_values() - s.grid_values()) == 0.0);
  }
  CHECK_THROWS_AS(descriptor_from_json(json{{"kind", "hyperbolic"}}), std::invalid_argument);
}
