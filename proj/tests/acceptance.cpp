// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "normgrid/cli.hpp"
#include "normgrid/discretization.hpp"
#include "normgrid/entropy.hpp"
#include "normgrid/io.hpp"
#include "normgrid/lewis_weights.hpp"
#include "normgrid/nikolskii.hpp"
#include "normgrid/sweep.hpp"

using namespace normgrid;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Matrix lewis_oracle_design(const Subspace& s, double p) {
  const Vector scale = s.measure().grid_weights().array().pow(1.0 / p).matrix();
  return scale.asDiagonal() * s.grid_values();
}

Vector lewis_oracle_map(const Matrix& a, const Vector& w, double p) {
  Matrix gram = Matrix::Zero(a.cols(), a.cols());
  for (Eigen::Index g = 0; g < a.rows(); ++g)
    if (w[g] > 0.0) gram += std::pow(w[g], 1.0 - 2.0 / p) * a.row(g).transpose() * a.row(g);
  const Matrix inv = gram.inverse();
  Vector out(a.rows());
  for (Eigen::Index g = 0; g < a.rows(); ++g)
    out[g] = std::pow((a.row(g) * inv * a.row(g).transpose())(0, 0), p / 2.0);
  return out;
}

Outcome mz_exactness() {
  const Subspace s = build_trig_subspace(2);
  std::vector<double> x(5);
  for (int j = 0; j < 5; ++j) x[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / 5.0;
  Matrix g = Matrix::Zero(5, 5);
  for (double t : x) {
    Vector u(5);
    u << 1.0, std::numbers::sqrt2 * std::cos(t), std::numbers::sqrt2 * std::sin(t),
        std::numbers::sqrt2 * std::cos(2 * t), std::numbers::sqrt2 * std::sin(2 * t);
    g += u * u.transpose() / 5.0;
  }
  const double oracle = (g - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff();
  const double v2 = v2_exact(s, make_sample_set(s, x)).value;
  return {v2 <= 1e-10 && oracle <= 1e-12, fmt("V2=%.2e, oracle Gram deviation %.2e", v2, oracle)};
}

Outcome trig_flatness() {
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n)
    worst = std::max(worst, std::abs(nikolskii_q2(build_trig_subspace(n)).constant - 1.0));
  return {worst <= 1e-9, fmt("max |M - 1| = %.2e over n = 1..8", worst)};
}

Outcome sweep_scaling() {
  SweepConfig c;
  c.family = "trig";
  c.sizes = {5, 9, 17, 33, 65};
  c.p = 2.0;
  c.eps = 0.5;
  c.delta = 0.1;
  c.trials = 200;
  c.seed = 1;
  const SweepResult r = sweep_minimal_m(c);
  bool ok = r.fit.has_value();
  std::string ms;
  for (const auto& row : r.rows) {
    ok = ok && !row.censored && row.m_star >= static_cast<std::size_t>(row.dimension);
    ms += fmt("%s%d:%zu", ms.empty() ? "" : " ", row.dimension, row.m_star);
  }
  const double ratio =
      static_cast<double>(r.rows.back().m_star) / static_cast<double>(r.rows.front().m_star);
  ok = ok && ratio <= 30.0 * (65.0 / 5.0);
  const double s = r.fit ? r.fit->s : NAN;
  ok = ok && s <= 1.6;
  return {ok, fmt("m* {%s}, ratio %.2f <= 390, fitted s = %.3f <= 1.6", ms.c_str(), ratio, s)};
}

Outcome lewis_invariants() {
  std::mt19937_64 rng(20240601);
  double worst_sum = 0.0, worst_res = 0.0, worst_lev = 0.0;
  for (int d = 0; d < 20; ++d) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int k = n + static_cast<int>(rng() % static_cast<std::uint64_t>(201 - n));
    const double heavy = 1.0 + static_cast<double>(rng() % 20);
    const Subspace s = build_discrete_subspace(n, k, rng(), heavy);
    for (double p : {1.25, 1.5, 2.0, 2.5, 3.5}) {
      const LewisWeightVector lw = lewis_weights(s, p);
      const Matrix a = lewis_oracle_design(s, p);
      worst_sum = std::max(worst_sum, std::abs(lw.weights.sum() - n));
      worst_res = std::max({worst_res, lw.residual,
                            (lw.weights - lewis_oracle_map(a, lw.weights, p)).cwiseAbs().maxCoeff()});
      if (p == 2.0) {
        Eigen::HouseholderQR<Matrix> qr(a);
        const Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
        worst_lev = std::max(worst_lev, (lw.weights - q.rowwise().squaredNorm()).cwiseAbs().maxCoeff());
      }
    }
  }
  return {worst_sum <= 1e-6 && worst_res <= 1e-10 && worst_lev <= 1e-10,
          fmt("max |sum w - N| %.1e, residual %.1e, |w - leverage| %.1e", worst_sum, worst_res,
              worst_lev)};
}

Subspace skewed_subspace() { return build_discrete_subspace(4, 200, 77, 40.0); }

Outcome change_of_density_nikolskii() {
  const Subspace s = skewed_subspace();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  bool ok = true;
  std::string detail = fmt("M before %.3f;", nikolskii_q2(s).constant);
  for (double p : {1.5, 3.0}) {
    const ChangeOfDensity c = change_of_density(s, p);
    const double m = nikolskii_q2(c.transformed).constant;
    double iso = 0.0;
    for (int i = 0; i < 50; ++i) {
      Vector f(4);
      for (auto& v : f) v = normal(rng);
      iso = std::max(iso, std::abs(lp_norm(FunctionCoeffs(f), s, p) -
                                   lp_norm(c.image(FunctionCoeffs(f)), c.transformed, p)));
    }
    ok = ok && m <= 1.05 && iso <= 1e-8;
    detail += fmt(" p=%g: M'=%.6f isometry err %.1e", p, m, iso);
  }
  return {ok, detail};
}

Outcome weighted_unbiasedness() {
  const Subspace s = skewed_subspace();
  const double p = 1.5;
  const ChangeOfDensity c = change_of_density(s, p);
  Matrix fs(4, 5);
  fs << 1.0, 0.0, 1.0, -2.0, 0.3,  //
      0.0, 1.0, -1.0, 0.5, 0.7,    //
      0.0, 0.0, 0.5, 1.0, -1.1,    //
      0.0, 0.0, 0.0, 0.25, 2.0;
  const int trials = 10000;
  Vector sum = Vector::Zero(5), sum_sq = Vector::Zero(5);
  for (int t = 0; t < trials; ++t) {
    const SampleSet w = weighted_discretization(s, c, 500, split_seed(606, t));
    const Matrix vals = w.evaluations * fs;
    const Vector est = vals.array().abs().pow(p).matrix().transpose() * w.weights;
    sum += est;
    sum_sq += est.cwiseAbs2();
  }
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double mean = sum[i] / trials;
    const double se = std::sqrt((sum_sq[i] / trials - mean * mean) / (trials - 1));
    const double truth = lp_norm_pow(FunctionCoeffs(fs.col(i)), s, p);
    const double z = std::abs(mean - truth) / se;
    worst = std::max(worst, z);
    ok = ok && z <= 3.0;
  }
  return {ok, fmt("max |mean - ||f||_p^p| / stderr = %.2f over 5 functions", worst)};
}

Outcome symmetrization() {
  const SymmetrizationEstimate e = symmetrization_check(build_trig_subspace(1), 2.0, 50, 200, 4, 7);
  return {e.holds(3.0), fmt("lhs %.3f +- %.3f, rhs %.3f +- %.3f", e.lhs, e.lhs_stderr, e.rhs,
                            e.rhs_stderr)};
}

Outcome optimizer_vs_eigen() {
  std::mt19937_64 rng(8080);
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    Subspace s = i % 2 == 0 ? build_trig_subspace(static_cast<int>(rng() % 4))
                            : build_discrete_subspace(1 + static_cast<int>(rng() % 8),
                                                      16 + static_cast<int>(rng() % 200), rng(),
                                                      1.0 + static_cast<double>(rng() % 10));
    const SampleSet samples = sample_points(s, 5 + rng() % 300, rng());
    const double exact = v2_exact(s, samples).value;
    const double lower = vp_lower_bound(s, samples, 2.0, 4, rng()).value;
    worst = std::max(worst, std::abs(exact - lower));
  }
  return {worst <= 1e-6, fmt("max |V2 - lower bound| = %.2e over 30 instances", worst)};
}

Outcome entropy_suite() {
  bool mono = true, sandwich = true, propagation = true;
  for (double p : {1.5, 2.0, 3.0}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Subspace s = build_trig_subspace(1);
      const SampleSet x = sample_points(s, 50, split_seed(seed, 0));
      const EntropyProfile prof = entropy_profile(s, p, x, 3, 8192, split_seed(seed, 1));
      for (std::size_t k = 0; k < prof.e_hat.size(); ++k) {
        if (k > 0) mono = mono && prof.e_hat[k] <= prof.e_hat[k - 1];
        sandwich = sandwich && prof.p_hat[k] <= 2.0 * prof.e_hat[k];
      }
      propagation = propagation && decay_propagation_check(prof, 3, 0.2).holds;
    }
  }
  double fit_err = 0.0;
  for (auto [w, theta] : {std::pair{4.0, 2.0}, std::pair{7.0, 3.0}, std::pair{0.5, 1.25}}) {
    std::vector<double> e;
    for (int k = 0; k <= 3; ++k) e.push_back(w * std::exp2(-k / theta));
    const DecayFit f = fit_decay(e);
    fit_err = std::max({fit_err, std::abs(f.W - w), std::abs(f.theta - theta)});
  }
  const bool ok = mono && sandwich && propagation && fit_err <= 1e-9;
  return {ok, fmt("monotone %s, sandwich %s, propagation %s, fit error %.1e", mono ? "yes" : "no",
                  sandwich ? "yes" : "no", propagation ? "yes" : "no", fit_err)};
}

std::string strip_timing(const std::string& body) {
  std::istringstream in(body);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '{') {
      json j = json::parse(line);
      j.erase("elapsed_ms");
      line = j.dump();
    }
    out += line + "\n";
  }
  return out;
}

Outcome cli_determinism() {
  const std::vector<std::vector<std::string>> commands = {
      {"nikolskii", "--family", "trig", "--degree", "2", "--q", "4", "--seed", "3"},
      {"discretize", "--family", "trig", "--degree", "2", "--p", "2", "--m", "100", "--eps", "0.5",
       "--seed", "1", "--trials", "5"},
      {"discretize", "--family", "discrete", "--N", "4", "--p", "1.5", "--m", "200", "--eps", "0.5",
       "--seed", "2", "--weighted"},
      {"lewis", "--family", "discrete", "--N", "4", "--K", "50", "--p", "1.5", "--seed", "1"},
      {"sweep", "--family", "trig", "--p", "2", "--eps", "0.5", "--delta", "0.1", "--N", "5,9,17",
       "--seed", "1"},
      {"entropy", "--family", "trig", "--degree", "1", "--p", "2", "--m", "50", "--seed", "1"},
      {"symmetrize", "--family", "trig", "--degree", "1", "--p", "2", "--m", "50", "--trials", "50",
       "--seed", "1"},
  };
  int identical = 0;
  std::string bad;
  for (const auto& cmd : commands) {
    std::string bodies[2];
    int status[2];
    for (int rep = 0; rep < 2; ++rep) {
      std::vector<const char*> argv{"normgrid"};
      for (const auto& a : cmd) argv.push_back(a.c_str());
      std::ostringstream out, err;
      status[rep] = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
      bodies[rep] = strip_timing(out.str());
    }
    if (status[0] == 0 && status[1] == 0 && !bodies[0].empty() && bodies[0] == bodies[1])
      ++identical;
    else
      bad += " " + cmd[0];
  }
  return {identical == static_cast<int>(commands.size()),
          fmt("%d/%zu invocations identical%s%s", identical, commands.size(),
              bad.empty() ? "" : "; differing:", bad.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Marcinkiewicz-Zygmund exactness", mz_exactness},
      {"Nikolskii trig flatness", trig_flatness},
      {"sample-size scaling sweep", sweep_scaling},
      {"Lewis weight invariants", lewis_invariants},
      {"change-of-density Nikolskii constant", change_of_density_nikolskii},
      {"weighted discretization unbiasedness", weighted_unbiasedness},
      {"symmetrization inequality", symmetrization},
      {"optimizer vs eigen oracle", optimizer_vs_eigen},
      {"entropy estimator suite", entropy_suite},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
