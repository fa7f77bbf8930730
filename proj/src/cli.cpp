#include "normgrid/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "normgrid/discretization.hpp"
#include "normgrid/entropy.hpp"
#include "normgrid/io.hpp"
#include "normgrid/lewis_weights.hpp"
#include "normgrid/nikolskii.hpp"
#include "normgrid/sweep.hpp"

namespace normgrid {

namespace {

struct SubspaceFlags {
  std::string family = "trig";
  int degree = 1;
  int dimension = 0;
  int atoms = 0;
  double heavy = 1.0;
  std::string descriptor_path;
};

void add_subspace_flags(CLI::App* app, SubspaceFlags& f) {
  app->add_option("--family", f.family, "Subspace family: trig | discrete")
      ->check(CLI::IsMember({"trig", "discrete"}));
  app->add_option("--degree", f.degree, "Trig degree n (N = 2n + 1)")->check(CLI::NonNegativeNumber);
  app->add_option("--N", f.dimension, "Discrete family dimension")->check(CLI::PositiveNumber);
  app->add_option("--K", f.atoms, "Discrete family atom count (default 8 max(N, 64))");
  app->add_option("--heavy", f.heavy, "Discrete family: weight multiplier of atom 0")
      ->check(CLI::PositiveNumber);
  app->add_option("--subspace", f.descriptor_path, "JSON subspace descriptor (overrides family flags)");
}

Subspace build_from_flags(const SubspaceFlags& f, std::uint64_t seed) {
  if (!f.descriptor_path.empty()) {
    std::ifstream in(f.descriptor_path);
    if (!in) throw std::invalid_argument("cannot open " + f.descriptor_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("bad descriptor JSON: ") + e.what());
    }
    return build_subspace(descriptor_from_json(j));
  }
  if (f.family == "trig") return build_trig_subspace(f.degree);
  if (f.dimension < 1) throw std::invalid_argument("--N is required for the discrete family");
  const int atoms =
      f.atoms > 0 ? f.atoms : static_cast<int>(default_grid_size(static_cast<std::size_t>(f.dimension)));
  return build_discrete_subspace(f.dimension, atoms, seed, f.heavy);
}

std::vector<int> parse_sizes(const std::string& list) {
  std::vector<int> sizes;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      sizes.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad size list entry '" + item + "'");
    }
  }
  return sizes;
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

struct Emitter {
  std::string out_path;
  std::ostream& out;
  std::ostream& err;

  void emit(const std::string& body, const std::string& summary) const {
    if (out_path.empty()) {
      out << body;
      err << summary << '\n';
      return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot write " + out_path);
    file << body;
    out << summary << '\n';
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sampling discretization laboratory for L^p norms on function subspaces", "normgrid"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "Output file for the JSON/CSV body");

  // nikolskii
  SubspaceFlags nik_space;
  double nik_q = 2.0;
  int nik_restarts = 8;
  std::uint64_t nik_seed = 1;
  auto* nik = app.add_subcommand("nikolskii", "Nikolskii constant M in ||f||_inf <= M N^{1/q} ||f||_q");
  add_subspace_flags(nik, nik_space);
  nik->add_option("--q", nik_q, "Exponent q >= 1")->check(CLI::Range(1.0, 1e6));
  nik->add_option("--restarts", nik_restarts, "Random restarts for q != 2")->check(CLI::NonNegativeNumber);
  nik->add_option("--seed", nik_seed, "Seed");
  nik->add_option("--out", out_path, "Output file");

  // discretize
  SubspaceFlags dis_space;
  double dis_p = 2.0;
  std::size_t dis_m = 100;
  double dis_eps = 0.5;
  std::uint64_t dis_seed = 1;
  std::size_t dis_trials = 1;
  int dis_restarts = 4;
  bool dis_weighted = false;
  auto* dis = app.add_subcommand("discretize", "Discretization error V_p for random sample sets");
  add_subspace_flags(dis, dis_space);
  dis->add_option("--p", dis_p, "Exponent p > 1");
  dis->add_option("--m", dis_m, "Sample count")->check(CLI::PositiveNumber);
  dis->add_option("--eps", dis_eps, "Tolerance eps in (0, 1)");
  dis->add_option("--seed", dis_seed, "Seed");
  dis->add_option("--trials", dis_trials, "Independent sample sets (one JSON line each)")
      ->check(CLI::PositiveNumber);
  dis->add_option("--restarts", dis_restarts, "Random restarts for p != 2")->check(CLI::NonNegativeNumber);
  dis->add_flag("--weighted", dis_weighted, "Sample from the Lewis change of density (p in (1, 4))");
  dis->add_option("--out", out_path, "Output file");

  // lewis
  SubspaceFlags lew_space;
  double lew_p = 1.5;
  double lew_tol = 1e-10;
  int lew_max_iter = 500;
  std::uint64_t lew_seed = 1;
  auto* lew = app.add_subcommand("lewis", "l_p Lewis weights on the quadrature grid (CSV)");
  add_subspace_flags(lew, lew_space);
  lew->add_option("--p", lew_p, "Exponent p in (1, 4)");
  lew->add_option("--tol", lew_tol, "Fixed-point tolerance");
  lew->add_option("--max-iter", lew_max_iter, "Iteration cap");
  lew->add_option("--seed", lew_seed, "Seed");
  lew->add_option("--out", out_path, "Output file");

  // sweep
  SweepConfig sw;
  std::string sw_sizes;
  std::string sw_summary;
  auto* swp = app.add_subcommand("sweep", "Minimal sample count m*(N) search (CSV)");
  swp->add_option("--family", sw.family, "trig | discrete")->check(CLI::IsMember({"trig", "discrete"}));
  swp->add_option("--p", sw.p, "Exponent p > 1");
  swp->add_option("--eps", sw.eps, "Tolerance eps in (0, 1)");
  swp->add_option("--delta", sw.delta, "Failure probability delta in (0, 1)");
  swp->add_option("--N", sw_sizes, "Comma-separated, strictly increasing sizes")->required();
  swp->add_option("--trials", sw.trials, "Trials per (N, m)")->check(CLI::PositiveNumber);
  swp->add_option("--m-min", sw.m_min, "Lower end of the m search");
  swp->add_option("--m-max", sw.m_max, "Search ceiling");
  swp->add_option("--restarts", sw.restarts, "Random restarts for p != 2")->check(CLI::NonNegativeNumber);
  swp->add_option("--seed", sw.seed, "Seed");
  swp->add_option("--summary", sw_summary, "Write the fitted scaling summary JSON here");
  swp->add_option("--out", out_path, "Output file");

  // entropy
  SubspaceFlags ent_space;
  double ent_p = 2.0;
  std::size_t ent_m = 50;
  int ent_k_max = 3;
  std::size_t ent_candidates = 8192;
  std::uint64_t ent_seed = 1;
  auto* ent = app.add_subcommand("entropy", "Empirical entropy numbers of B_p(L) under ||.||_{inf,X}");
  add_subspace_flags(ent, ent_space);
  ent->add_option("--p", ent_p, "Exponent p >= 1");
  ent->add_option("--m", ent_m, "Sample count")->check(CLI::PositiveNumber);
  ent->add_option("--k-max", ent_k_max, "Largest level k (<= 4)")->check(CLI::Range(0, 4));
  ent->add_option("--candidates", ent_candidates, "Candidate cloud size")->check(CLI::PositiveNumber);
  ent->add_option("--seed", ent_seed, "Seed");
  ent->add_option("--out", out_path, "Output file");

  // symmetrize
  SubspaceFlags sym_space;
  double sym_p = 2.0;
  std::size_t sym_m = 50;
  std::size_t sym_trials = 200;
  int sym_restarts = 4;
  std::uint64_t sym_seed = 1;
  auto* sym = app.add_subcommand("symmetrize", "Monte Carlo sides of the symmetrization inequality");
  add_subspace_flags(sym, sym_space);
  sym->add_option("--p", sym_p, "Exponent p > 1");
  sym->add_option("--m", sym_m, "Sample count")->check(CLI::PositiveNumber);
  sym->add_option("--trials", sym_trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  sym->add_option("--restarts", sym_restarts, "Random restarts for p != 2")->check(CLI::NonNegativeNumber);
  sym->add_option("--seed", sym_seed, "Seed");
  sym->add_option("--out", out_path, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitArgument;
  }

  const Emitter emitter{out_path, out, err};
  try {
    if (*nik) {
      const Subspace s = build_from_flags(nik_space, nik_seed);
      const NikolskiiEstimate est = nik_q == 2.0 && s.orthonormal()
                                        ? nikolskii_q2(s)
                                        : nikolskii_general(s, nik_q, nik_restarts, nik_seed);
      json body = to_json(est);
      body["N"] = s.dimension();
      body["subspace"] = to_json(s.descriptor());
      emitter.emit(body.dump() + "\n", format("nikolskii: N=%zu q=%g M=%.9f (%s)", s.dimension(), est.q,
                                              est.constant, to_string(est.method).c_str()));
    } else if (*dis) {
      if (!(dis_eps > 0.0 && dis_eps < 1.0)) throw std::invalid_argument("--eps must lie in (0, 1)");
      const Subspace s = build_from_flags(dis_space, dis_seed);
      std::optional<ChangeOfDensity> change;
      if (dis_weighted) change = change_of_density(s, dis_p);
      std::string body;
      std::size_t passes = 0;
      double worst = 0.0;
      for (std::size_t t = 0; t < dis_trials; ++t) {
        const std::uint64_t trial_seed = split_seed(dis_seed, t);
        const SampleSet samples = change ? weighted_discretization(s, *change, dis_m, trial_seed)
                                         : sample_points(s, dis_m, trial_seed);
        DiscretizationReport r =
            discretization_report(s, samples, dis_p, dis_restarts, split_seed(trial_seed, 1));
        r.seed = trial_seed;
        r = with_verdict(std::move(r), dis_eps);
        passes += r.pass ? 1 : 0;
        worst = std::max(worst, r.value);
        body += to_json(r).dump() + "\n";
      }
      emitter.emit(body, format("discretize: N=%zu p=%g m=%zu trials=%zu passed=%zu max V=%.6g",
                                s.dimension(), dis_p, dis_m, dis_trials, passes, worst));
    } else if (*lew) {
      const Subspace s = build_from_flags(lew_space, lew_seed);
      const LewisWeightVector lw = lewis_weights(s, lew_p, lew_tol, lew_max_iter);
      emitter.emit(lewis_weights_csv(s, lw),
                   format("lewis: N=%zu p=%g sum(w)=%.9f residual=%.3g iterations=%d", s.dimension(),
                          lew_p, lw.weights.sum(), lw.residual, lw.iterations));
    } else if (*swp) {
      sw.sizes = parse_sizes(sw_sizes);
      const SweepResult result = sweep_minimal_m(sw);
      if (!sw_summary.empty()) {
        std::ofstream file(sw_summary, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot write " + sw_summary);
        file << to_json(result).dump(2) << "\n";
      }
      std::string fit = "fit=none (censored or too few sizes)";
      if (result.fit) fit = format("fit C=%.4g s=%.4g", result.fit->C, result.fit->s);
      emitter.emit(sweep_csv(result), format("sweep: %zu sizes, %s", result.rows.size(), fit.c_str()));
    } else if (*ent) {
      const Subspace s = build_from_flags(ent_space, ent_seed);
      const SampleSet samples = sample_points(s, ent_m, split_seed(ent_seed, 0));
      const EntropyProfile profile =
          entropy_profile(s, ent_p, samples, ent_k_max, ent_candidates, split_seed(ent_seed, 1));
      emitter.emit(to_json(profile).dump() + "\n",
                   format("entropy: N=%zu p=%g m=%zu e_0=%.6g e_%d=%.6g", s.dimension(), ent_p, ent_m,
                          profile.e_hat.front(), profile.k_max(), profile.e_hat.back()));
    } else if (*sym) {
      const Subspace s = build_from_flags(sym_space, sym_seed);
      const SymmetrizationEstimate est =
          symmetrization_check(s, sym_p, sym_m, sym_trials, sym_restarts, sym_seed);
      json body = to_json(est);
      body["p"] = sym_p;
      body["m"] = sym_m;
      body["N"] = s.dimension();
      emitter.emit(body.dump() + "\n", format("symmetrize: lhs=%.6g rhs=%.6g holds=%s", est.lhs, est.rhs,
                                              est.holds() ? "yes" : "no"));
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "argument error: " << e.what() << '\n' << app.help();
    return kExitArgument;
  }
  return kExitOk;
}

}  // namespace normgrid
