#include "normgrid/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace normgrid {

Subspace family_subspace(const std::string& family, int dimension, std::uint64_t seed) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (family == "trig") {
    if (dimension % 2 == 0) throw std::invalid_argument("trig family needs odd N = 2n + 1");
    return build_trig_subspace((dimension - 1) / 2);
  }
  if (family == "discrete") {
    const auto atoms = static_cast<int>(default_grid_size(static_cast<std::size_t>(dimension)));
    return build_discrete_subspace(dimension, atoms, seed);
  }
  throw std::invalid_argument("unknown family '" + family + "'");
}

void SweepConfig::validate() const {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in (1, inf)");
  if (sizes.empty()) throw std::invalid_argument("size list must be non-empty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw std::invalid_argument("sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("size list must be strictly increasing");
  }
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (m_min == 0 || m_max < m_min) throw std::invalid_argument("need 1 <= m_min <= m_max");
}

SweepResult sweep_minimal_m(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;
  result.lower_bound_semantics = config.p != 2.0;
  const double target = 1.0 - config.delta;

  std::size_t previous = 0;
  for (int n : config.sizes) {
    const Subspace subspace = family_subspace(config.family, n, split_seed(config.seed, 0xfa111));
    const std::uint64_t size_seed = split_seed(config.seed, static_cast<std::uint64_t>(n));

    auto evaluate = [&](std::size_t m) {
      SuccessEstimate est = success_probability(subspace, config.p, m, config.eps, config.trials,
                                                split_seed(size_seed, m), config.restarts);
      result.records.push_back({n, m, est});
      return est;
    };

    SweepRow row;
    row.dimension = n;
    std::size_t lo = std::max({static_cast<std::size_t>(n), config.m_min, previous});
    lo = std::min(lo, config.m_max);
    SuccessEstimate est = evaluate(lo);
    if (est.interval.lo >= target) {
      row.m_star = lo;
      row.estimate = est;
    } else {
      std::size_t fail = lo;
      std::size_t pass = 0;
      SuccessEstimate pass_est;
      while (fail < config.m_max) {
        const std::size_t next = std::min(2 * fail, config.m_max);
        SuccessEstimate e = evaluate(next);
        if (e.interval.lo >= target) {
          pass = next;
          pass_est = e;
          break;
        }
        fail = next;
      }
      if (pass == 0) {
        row.censored = true;
        row.m_star = config.m_max;
        row.estimate = result.records.back().estimate;
      } else {
        while (pass - fail > 1) {
          const std::size_t mid = fail + (pass - fail) / 2;
          SuccessEstimate e = evaluate(mid);
          if (e.interval.lo >= target) {
            pass = mid;
            pass_est = e;
          } else {
            fail = mid;
          }
        }
        row.m_star = pass;
        row.estimate = pass_est;
      }
    }
    previous = row.m_star;
    result.rows.push_back(row);
  }

  const bool any_censored =
      std::any_of(result.rows.begin(), result.rows.end(), [](const SweepRow& r) { return r.censored; });
  if (!any_censored) result.fit = fit_scaling(result.rows);
  return result;
}

std::optional<ScalingFit> fit_scaling(const std::vector<SweepRow>& rows) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : rows) {
    if (r.censored) return std::nullopt;
    if (r.dimension < 3) continue;
    const double n = static_cast<double>(r.dimension);
    xs.push_back(std::log(std::log(n)));
    ys.push_back(std::log(static_cast<double>(r.m_star)) - std::log(n));
  }
  if (xs.size() < 2) return std::nullopt;
  const double count = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double s = sxy / sxx;
  return ScalingFit{std::exp(my - s * mx), s};
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "N,m,trials,successes,rate,wilson_lo,wilson_hi,censored\n";
  char line[256];
  for (const auto& r : result.rows) {
    std::snprintf(line, sizeof line, "%d,%zu,%zu,%zu,%.6f,%.6f,%.6f,%d\n", r.dimension, r.m_star,
                  r.estimate.trials, r.estimate.successes, r.estimate.rate, r.estimate.interval.lo,
                  r.estimate.interval.hi, r.censored ? 1 : 0);
    out << line;
  }
  return out.str();
}

}  // namespace normgrid
