#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace normgrid {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a numerical procedure cannot produce a trustworthy result
/// (ill-conditioning, non-convergence, degenerate designs). The CLI maps it
/// to exit status 3; std::invalid_argument maps to exit status 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 64-bit mix of (master, index) used to derive per-trial seeds.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

/// Worker count: NORMGRID_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, count) across thread_count() workers. Work is
/// statically partitioned so results written by index are deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// 95% Wilson score interval for `successes` out of `trials`.
struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials);

}  // namespace normgrid
