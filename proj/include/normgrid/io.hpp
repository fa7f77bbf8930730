#pragma once

#include <json.hpp>

#include "normgrid/discretization.hpp"
#include "normgrid/entropy.hpp"
#include "normgrid/function_spaces.hpp"
#include "normgrid/nikolskii.hpp"
#include "normgrid/sweep.hpp"

namespace normgrid {

using json = nlohmann::json;

/// {kind, degree | (N, K, seed), grid_size}; discrete descriptors also carry
/// heavy_atom_scale when it differs from 1.
json to_json(const SubspaceDescriptor& descriptor);
SubspaceDescriptor descriptor_from_json(const json& j);

/// {q, M, method, x_star, c_star}.
json to_json(const NikolskiiEstimate& estimate);

/// One JSON-lines record: {p, m, N, V, exact, pass, seed, elapsed_ms}.
json to_json(const DiscretizationReport& report);

/// {points, weights, seed[, nu: {p, grid_points, density}]}.
json to_json(const SampleSet& samples);

/// {k, e_hat, p_hat, W, theta, m, seed}.
json to_json(const EntropyProfile& profile);

json to_json(const SymmetrizationEstimate& estimate);

/// Configuration, per-N rows, the fitted (C, s) or null, and the search records.
json to_json(const SweepResult& result);

}  // namespace normgrid
