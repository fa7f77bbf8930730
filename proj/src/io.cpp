#include "normgrid/io.hpp"

#include <stdexcept>
#include <vector>

namespace normgrid {

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

json estimate_json(const SuccessEstimate& e) {
  return {{"trials", e.trials},
          {"successes", e.successes},
          {"rate", e.rate},
          {"wilson_lo", e.interval.lo},
          {"wilson_hi", e.interval.hi}};
}

}  // namespace

json to_json(const SubspaceDescriptor& d) {
  json j{{"kind", d.kind}, {"grid_size", d.grid_size}};
  if (d.kind == "trig") {
    j["degree"] = d.degree;
  } else if (d.kind == "discrete") {
    j["N"] = d.dimension;
    j["K"] = d.atoms;
    j["seed"] = d.seed;
    if (d.heavy_atom_scale != 1.0) j["heavy_atom_scale"] = d.heavy_atom_scale;
  }
  return j;
}

SubspaceDescriptor descriptor_from_json(const json& j) {
  SubspaceDescriptor d;
  try {
    d.kind = j.at("kind").get<std::string>();
    d.grid_size = j.value("grid_size", std::size_t{0});
    if (d.kind == "trig") {
      d.degree = j.at("degree").get<int>();
    } else if (d.kind == "discrete") {
      d.dimension = j.at("N").get<int>();
      d.atoms = j.at("K").get<int>();
      d.seed = j.at("seed").get<std::uint64_t>();
      d.heavy_atom_scale = j.value("heavy_atom_scale", 1.0);
    } else {
      throw std::invalid_argument("unknown subspace kind '" + d.kind + "'");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad subspace descriptor: ") + e.what());
  }
  return d;
}

json to_json(const NikolskiiEstimate& e) {
  return {{"q", e.q},
          {"M", e.constant},
          {"method", to_string(e.method)},
          {"x_star", e.argmax},
          {"c_star", to_std(e.maximizer.values)}};
}

json to_json(const DiscretizationReport& r) {
  return {{"p", r.p},
          {"m", r.m},
          {"N", r.dimension},
          {"V", r.value},
          {"exact", r.exactness == Exactness::EigenExact},
          {"pass", r.pass},
          {"seed", r.seed},
          {"elapsed_ms", r.elapsed_ms}};
}

json to_json(const SampleSet& s) {
  json j{{"points", s.points}, {"weights", to_std(s.weights)}, {"seed", s.seed}};
  if (s.density) {
    j["nu"] = {{"p", s.density->p},
               {"grid_points", to_std(s.density->grid_points)},
               {"density", to_std(s.density->density)}};
  }
  return j;
}

json to_json(const EntropyProfile& profile) {
  std::vector<int> ks(profile.e_hat.size());
  for (std::size_t k = 0; k < ks.size(); ++k) ks[k] = static_cast<int>(k);
  json j{{"k", ks},
         {"e_hat", profile.e_hat},
         {"p_hat", profile.p_hat},
         {"W", nullptr},
         {"theta", nullptr},
         {"m", profile.m},
         {"seed", profile.seed}};
  if (profile.W) j["W"] = *profile.W;
  if (profile.theta) j["theta"] = *profile.theta;
  return j;
}

json to_json(const SymmetrizationEstimate& e) {
  return {{"trials", e.trials},
          {"lhs", e.lhs},
          {"rhs", e.rhs},
          {"lhs_stderr", e.lhs_stderr},
          {"rhs_stderr", e.rhs_stderr},
          {"holds", e.holds()}};
}

json to_json(const SweepResult& result) {
  const SweepConfig& c = result.config;
  json rows = json::array();
  for (const auto& r : result.rows) {
    json row = estimate_json(r.estimate);
    row["N"] = r.dimension;
    row["m"] = r.m_star;
    row["censored"] = r.censored;
    rows.push_back(std::move(row));
  }
  json records = json::array();
  for (const auto& r : result.records) {
    json rec = estimate_json(r.estimate);
    rec["N"] = r.dimension;
    rec["m"] = r.m;
    records.push_back(std::move(rec));
  }
  json j{{"family", c.family},
         {"p", c.p},
         {"eps", c.eps},
         {"delta", c.delta},
         {"trials", c.trials},
         {"seed", c.seed},
         {"lower_bound_semantics", result.lower_bound_semantics},
         {"rows", std::move(rows)},
         {"fit", nullptr},
         {"records", std::move(records)}};
  if (result.fit) j["fit"] = {{"C", result.fit->C}, {"s", result.fit->s}};
  return j;
}

}  // namespace normgrid
