#include "hls/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace hls::pipeline {
namespace {

const char* const kTolKeys[] = {"ode_abs", "ode_rel", "nullity", "sampled_nullity"};

void throw_issues(const std::string& what, const Issues& issues) {
  std::string msg = what + ":";
  for (const auto& s : issues) msg += " " + s + ";";
  throw InputError(msg);
}

}  // namespace

void RunConfig::validate() const {
  Issues bad;
  auto positive = [&](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) bad.push_back(std::string(name) + " must be positive");
  };
  positive("x_cut", x_cut);
  positive("x_step", x_step);
  positive("k_max", k_max);
  positive("kappa_max", kappa_max);
  if (k_points < 16) bad.push_back("k_points must be at least 16");
  if (x_step >= x_cut) bad.push_back("x_step must be smaller than x_cut");
  for (const auto& [k, v] : tol) {
    if (std::find(std::begin(kTolKeys), std::end(kTolKeys), k) == std::end(kTolKeys)) {
      bad.push_back("unknown tolerance '" + k + "'");
    }
    positive(k.c_str(), v);
  }
  if (!bad.empty()) throw_issues("invalid configuration", bad);
}

direct::DirectOptions RunConfig::direct_options() const {
  direct::DirectOptions o;
  o.k_max = k_max;
  o.k_points = k_points;
  o.kappa_max = kappa_max;
  if (auto it = tol.find("ode_abs"); it != tol.end()) o.tol.abs = it->second;
  if (auto it = tol.find("ode_rel"); it != tol.end()) o.tol.rel = it->second;
  return o;
}

marchenko::InverseOptions RunConfig::inverse_options() const {
  marchenko::InverseOptions o;
  o.x_grid = Grid::covering(0.0, x_cut, x_step);
  return o;
}

charcheck::CheckOptions RunConfig::check_options(const std::vector<std::string>& conditions) const {
  charcheck::CheckOptions o;
  o.conditions = conditions;
  o.k_max = k_max;
  o.inverse = inverse_options();
  if (auto it = tol.find("nullity"); it != tol.end()) o.nullity_tol = it->second;
  if (auto it = tol.find("sampled_nullity"); it != tol.end()) o.sampled_nullity_tol = it->second;
  return o;
}

direct::DirectResult run_direct(const Potential& v, const BoundaryPair& pair, const RunConfig& cfg) {
  cfg.validate();
  const Issues vi = check_potential(v);
  if (!vi.empty()) throw_issues("invalid potential", vi);
  const BoundaryReport br = check_boundary_pair(pair.A, pair.B);
  if (!br.ok()) throw_issues("invalid boundary pair", br.issues);
  if (pair.n() != v.n()) throw InputError("potential and boundary pair have different sizes");
  return direct::solve_direct(v, pair, cfg.direct_options());
}

marchenko::InverseResult run_invert(const ScatteringData& data, const RunConfig& cfg) {
  cfg.validate();
  return marchenko::invert(data, cfg.inverse_options());
}

charcheck::CheckReport run_check(const ScatteringData& data, const RunConfig& cfg,
                                 const std::vector<std::string>& conditions) {
  cfg.validate();
  return charcheck::full_report(data, cfg.check_options(conditions));
}

bool RoundTripReport::within(double s_tol, double kappa_tol, double m_tol, double boundary_tol) const {
  return complete() && s_deviation <= s_tol && kappa_deviation <= kappa_tol && m_deviation <= m_tol &&
         (!boundary_distance || *boundary_distance <= boundary_tol);
}

RoundTripReport run_roundtrip(const ScatteringData& data, const RunConfig& cfg,
                              const std::optional<BoundaryPair>& reference) {
  RoundTripReport rep;
  rep.inverse = run_invert(data, cfg);
  rep.bound_states_in = data.bound_states.size();
  if (!rep.inverse.complete()) {
    rep.errors = rep.inverse.errors;
    if (rep.errors.empty()) rep.errors.push_back("inverse: no boundary pair");
    return rep;
  }
  const BoundaryPair& pair = *rep.inverse.boundary;
  if (reference) rep.boundary_distance = boundary_distance(pair, *reference);

  rep.direct = direct::solve_direct(rep.inverse.potential, pair, cfg.direct_options());
  const auto& d = *rep.direct;
  for (std::size_t i = 0; i < d.s_values.size(); ++i) {
    const ComplexMatrix want = marchenko::s_from_data(data, d.k_grid.at(i));
    rep.s_deviation = std::max(rep.s_deviation, numlin::max_abs(d.s_values[i] - want));
  }

  auto by_kappa = [](std::vector<BoundState> v) {
    std::sort(v.begin(), v.end(), [](const BoundState& a, const BoundState& b) { return a.kappa < b.kappa; });
    return v;
  };
  const auto in = by_kappa(data.bound_states);
  const auto out = by_kappa(d.bound_states);
  rep.bound_states_out = out.size();
  if (in.size() != out.size()) {
    rep.kappa_deviation = rep.m_deviation = INFINITY;
    rep.errors.push_back("direct: " + std::to_string(out.size()) + " bound state(s) found, " +
                         std::to_string(in.size()) + " in the data");
    return rep;
  }
  for (std::size_t j = 0; j < in.size(); ++j) {
    rep.kappa_deviation = std::max(rep.kappa_deviation, std::abs(in[j].kappa - out[j].kappa));
    rep.m_deviation = std::max(rep.m_deviation, numlin::max_abs(in[j].M - out[j].M));
  }
  return rep;
}

}  // namespace hls::pipeline
