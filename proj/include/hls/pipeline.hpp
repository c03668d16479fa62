#pragma once
// The four pipelines behind the command-line tool: direct, invert, check and the
// invert -> direct round trip. The CLI only parses arguments and writes files.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hls/charcheck.hpp"
#include "hls/direct.hpp"
#include "hls/marchenko.hpp"
#include "hls/model.hpp"

namespace hls::pipeline {

struct RunConfig {
  double x_cut = 12.0;
  double x_step = 0.02;
  double k_max = 30.0;
  std::size_t k_points = 600;
  double kappa_max = 10.0;
  /// Overrides: ode_abs, ode_rel, nullity, sampled_nullity.
  std::map<std::string, double> tol;

  /// Throws InputError unless every value is positive, k_points >= 16 and the override keys are known.
  void validate() const;

  direct::DirectOptions direct_options() const;
  marchenko::InverseOptions inverse_options() const;
  charcheck::CheckOptions check_options(const std::vector<std::string>& conditions = {}) const;
};

/// Throws InputError with every validation issue of the potential or the boundary pair.
direct::DirectResult run_direct(const Potential& v, const BoundaryPair& pair, const RunConfig& cfg);
marchenko::InverseResult run_invert(const ScatteringData& data, const RunConfig& cfg);
charcheck::CheckReport run_check(const ScatteringData& data, const RunConfig& cfg,
                                 const std::vector<std::string>& conditions = {});

struct RoundTripReport {
  marchenko::InverseResult inverse;
  std::optional<direct::DirectResult> direct;  // absent when the inverse leg is incomplete
  double s_deviation = 0.0;                    // max over the k grid
  double kappa_deviation = 0.0;
  double m_deviation = 0.0;
  std::optional<double> boundary_distance;     // against the reference pair, when given
  std::size_t bound_states_in = 0;
  std::size_t bound_states_out = 0;
  std::vector<std::string> errors;

  bool complete() const { return direct.has_value() && errors.empty(); }
  bool within(double s_tol = 1e-4, double kappa_tol = 1e-6, double m_tol = 1e-5, double boundary_tol = 1e-6) const;
};

RoundTripReport run_roundtrip(const ScatteringData& data, const RunConfig& cfg,
                              const std::optional<BoundaryPair>& reference = std::nullopt);

}  // namespace hls::pipeline
