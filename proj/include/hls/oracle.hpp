#pragma once
// Closed-form catalog of worked examples: scattering data, potentials, boundary
// pairs, kernels and the verdicts the characterization checks should return.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hls/model.hpp"

namespace hls::oracle {

enum class Overall { pass, fail, undetermined };

std::string_view to_string(Overall o);

struct OracleExample {
  std::string name;
  std::string description;  // one line
  std::size_t n = 1;
  ScatteringData data;

  /// Closed-form or zero potential; may be singular at x = 0 for the non-Faddeev entries.
  std::optional<Potential> potential;
  /// Boundary pair that recovery should return; empty when recovery must fail.
  std::optional<BoundaryPair> boundary;
  /// K(x, y) for y >= x > 0, when known in closed form.
  std::function<ComplexMatrix(double, double)> k_closed;
  /// The scattering matrix as printed (rational in k), for cross-checking the F_s terms.
  std::function<ComplexMatrix(double)> s_closed;

  /// Condition id -> expected pass (true) or fail (false). Absent ids are not asserted.
  std::map<std::string, bool> expected;
  Overall overall = Overall::undetermined;
  std::optional<double> levinson_n;         // predicted bound-state count
  std::optional<std::size_t> f_nullity;     // X + X*F = 0 on y > 0
  std::optional<std::size_t> fs_nullity;    // X + X*F_s = 0 on y > 0
  std::optional<std::size_t> left_nullity;  // -X + X*F_s = 0 on y < 0

  /// Direct problem with a boundary other than `boundary` and the bound states it produces.
  std::optional<BoundaryPair> direct_boundary;
  std::vector<BoundState> direct_bound_states;

  std::string notes;

  bool marchenko_class() const { return overall == Overall::pass; }
};

struct ExampleSummary {
  std::string name;
  std::string description;
  Overall overall;
};

/// Every entry, in a fixed order.
const std::vector<OracleExample>& catalog();
/// Throws InputError for an unknown name.
const OracleExample& get_example(std::string_view name);
std::vector<ExampleSummary> list_examples();

/// V(x) = 1/x cut off at x_cut: locally non-integrable at the origin.
Potential truncated_coulomb(double x_cut = 1.0);

/// Closed-form potential of a catalog entry (or "truncated_coulomb") with the given cutoff.
std::optional<Potential> potential_by_name(std::string_view name, double x_cut);

}  // namespace hls::oracle
