#pragma once
// Numerical tests of the characterization conditions for a scattering data set.
//
// Condition ids: "1" (symmetry and unitarity of S), "2" (integrability of F_s'),
// "3a" (boundary condition for the physical solution), "4c" (only the trivial
// solution of X + X*F = 0), "Vb" (J(i kappa_j)^dagger M_j = 0), "Vc" (F_s null
// space has the bound-state dimension), "IIIa" (left-half-line equation), "VI"
// (continuity of S), "L" (Levinson count), "parseval" (isometry of the
// generalized Fourier map).

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hls/marchenko.hpp"
#include "hls/model.hpp"
#include "hls/separable.hpp"

namespace hls::charcheck {

enum class Verdict { pass, fail, skipped };

std::string_view to_string(Verdict v);

struct ConditionResult {
  std::string id;
  Verdict verdict = Verdict::skipped;
  std::vector<std::pair<std::string, double>> diagnostic;  // ordered name/value pairs
  std::string note;

  bool passed() const { return verdict == Verdict::pass; }
  std::optional<double> value(std::string_view name) const;
};

struct CheckReport {
  std::vector<ConditionResult> conditions;
  Verdict overall = Verdict::fail;       // pass iff 1, 2, 3a, 4c pass
  Verdict integral_set = Verdict::fail;  // 1, 2, IIIa, 4c, Vc
  Verdict levinson_set = Verdict::fail;  // 1, 2, 4c (standing in for its L^2 form), L
  std::vector<std::string> covered_by_equivalence;
  std::vector<std::string> warnings;

  const ConditionResult* find(std::string_view id) const;
};

/// Bump test vector: column `direction` times a smooth bump supported on [a, b].
struct TestVector {
  double a = 1.0;
  double b = 2.0;
  ComplexVector direction;

  ComplexVector operator()(double x) const;
};

struct CheckOptions {
  std::vector<std::string> conditions;  // empty: all
  double k_max = 30.0;
  std::size_t unitarity_samples = 64;   // per half line, plus k = 0
  std::size_t boundary_samples = 30;
  double nullity_tol = 1e-6;
  double sampled_nullity_tol = 1e-3;
  double k_eps = 1e-6;
  std::size_t levinson_points = 4000;
  std::vector<TestVector> test_vectors;  // empty: three default bumps
  marchenko::InverseOptions inverse;
};

// ---------------------------------------------------------------- individual checks

ConditionResult check_unitarity_symmetry(const ScatteringData& data, const CheckOptions& opt = {});
/// Closed-form term-wise value of int_0^inf (1+y) |F_s'(y)| dy (a finite-difference
/// estimate of the regular part on sampled data).
ConditionResult check_condition2(const ScatteringData& data);
ConditionResult check_continuity(const ScatteringData& data);

/// Nullity of sign X(y) + int_0^inf X(z) kernel(z+y) dz = 0 by composite Gauss-Legendre
/// Nystrom discretization on geometrically growing panels reaching 40 / slowest_rate.
separable::NullityResult nystrom_nullity(const std::function<ComplexMatrix(double)>& kernel, std::size_t n,
                                         double sign, double slowest_rate, double tol);

enum class Operator { F, Fs, Left };
/// Finite-rank nullity on analytic data, Nystrom nullity on sampled data.
separable::NullityResult operator_nullity(const ScatteringData& data, Operator which, const CheckOptions& opt = {});

ConditionResult check_4c(const ScatteringData& data, const CheckOptions& opt = {});
ConditionResult check_Vc(const ScatteringData& data, const CheckOptions& opt = {});
ConditionResult check_IIIa(const ScatteringData& data, const CheckOptions& opt = {});

struct LevinsonResult {
  double lhs = 0.0;  // change of arg det S from k = inf to k = 0
  std::size_t mu = 0;
  std::size_t n_d = 0;
  double predicted = 0.0;
  std::vector<std::string> warnings;
};

LevinsonResult levinson(const ScatteringData& data, const CheckOptions& opt = {});
ConditionResult check_levinson(const ScatteringData& data, const CheckOptions& opt = {});

/// Skipped when the inverse result has no boundary pair or no kernel at x = 0.
ConditionResult check_3a(const ScatteringData& data, const marchenko::InverseResult& inv, const CheckOptions& opt = {});
ConditionResult check_Vb(const ScatteringData& data, const marchenko::InverseResult& inv);

struct ParsevalResult {
  double norm2 = 0.0;        // ||Y||^2
  double continuous = 0.0;   // int_0^kmax |F_c Y|^2 dk
  double bound = 0.0;        // sum_j |F_j Y|^2
  double defect = 0.0;       // relative
};

/// Analytic data only; Psi and the bound-state solutions are built from the Marchenko kernel.
ParsevalResult parseval(const ScatteringData& data, const TestVector& y, double k_max = 30.0);
ConditionResult check_parseval(const ScatteringData& data, const marchenko::InverseResult& inv,
                               const std::vector<TestVector>& vectors, double k_max = 30.0);
std::vector<TestVector> default_test_vectors(std::size_t n);

/// Runs every requested check; dependents of failed stages are skipped.
/// Throws InputError for structurally unusable data.
CheckReport full_report(const ScatteringData& data, const CheckOptions& opt = {});

/// Plain-text table, one line per condition.
std::string format_text(const CheckReport& report);

}  // namespace hls::charcheck
