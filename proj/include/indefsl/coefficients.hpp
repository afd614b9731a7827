#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "indefsl/expr.hpp"

namespace indefsl {

/// Limits (r_e, p_e, q_e) of the coefficients at one singular endpoint.
struct SideLimits {
  double r = 0.0;
  double p = 1.0;
  double q = 0.0;
  bool operator==(SideLimits const&) const = default;
};

/// The coefficients are periodic near this endpoint with the given period.
struct SidePeriod {
  double length = 1.0;
  bool operator==(SidePeriod const&) const = default;
};

struct UnknownEndpoint {
  bool operator==(UnknownEndpoint const&) const = default;
};

using EndpointMeta = std::variant<UnknownEndpoint, SideLimits, SidePeriod>;

/// Limits of r, p, q at -inf (minus) and +inf (plus).
struct EndpointLimits {
  double r_minus = -1.0;
  double r_plus = 1.0;
  double p_minus = 1.0;
  double p_plus = 1.0;
  double q_minus = 0.0;
  double q_plus = 0.0;

  /// Throws ValidationError unless r_minus < 0 < r_plus and p_minus, p_plus > 0.
  void validate() const;
  /// Edge of the essential spectrum of H_+: q_plus / r_plus.
  double plus_edge() const { return q_plus / r_plus; }
  /// Upper edge of the essential spectrum of -H_-: q_minus / r_minus.
  double minus_edge() const { return q_minus / r_minus; }
  bool has_gap() const { return minus_edge() < plus_edge(); }
  bool operator==(EndpointLimits const&) const = default;
};

/// Periods of the coefficients on (beta, inf) and (-inf, alpha).
struct PeriodDescriptor {
  double omega = 1.0;  // period on (beta, inf)
  double theta = 1.0;  // period on (-inf, alpha)
  void validate() const;
  bool operator==(PeriodDescriptor const&) const = default;
};

struct SignWindow {
  double alpha = 0.0;
  double beta = 0.0;
  bool operator==(SignWindow const&) const = default;
};

/// Coefficient triple (r, p, q) of -(p u')' + q u = lambda r u on (a, b).
struct CoefficientField {
  Expr r;
  Expr p = Expr::constant(1.0);
  Expr q;
  double a = -std::numeric_limits<double>::infinity();
  double b = std::numeric_limits<double>::infinity();
  std::optional<SignWindow> sign_window;
  EndpointMeta at_a;
  EndpointMeta at_b;

  /// Sign window, detecting it from r when none was declared.
  SignWindow window() const;
};

/// Sampling used by detect_sign_window.
struct SignScanPlan {
  double half_width = 100.0;  // uniform scan over [-half_width, half_width]
  double step = 0.01;
  int tail_samples = 60;  // geometric tail x0 * 1.25^k beyond half_width
};

/// Smallest window [alpha, beta] containing every detected sign change of r.
/// Throws ValidationError when r is not negative near -inf and positive near
/// +inf, or when sign changes keep appearing in the tail.
SignWindow detect_sign_window(Expr const& r, SignScanPlan const& scan = {});

/// Geometric tail grid x_k = x0 * ratio^k.
struct TailGrid {
  double x0 = 10.0;
  double ratio = 1.25;
  int samples = 60;
  double cauchy_tol = 1e-6;  // relative
  std::vector<double> points() const;
};

/// Outcome of a Cauchy test on the tail samples of one coefficient.
struct TailLimit {
  bool converged = false;
  double value = 0.0;    // last sample when converged
  int converged_at = -1;  // first index after which all increments pass
  bool operator==(TailLimit const&) const = default;
};

/// Cauchy test on f(sign * x_k). `converged_at` is the smallest k such that
/// every later increment is within tol * max(1, |f|); a limit is certified
/// when at least five trailing increments pass.
TailLimit tail_limit(Expr const& f, double sign, TailGrid const& grid = {});

struct LimitEstimate {
  TailLimit r_minus, r_plus, p_minus, p_plus, q_minus, q_plus;
  bool all_converged() const;
  /// Limits if every coefficient converged and the signs are admissible.
  std::optional<EndpointLimits> limits() const;
};

LimitEstimate estimate_endpoint_limits(CoefficientField const& field, TailGrid const& grid = {});

/// Limits declared in the endpoint metadata, or estimated from the tails when
/// either side is undeclared. Returns nothing if any side is periodic or a
/// tail fails to converge.
std::optional<EndpointLimits> resolve_limits(CoefficientField const& field);

enum class CheckStatus { pass, fail, assumed };
char const* to_string(CheckStatus s);

struct HypothesisCheck {
  CheckStatus status = CheckStatus::pass;
  std::vector<double> witnesses;  // sample points where the check failed
  std::string detail;
  bool operator==(HypothesisCheck const&) const = default;
};

struct HypothesisReport {
  HypothesisCheck h1_sign_window;
  HypothesisCheck h2_limit_point;
  HypothesisCheck h3_bounded_q_over_r;
  std::optional<SignWindow> window;
  bool ok() const {
    return h1_sign_window.status != CheckStatus::fail &&
           h3_bounded_q_over_r.status != CheckStatus::fail;
  }
  bool operator==(HypothesisReport const&) const = default;
};

/// Checks the sign-window hypothesis, reports the limit-point property
/// (certified only in the limits or periodic regimes, otherwise "assumed") and
/// checks boundedness of q/r on tail samples.
HypothesisReport check_hypotheses(CoefficientField const& field);

/// Samples p > 0 and |r| >= 1e-12 * max|r| on [lo, hi]; throws
/// ValidationError with the offending point otherwise.
void validate_field(CoefficientField const& field, double lo = -100.0, double hi = 100.0,
                    double step = 0.01);

enum class ComparisonMode { limits, l1, first_moment };
char const* to_string(ComparisonMode m);

struct ComparisonReport {
  ComparisonMode mode = ComparisonMode::limits;
  bool pass = false;
  double value = 0.0;  // quadrature value, or largest tail deviation for limits
  std::string reason;
  bool operator==(ComparisonReport const&) const = default;
};

/// Compares two coefficient fields on the same interval. The limits mode
/// checks r1/r0 -> 1, p1/p0 -> 1 and (q1-q0)/r0 -> 0 at both ends; the
/// integral modes integrate |r1-r0| + |1/p1-1/p0| + |q1-q0| (times |t| for
/// first_moment) over the real line.
ComparisonReport check_comparison_conditions(CoefficientField const& c0, CoefficientField const& c1,
                                             ComparisonMode mode);

}  // namespace indefsl
