#pragma once

// Iterated logarithms and Kneser-type accumulation tests at the edges of the
// gap (q-/r-, q+/r+) of the essential spectrum.

#include <string>
#include <vector>

#include "indefsl/coefficients.hpp"
#include "indefsl/spectra.hpp"

namespace indefsl {

/// Thresholds e_{-1} = -inf, e_0 = 0, e_n = exp(e_{n-1}). log_n is positive
/// for x > e_n. Infinite from n = 5 on in double precision.
double iterated_exp_threshold(int n);

/// log_0(x) = x, log_n(x) = log|log_{n-1}(x)|.
double iterated_log(int n, double x);

struct IterLogFamily {
  double L = 0.0;  // prod_{j<=n} log_j(x)
  double P = 0.0;  // sum_{j<n} 1 / L_j
  double Q = 0.0;  // -(1/4) sum_{j<n} 1 / L_j^2
};

/// Throws DomainError unless |x| > e_n. Negative x go through log|x|, so
/// L_n and P_n are odd in x and Q_n is even.
IterLogFamily iterated_log_family(int n, double x);

/// Delta_n = L_n^2 (q0/p_e - Q_n - q_e r0 / (p_e r_e) + (P_n^2 / 4)(1 - p_e/p0))
/// with (r_e, p_e, q_e) the limits on `side`; x > e_n on the plus side and
/// x < -e_n on the minus side. Evaluated in quad precision because q0 - q_e
/// r0 / r_e is far below double resolution out in the tail.
double delta_eval(CoefficientField const& field, EndpointLimits const& lim, int n, Side side, double x);

/// Geometric tail grid x_k = max(1.1 e_n, x_min) * ratio^k.
struct KneserPlan {
  int samples = 80;
  double ratio = 1.25;
  double x_min = 10.0;
  int window = 20;          // trailing samples behind each statistic
  double drift_tol = 1e-3;  // per octave
  std::vector<double> points(int n) const;
};

enum class KneserOutcome { accumulate, no_accumulate, inconclusive };
char const* to_string(KneserOutcome v);

struct KneserVerdict {
  Side side = Side::plus;
  int n = 0;
  double edge = 0.0;     // q+/r+ or q-/r-
  double limsup = 0.0;   // max of Delta over the final window
  double liminf = 0.0;   // min of Delta over the final window
  double statistic = 0.0;  // the estimate the verdict rests on
  double drift = 0.0;    // per octave, between the last two windows
  bool settled = true;
  KneserOutcome verdict = KneserOutcome::inconclusive;
  double margin = 0.02;
  bool operator==(KneserVerdict const&) const = default;
};

/// Decides whether eigenvalues of K_0 accumulate at the gap edge on `side`
/// (from inside the gap). limsup < -1/4 - margin means accumulation,
/// liminf > -1/4 + margin means none. A statistic still drifting towards
/// -1/4 by more than drift_tol per octave is reported as inconclusive.
/// Throws ValidationError if the limits leave no gap.
KneserVerdict kneser_verdict(CoefficientField const& field, EndpointLimits const& lim, int n, Side side,
                             KneserPlan const& plan = {}, double margin = 0.02);

struct TransferCheck {
  int n = 1;
  bool pass = false;
  double tail_plus = 0.0;   // max of the transfer quantity over the final window at +inf
  double tail_minus = 0.0;  // same at -inf
  double p_tail = 0.0;      // max |p1 - p0| over both final windows, n = 0 only
  double tol = 1e-6;
  std::string reason;
  bool operator==(TransferCheck const&) const = default;
};

/// Tail test of L_n^2 (|r1-r0| + P_n^2 |1/p1-1/p0| + |q1-q0|) -> 0 at both
/// ends, with |p1 - p0| -> 0 as well when n = 0. A pass means Kneser
/// verdicts of c0 carry over to c1 unchanged. The limit counts as zero when
/// the final-window maximum is at most `tol`.
TransferCheck perturbation_transfer_check(CoefficientField const& c0, CoefficientField const& c1, int n,
                                          KneserPlan const& plan = {}, double tol = 1e-6);

}  // namespace indefsl
