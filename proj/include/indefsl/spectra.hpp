#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "indefsl/coefficients.hpp"
#include "indefsl/eigen_core.hpp"

namespace indefsl {

/// Closed interval; either end may be infinite.
struct Band {
  double lo;
  double hi;
  bool operator==(Band const&) const = default;
};

/// Sorted, pairwise disjoint, non-touching closed intervals.
struct BandSet {
  std::vector<Band> bands;

  static BandSet normalized(std::vector<Band> bands);
  bool empty() const { return bands.empty(); }
  bool contains(double x) const;
  /// Finite endpoints in ascending order.
  std::vector<double> boundary() const;
  /// Open gaps between consecutive bands.
  std::vector<Band> gaps() const;
  BandSet reflected() const;
  bool operator==(BandSet const&) const = default;
};

BandSet essential_union(BandSet const& a, BandSet const& b);
BandSet band_intersection(BandSet const& a, BandSet const& b);

/// sigma_ess(H_+) = [q+/r+, inf) and sigma_ess(-H_-) = (-inf, q-/r-].
BandSet essential_plus(EndpointLimits const& lim);
BandSet essential_minus(EndpointLimits const& lim);
/// Union of the two half-line pieces.
BandSet essential_from_limits(EndpointLimits const& lim);

enum class Side { plus, minus };
char const* to_string(Side s);

/// D(lambda) = u1(T) + (p u2')(T) for -(p u')' + q u = lambda |r| u over
/// one period of the given side, Dormand-Prince with relative tolerance
/// 1e-10. The period is taken 40 units into the tail (beyond beta, or below
/// alpha) where compactly decaying perturbations are negligible.
double hill_discriminant(CoefficientField const& field, Side side, double lambda);

/// Discrete counterpart of hill_discriminant: trace of the one-period
/// monodromy of the three-term recurrence assembled on nodes spaced
/// period / ceil(period * density) apart, anchored at `anchor` (a node).
double discrete_hill_discriminant(CoefficientField const& field, Side side, double lambda, double density,
                                  double anchor);

struct PeriodicBands {
  BandSet bands;           // in K_0 coordinates: reflected for the minus side
  std::size_t found = 0;   // bands located inside the search range
  bool partial = false;    // fewer than k_max bands found
  bool reached_cap = false;  // last band extends past the search cap
  double cap_lo = 0.0;
  double cap_hi = 0.0;
  bool operator==(PeriodicBands const&) const = default;
};

/// First k_max bands {|D| <= 2} of the periodic problem on one side. For the
/// minus side the result is the reflected set, i.e. the bands of -H_-.
PeriodicBands periodic_bands(CoefficientField const& field, Side side, int k_max = 5);

/// Bands of the discretized half-line operator on a period-aligned grid
/// anchored at `anchor`, same conventions as periodic_bands.
PeriodicBands discrete_periodic_bands(CoefficientField const& field, Side side, double density, double anchor,
                                      int k_max = 5);

enum class Approach { below, above };
char const* to_string(Approach a);

enum class Accumulation { none, accumulating, unknown };
char const* to_string(Accumulation a);

/// Accumulation status of the discrete spectrum of H_+ (Side::plus) or
/// -H_- (Side::minus) at `edge`, approached from `approach`.
struct AccumulationFlag {
  Side op;
  double edge;
  Approach approach;
  Accumulation status;
  bool operator==(AccumulationFlag const&) const = default;
};

enum class PropertyP { holds, fails, unknown };
char const* to_string(PropertyP p);

struct EdgeClassification {
  double location = 0.0;
  PropertyP status = PropertyP::unknown;
  // case A: left neighbourhood in rho(H_+), right neighbourhood in rho(-H_-)
  // case B: left neighbourhood in rho(-H_-), right neighbourhood in rho(H_+)
  PropertyP case_a = PropertyP::unknown;
  PropertyP case_b = PropertyP::unknown;
  Accumulation plus_below = Accumulation::unknown;
  Accumulation minus_above = Accumulation::unknown;
  Accumulation minus_below = Accumulation::unknown;
  Accumulation plus_above = Accumulation::unknown;
  bool operator==(EdgeClassification const&) const = default;
};

/// Boundary points of plus ∩ minus with their property (P) status. `plus`
/// is sigma_ess(H_+), `minus` is sigma_ess(-H_-). Missing flags count as
/// unknown.
std::vector<EdgeClassification> classify_edges(BandSet const& plus, BandSet const& minus,
                                               std::vector<AccumulationFlag> const& flags);

enum class SweepVerdict { accumulating, finite, inconclusive };
char const* to_string(SweepVerdict v);

struct AccumulationEvidence {
  Side op = Side::plus;
  double edge = 0.0;
  Approach approach = Approach::below;
  double delta = 0.0;
  std::vector<double> levels;
  std::vector<std::size_t> counts;
  SweepVerdict verdict = SweepVerdict::inconclusive;
  // Counting edge. Equals `edge` except on periodic tails, where the band
  // edges of the discretized operator sit O(h^2) away from the exact ones.
  double grid_edge = 0.0;
  bool operator==(AccumulationEvidence const&) const = default;
};

inline std::vector<double> default_sweep_levels() { return {40.0, 2560.0, 163840.0}; }

/// Counts eigenvalues of the half-line operator `op` in (edge - delta, edge)
/// or (edge, edge + delta) at each truncation level. Strictly increasing
/// counts give "accumulating", equal counts at the last two levels "finite".
/// By default the operator is H_+ when approaching from below and -H_- from
/// above, and delta = 0.1 * max(1, |edge|).
/// On a periodic tail the grids are aligned with the period and the window
/// is taken against the matching band edge of the discretized operator; if
/// no such edge lies within delta the verdict is inconclusive.
AccumulationEvidence accumulation_sweep(CoefficientField const& field, double edge, Approach approach,
                                        std::vector<double> const& levels = default_sweep_levels(),
                                        double density = 10.0, std::optional<Side> op = {},
                                        std::optional<double> delta = {});

SweepVerdict sweep_verdict(std::vector<std::size_t> const& counts);

struct NumericsConfig {
  std::vector<double> truncations{40.0, 80.0, 160.0};
  double density = 10.0;
  std::vector<double> sweep_levels = default_sweep_levels();
  int k_max = 5;
  double im_tol = 1e-8;  // relative to max(1, spectral radius)
  bool run_sweeps = true;
  bool override_hypotheses = false;
  bool operator==(NumericsConfig const&) const = default;
};

struct LevelSpectrum {
  double truncation = 0.0;
  std::size_t order = 0;
  std::vector<double> real;
  std::vector<std::complex<double>> pairs;  // Im > 0
  std::vector<double> real_residuals;
  std::vector<double> pair_residuals;
  double max_residual = 0.0;
  std::size_t max_cluster = 1;
  double im_tol = 0.0;
  bool operator==(LevelSpectrum const&) const = default;
};

struct SpectrumReport {
  std::string regime;  // "limits", "periodic", "mixed" or "unknown"
  std::optional<BandSet> essential;
  std::optional<BandSet> essential_plus;   // sigma_ess(H_+)
  std::optional<BandSet> essential_minus;  // sigma_ess(-H_-)
  std::optional<PeriodicBands> periodic_plus;
  std::optional<PeriodicBands> periodic_minus;
  std::optional<EndpointLimits> limits;
  SignWindow window;
  std::vector<LevelSpectrum> levels;
  double containment = 0.0;  // max |mu| over all nonreal eigenvalues and levels
  std::vector<EdgeClassification> edges;
  std::vector<AccumulationEvidence> accumulation;
  std::vector<std::string> notes;
  bool operator==(SpectrumReport const&) const = default;
};

/// Truncation spectra of K_full at each level plus essential spectrum,
/// edge classification and accumulation sweeps. Throws ValidationError if
/// the hypotheses fail and were not overridden, or if (a, b) is not the
/// whole real line.
SpectrumReport build_spectrum_report(CoefficientField const& field, NumericsConfig const& cfg = {});

/// Essential spectrum pieces by regime; nullopt where a side is undetermined.
struct EssentialPieces {
  std::optional<BandSet> plus;
  std::optional<BandSet> minus;
  std::optional<PeriodicBands> periodic_plus;
  std::optional<PeriodicBands> periodic_minus;
  std::optional<EndpointLimits> limits;
  std::string regime;
};
EssentialPieces essential_pieces(CoefficientField const& field, int k_max = 5);

}  // namespace indefsl
