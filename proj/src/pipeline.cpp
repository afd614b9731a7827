#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

#include "indefsl/error.hpp"
#include "indefsl/report.hpp"

#ifndef INDEFSL_VERSION
#define INDEFSL_VERSION "unknown"
#endif

namespace indefsl {

std::string report_json_text(AnalysisReport const& r);  // report_json.cpp

char const* version() { return INDEFSL_VERSION; }

namespace {

// Runs one section; library errors become issues of that section.
template <class F>
void guarded(std::vector<SectionIssue>& issues, std::string const& section, F&& body) {
  try {
    body();
  } catch (NumericalError const& e) {
    issues.push_back({section, "numerical", e.what()});
  } catch (Error const& e) {
    issues.push_back({section, "validation", e.what()});
  }
}

std::string agreement(KneserOutcome v, SweepVerdict s) {
  if (v == KneserOutcome::inconclusive || s == SweepVerdict::inconclusive) return "inconclusive";
  bool const same = (v == KneserOutcome::accumulate) == (s == SweepVerdict::accumulating);
  return same ? "agree" : "disagree";
}

std::vector<KneserVerdict> both_sides(CoefficientField const& f, EndpointLimits const& lim, int n, double margin) {
  return {kneser_verdict(f, lim, n, Side::plus, {}, margin), kneser_verdict(f, lim, n, Side::minus, {}, margin)};
}

}  // namespace

AnalysisReport run_pipeline(ProblemSpec const& spec) {
  CoefficientField const field = spec.field();
  std::optional<CoefficientField> const perturbed = spec.perturbed_field();
  NumericsConfig const& cfg = spec.numerics;

  AnalysisReport rep;
  rep.tool_version = version();
  rep.name = spec.name;
  rep.config = spec;
  auto& issues = rep.issues;

  guarded(issues, "hypotheses", [&] { rep.hypotheses = check_hypotheses(field); });

  // truncations are [-X, X] and the essential spectrum comes from the tails,
  // so a finite endpoint would be silently ignored
  if (std::isfinite(spec.a) || std::isfinite(spec.b)) {
    issues.push_back({"interval", "validation", "the analysis runs on the whole line; interval must be (-inf, inf)"});
    return rep;
  }

  // the spectrum feeds the pair and count bounds, so it is computed whenever
  // one of them is wanted and only reported when its own section is on
  std::optional<SpectrumReport> spectrum;
  bool const need_spectrum =
      spec.sections.spectrum || spec.sections.counts || spec.sections.budget;
  if (need_spectrum) guarded(issues, "spectrum", [&] { spectrum = build_spectrum_report(field, cfg); });
  if (spec.sections.spectrum) rep.spectrum = spectrum;

  std::optional<EndpointLimits> limits;
  guarded(issues, "kneser", [&] { limits = resolve_limits(field); });

  if (spec.sections.kneser) {
    if (!limits) {
      issues.push_back({"kneser", "skipped", "needs limits of the coefficients at both ends"});
    } else if (!limits->has_gap()) {
      issues.push_back({"kneser", "skipped", "the essential spectrum has no gap"});
    } else {
      guarded(issues, "kneser", [&] {
        double const width = limits->plus_edge() - limits->minus_edge();
        for (auto const& v : both_sides(field, *limits, spec.kneser_order, spec.margin)) {
          KneserLink link;
          link.verdict = v;
          link.agreement = "no sweep";
          if (cfg.run_sweeps) {
            Approach const ap = v.side == Side::plus ? Approach::below : Approach::above;
            double const delta = std::min(0.1 * std::max(1.0, std::abs(v.edge)), 0.45 * width);
            link.sweep = accumulation_sweep(field, v.edge, ap, cfg.sweep_levels, cfg.density, v.side, delta);
            link.agreement = agreement(v.verdict, link.sweep->verdict);
          }
          rep.kneser.push_back(link);
        }
      });
    }
  }

  std::optional<EssentialGap> gap;
  std::optional<double> eta = spec.eta;
  guarded(issues, "budget", [&] {
    gap = essential_gap(essential_pieces(field, cfg.k_max));
    if (!eta) eta = default_eta(*gap);
  });

  std::optional<NegativeSquaresBudget> budget;
  if (spec.sections.budget || spec.sections.counts) {
    // a touching gap only admits eta on the common edge, which has to be
    // asked for explicitly
    if (gap && (!eta || (!gap->open() && !spec.allow_edge_eta)))
      issues.push_back({"budget", "skipped", "the essential spectrum has no open gap (see allow_edge_eta)"});
    else if (gap)
      guarded(issues, "budget", [&] { budget = kappa_budget(field, *eta, cfg, spec.allow_edge_eta); });
  }
  if (spec.sections.budget) {
    rep.budget = budget;
    if (budget && spectrum) rep.pair_bound = pair_bound_check(*budget, *spectrum);
  }

  if (spec.sections.counts && gap) {
    std::optional<Interval> I = spec.count_interval;
    if (!I) I = default_count_interval(*gap);
    if (!I)
      issues.push_back({"counts", "skipped", "the essential spectrum has no gap"});
    else if (!budget || !budget->available)
      issues.push_back({"counts", "skipped", "needs an available negative-squares budget"});
    else if (!spectrum)
      issues.push_back({"counts", "skipped", "needs the truncation spectra"});
    else
      guarded(issues, "counts", [&] { rep.counts = count_estimate(field, *I, *budget, *spectrum, cfg); });
  }

  if (spec.sections.structural)
    guarded(issues, "structural", [&] {
      rep.structural = structural_check(field, spec.structural_truncation, cfg.density, eta.value_or(0.0));
    });

  if (spec.sections.perturbation && perturbed) {
    PerturbationReport p;
    for (ComparisonMode m : spec.comparison_modes)
      guarded(issues, "perturbation", [&] { p.comparisons.push_back(check_comparison_conditions(field, *perturbed, m)); });
    guarded(issues, "perturbation",
            [&] { p.transfer = perturbation_transfer_check(field, *perturbed, spec.transfer_order); });
    if (limits && limits->has_gap()) {
      guarded(issues, "perturbation", [&] {
        p.base_verdicts = both_sides(field, *limits, spec.transfer_order, spec.margin);
        p.perturbed_verdicts = both_sides(*perturbed, *limits, spec.transfer_order, spec.margin);
        bool same = true;
        for (std::size_t i = 0; i < p.base_verdicts.size(); ++i)
          same = same && p.base_verdicts[i].verdict == p.perturbed_verdicts[i].verdict;
        p.verdicts_identical = same;
      });
    }
    guarded(issues, "perturbation", [&] { p.spectrum = build_spectrum_report(*perturbed, cfg); });
    rep.perturbation = std::move(p);
  }
  return rep;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto const res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string eigenvalues_csv(SpectrumReport const& spectrum) {
  std::string out = "level,re,im,residual\n";
  for (auto const& lv : spectrum.levels) {
    std::string const level = shortest(lv.truncation);
    for (std::size_t i = 0; i < lv.real.size(); ++i) {
      double const res = i < lv.real_residuals.size() ? lv.real_residuals[i] : 0.0;
      out += level + "," + shortest(lv.real[i]) + ",0," + shortest(res) + "\n";
    }
    for (std::size_t i = 0; i < lv.pairs.size(); ++i) {
      double const res = i < lv.pair_residuals.size() ? lv.pair_residuals[i] : 0.0;
      auto const& z = lv.pairs[i];
      out += level + "," + shortest(z.real()) + "," + shortest(z.imag()) + "," + shortest(res) + "\n";
      out += level + "," + shortest(z.real()) + "," + shortest(-z.imag()) + "," + shortest(res) + "\n";
    }
  }
  return out;
}

std::string serialize_report(AnalysisReport const& report, ReportFormat format) {
  if (format == ReportFormat::csv) return eigenvalues_csv(report.spectrum.value_or(SpectrumReport{}));
  return report_json_text(report);
}

}  // namespace indefsl
