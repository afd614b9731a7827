#pragma once

// Problem files, the analysis pipeline and report serialization.
//
// Problem files and reports are JSON. Non-finite numbers are written as the
// strings "inf" and "-inf"; finite ones use the shortest decimal that reads
// back to the same double, so equal inputs give byte-identical reports.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "indefsl/budgets.hpp"
#include "indefsl/coefficients.hpp"
#include "indefsl/kneser.hpp"
#include "indefsl/spectra.hpp"

namespace indefsl {

inline constexpr int kSchemaVersion = 1;

/// Library version, from the build.
char const* version();

struct CoefficientSources {
  std::string r;
  std::string p = "1";
  std::string q = "0";
  bool operator==(CoefficientSources const&) const = default;
};

/// Which parts of the analysis end up in the report.
struct Sections {
  bool spectrum = true;
  bool kneser = true;
  bool budget = true;
  bool counts = true;
  bool structural = true;
  bool perturbation = true;
  bool operator==(Sections const&) const = default;
};

struct ProblemSpec {
  std::string name;
  CoefficientSources base;
  std::optional<CoefficientSources> perturbed;
  double a = -std::numeric_limits<double>::infinity();
  double b = std::numeric_limits<double>::infinity();
  std::optional<SignWindow> sign_window;
  EndpointMeta at_a;  // "endpoints.minus"
  EndpointMeta at_b;  // "endpoints.plus"
  NumericsConfig numerics;
  std::optional<double> eta;  // default: gap midpoint, or the common edge
  bool allow_edge_eta = false;
  int kneser_order = 0;
  int transfer_order = 1;
  double margin = 0.02;
  std::optional<Interval> count_interval;  // default: gap shrunk by 5% per side
  double structural_truncation = 10.0;
  std::vector<ComparisonMode> comparison_modes{ComparisonMode::limits, ComparisonMode::l1,
                                               ComparisonMode::first_moment};
  Sections sections;

  /// Parses the expressions; ValidationError messages start with the field path.
  CoefficientField field() const;
  std::optional<CoefficientField> perturbed_field() const;
  bool operator==(ProblemSpec const&) const = default;
};

/// Parses and validates a problem file. Throws ValidationError whose message
/// starts with the offending field path, e.g. "numerics.truncations: ...".
ProblemSpec parse_problem(std::string_view json_text);
std::string problem_to_json(ProblemSpec const& spec);

/// A section that could not run, or did not apply.
struct SectionIssue {
  std::string section;
  std::string kind;  // "skipped", "validation" or "numerical"
  std::string message;
  bool operator==(SectionIssue const&) const = default;
};

/// A Kneser verdict next to an accumulation sweep on the same edge.
struct KneserLink {
  KneserVerdict verdict;
  std::optional<AccumulationEvidence> sweep;
  std::string agreement;  // "agree", "disagree", "inconclusive" or "no sweep"
  bool operator==(KneserLink const&) const = default;
};

struct PerturbationReport {
  std::vector<ComparisonReport> comparisons;
  std::optional<TransferCheck> transfer;
  std::vector<KneserVerdict> base_verdicts;  // at transfer_order
  std::vector<KneserVerdict> perturbed_verdicts;
  std::optional<bool> verdicts_identical;
  std::optional<SpectrumReport> spectrum;  // of the perturbed field
  bool operator==(PerturbationReport const&) const = default;
};

struct AnalysisReport {
  int schema_version = kSchemaVersion;
  std::string tool_version;
  std::string name;
  std::optional<ProblemSpec> config;
  std::optional<HypothesisReport> hypotheses;
  std::optional<SpectrumReport> spectrum;
  std::vector<KneserLink> kneser;
  std::optional<NegativeSquaresBudget> budget;
  std::optional<PairBoundCheck> pair_bound;
  std::optional<CountEstimate> counts;
  std::optional<StructuralCheck> structural;
  std::optional<PerturbationReport> perturbation;
  std::vector<SectionIssue> issues;
  bool operator==(AnalysisReport const&) const = default;
};

/// Runs every enabled section. Failures are recorded as issues of their
/// section and never stop the others. Throws ValidationError only when the
/// coefficient expressions themselves are invalid.
AnalysisReport run_pipeline(ProblemSpec const& spec);

enum class ReportFormat { json, csv };

std::string serialize_report(AnalysisReport const& report, ReportFormat format = ReportFormat::json);
/// Inverse of the JSON serialization.
AnalysisReport deserialize_report(std::string_view json_text);

/// One row per eigenvalue: level, re, im, residual. Conjugate pairs give two
/// rows. Covers the base spectrum only.
std::string eigenvalues_csv(SpectrumReport const& spectrum);

// JSON fragments used by the command line tool for single sections.
std::string to_json_text(SpectrumReport const& s);
std::string to_json_text(PeriodicBands const& b);
std::string to_json_text(EssentialPieces const& e);
std::string to_json_text(KneserVerdict const& v);
std::string to_json_text(NegativeSquaresBudget const& b);
std::string to_json_text(ComparisonReport const& c);
std::string to_json_text(TransferCheck const& t);

}  // namespace indefsl
