// Command line front end. Exit codes: 0 success, 2 invalid input,
// 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "indefsl/error.hpp"
#include "indefsl/report.hpp"

using namespace indefsl;

namespace {

struct Options {
  std::string problem;
  std::string out;
  std::string format = "json";
  std::vector<double> trunc;
  std::optional<double> density;
  std::optional<double> eta;
  std::optional<int> n;
  std::optional<double> margin;
  bool override_hypotheses = false;
  bool allow_edge_eta = false;
  std::string side = "both";
};

ProblemSpec load(Options const& o) {
  std::ifstream in(o.problem);
  if (!in) throw ValidationError("cannot read problem file " + o.problem);
  std::stringstream buf;
  buf << in.rdbuf();
  ProblemSpec spec = parse_problem(buf.str());
  if (!o.trunc.empty()) {
    for (std::size_t i = 0; i < o.trunc.size(); ++i)
      if (!(o.trunc[i] > 0) || (i > 0 && !(o.trunc[i] > o.trunc[i - 1])))
        throw ValidationError("--trunc: levels must be positive and strictly increasing");
    spec.numerics.truncations = o.trunc;
  }
  if (o.density) spec.numerics.density = *o.density;
  if (o.eta) spec.eta = *o.eta;
  if (o.n) spec.kneser_order = *o.n;
  if (o.margin) spec.margin = *o.margin;
  if (o.override_hypotheses) spec.numerics.override_hypotheses = true;
  if (o.allow_edge_eta) spec.allow_edge_eta = true;
  return spec;
}

void emit(Options const& o, std::string const& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + o.out);
  f << text;
}

std::string array_of(std::vector<std::string> const& parts) {
  nlohmann::json a = nlohmann::json::array();
  for (auto const& p : parts) a.push_back(nlohmann::json::parse(p));
  return a.dump(2) + "\n";
}

std::vector<Side> sides(Options const& o) {
  if (o.side == "plus") return {Side::plus};
  if (o.side == "minus") return {Side::minus};
  return {Side::plus, Side::minus};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of indefinite Sturm-Liouville operators"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("problem", o.problem, "problem file (JSON)")->required();
    sub->add_option("--out", o.out, "write the result here instead of stdout");
    sub->add_option("--trunc", o.trunc, "truncation levels X (interval [-X, X])")->delimiter(',');
    sub->add_option("--density", o.density, "grid nodes per unit length");
    sub->add_flag("--override-hypotheses", o.override_hypotheses, "run even if hypothesis checks fail");
  };

  auto* analyze = app.add_subcommand("analyze", "full report");
  common(analyze);
  analyze->add_option("--format", o.format, "json or csv (eigenvalues)")->check(CLI::IsMember({"json", "csv"}));
  analyze->add_option("--eta", o.eta, "spectral parameter of the budget");
  analyze->add_flag("--allow-edge-eta", o.allow_edge_eta, "admit eta on a gap edge");
  analyze->add_option("--n", o.n, "order of the Kneser test");
  analyze->add_option("--margin", o.margin, "Kneser margin around -1/4");

  auto* essential = app.add_subcommand("essential", "essential spectrum and gap");
  common(essential);

  auto* bands = app.add_subcommand("bands", "periodic bands of each side");
  common(bands);
  bands->add_option("--side", o.side)->check(CLI::IsMember({"plus", "minus", "both"}));

  auto* kneser = app.add_subcommand("kneser", "Kneser verdicts at the gap edges");
  common(kneser);
  kneser->add_option("--n", o.n, "order of the iterated logarithm");
  kneser->add_option("--margin", o.margin, "margin around -1/4");
  kneser->add_option("--side", o.side)->check(CLI::IsMember({"plus", "minus", "both"}));

  auto* budget = app.add_subcommand("budget", "negative-squares budget");
  common(budget);
  budget->add_option("--eta", o.eta, "spectral parameter");
  budget->add_flag("--allow-edge-eta", o.allow_edge_eta, "admit eta on a gap edge");

  auto* eig = app.add_subcommand("eig", "truncation spectra of K");
  common(eig);
  eig->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* compare = app.add_subcommand("compare", "base against perturbed coefficients");
  common(compare);
  compare->add_option("--n", o.n, "order of the transfer test");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ProblemSpec spec = load(o);
    CoefficientField const field = spec.field();
    if (analyze->parsed()) {
      AnalysisReport const rep = run_pipeline(spec);
      emit(o, serialize_report(rep, o.format == "csv" ? ReportFormat::csv : ReportFormat::json));
    } else if (essential->parsed()) {
      emit(o, to_json_text(essential_pieces(field, spec.numerics.k_max)));
    } else if (bands->parsed()) {
      std::vector<std::string> parts;
      for (Side s : sides(o)) parts.push_back(to_json_text(periodic_bands(field, s, spec.numerics.k_max)));
      emit(o, array_of(parts));
    } else if (kneser->parsed()) {
      auto const lim = resolve_limits(field);
      if (!lim) throw ValidationError("Kneser test needs limits of the coefficients at both ends");
      std::vector<std::string> parts;
      for (Side s : sides(o)) parts.push_back(to_json_text(kneser_verdict(field, *lim, spec.kneser_order, s, {}, spec.margin)));
      emit(o, array_of(parts));
    } else if (budget->parsed()) {
      auto const gap = essential_gap(essential_pieces(field, spec.numerics.k_max));
      auto const eta = spec.eta ? spec.eta : default_eta(gap);
      if (!eta) throw ValidationError("--eta: the essential spectrum has no gap");
      emit(o, to_json_text(kappa_budget(field, *eta, spec.numerics, spec.allow_edge_eta)));
    } else if (eig->parsed()) {
      NumericsConfig cfg = spec.numerics;
      cfg.run_sweeps = false;
      SpectrumReport const s = build_spectrum_report(field, cfg);
      emit(o, o.format == "csv" ? eigenvalues_csv(s) : to_json_text(s));
    } else if (compare->parsed()) {
      auto const pert = spec.perturbed_field();
      if (!pert) throw ValidationError("perturbed: compare needs a perturbed coefficient triple");
      std::vector<std::string> parts;
      for (ComparisonMode m : spec.comparison_modes)
        parts.push_back(to_json_text(check_comparison_conditions(field, *pert, m)));
      parts.push_back(to_json_text(perturbation_transfer_check(field, *pert, o.n.value_or(spec.transfer_order))));
      emit(o, array_of(parts));
    }
  } catch (NumericalError const& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (Error const& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
