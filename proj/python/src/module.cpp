#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "indefsl/assembly.hpp"
#include "indefsl/budgets.hpp"
#include "indefsl/eigen_core.hpp"
#include "indefsl/error.hpp"
#include "indefsl/kneser.hpp"
#include "indefsl/report.hpp"
#include "indefsl/spectra.hpp"

namespace py = pybind11;
using namespace indefsl;

namespace {

SymTridiag tridiag(std::vector<double> diag, std::vector<double> off) {
  if (off.size() + 1 != diag.size() && !(diag.empty() && off.empty()))
    throw ValidationError("off-diagonal needs len(diag) - 1 entries");
  return {std::move(diag), std::move(off)};
}

template <class T>
py::array_t<T> array(std::vector<T> const& v) {
  // explicit strides: the count-only constructor hands back a zero stride here
  py::array_t<T> a({static_cast<py::ssize_t>(v.size())}, {static_cast<py::ssize_t>(sizeof(T))});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

Side side_of(std::string const& s) {
  if (s == "plus") return Side::plus;
  if (s == "minus") return Side::minus;
  throw ValidationError("side must be 'plus' or 'minus'");
}

}  // namespace

PYBIND11_MODULE(_indefsl, m) {
  m.doc() = "Spectral analysis of indefinite Sturm-Liouville operators (native core)";

  // the translators catch by reference, so ParseError lands on ValidationError
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("version", [] { return std::string(version()); });
  m.attr("schema_version") = kSchemaVersion;

  m.def(
      "analyze_json", [](std::string const& problem) { return serialize_report(run_pipeline(parse_problem(problem))); },
      py::arg("problem"), py::call_guard<py::gil_scoped_release>(), "Problem JSON in, report JSON out.");
  m.def(
      "normalize_problem_json", [](std::string const& problem) { return problem_to_json(parse_problem(problem)); },
      py::arg("problem"), "Validated problem with every default filled in.");
  m.def(
      "eigenvalues_csv", [](std::string const& report) {
        auto const r = deserialize_report(report);
        if (!r.spectrum) throw ValidationError("report has no spectrum section");
        return eigenvalues_csv(*r.spectrum);
      },
      py::arg("report"));
  m.def(
      "essential_json", [](std::string const& problem) {
        auto const spec = parse_problem(problem);
        return to_json_text(essential_pieces(spec.field(), spec.numerics.k_max));
      },
      py::arg("problem"));
  m.def(
      "kneser_json",
      [](std::string const& problem, int n, std::string const& side, double margin) {
        auto const spec = parse_problem(problem);
        auto const field = spec.field();
        auto const lim = resolve_limits(field);
        if (!lim) throw ValidationError("Kneser test needs limits of the coefficients at both ends");
        return to_json_text(kneser_verdict(field, *lim, n, side_of(side), {}, margin));
      },
      py::arg("problem"), py::arg("n") = 0, py::arg("side") = "plus", py::arg("margin") = 0.02);

  m.def(
      "indefinite_eigs",
      [](std::vector<double> diag, std::vector<double> off, std::vector<double> const& R, double im_tol) {
        auto const s = indefinite_eigs(tridiag(std::move(diag), std::move(off)), R, im_tol);
        return py::make_tuple(array(s.real), array(s.pairs));
      },
      py::arg("diag"), py::arg("off"), py::arg("weights"), py::arg("im_tol") = 1e-8,
      "Real eigenvalues and one member (Im > 0) of each conjugate pair of R^{-1} T.");
  m.def(
      "sym_tridiag_eigs",
      [](std::vector<double> diag, std::vector<double> off, std::vector<double> const& R, std::optional<double> lo,
         std::optional<double> hi) {
        std::optional<Interval> w;
        if (lo || hi)
          w = Interval{lo.value_or(-std::numeric_limits<double>::infinity()),
                       hi.value_or(std::numeric_limits<double>::infinity())};
        return array(sym_tridiag_eigs(tridiag(std::move(diag), std::move(off)), R, w));
      },
      py::arg("diag"), py::arg("off"), py::arg("weights"), py::arg("lo") = py::none(), py::arg("hi") = py::none());
  m.def(
      "inertia",
      [](std::vector<double> diag, std::vector<double> off, double shift, std::vector<double> const& R) {
        auto const in = inertia_count(tridiag(std::move(diag), std::move(off)), shift, R);
        return py::make_tuple(in.n_minus, in.n_zero, in.n_plus);
      },
      py::arg("diag"), py::arg("off"), py::arg("shift"), py::arg("weights"),
      "(n_minus, n_zero, n_plus) of T - shift * R.");
  m.def(
      "count_in_interval",
      [](std::vector<double> diag, std::vector<double> off, std::vector<double> const& R, double lo, double hi) {
        return count_in_interval(tridiag(std::move(diag), std::move(off)), R, {lo, hi});
      },
      py::arg("diag"), py::arg("off"), py::arg("weights"), py::arg("lo"), py::arg("hi"));
}
