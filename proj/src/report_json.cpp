// JSON mapping of problem files and reports. Every reader carries the path
// of the value it is looking at, so errors point into the document.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

#include <json.hpp>

#include "indefsl/error.hpp"
#include "indefsl/report.hpp"

namespace indefsl {

using json = nlohmann::json;

namespace {

// ---- writing ----

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json nums(std::vector<double> const& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

template <class T>
json opt(std::optional<T> const& v) {
  return v ? to_j(*v) : json(nullptr);
}

// ---- reading ----

class Node {
 public:
  Node(json const& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(std::string const& msg) const {
    throw ValidationError((path_.empty() ? std::string("(root)") : path_) + ": " + msg);
  }

  json const& raw() const { return j_; }
  std::string const& path() const { return path_; }

  Node at(std::string const& key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) Node(j_, join(key)).fail("missing");
    return Node(*it, join(key));
  }
  bool has(std::string const& key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    return it != j_.end() && !it->is_null();
  }
  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  void only(std::initializer_list<char const*> keys) const {
    if (!j_.is_object()) fail("expected an object");
    for (auto const& [k, v] : j_.items())
      if (std::none_of(keys.begin(), keys.end(), [&](char const* s) { return k == s; }))
        Node(v, join(k)).fail("unknown field");
  }

  double number() const {
    if (j_.is_number()) return j_.get<double>();
    if (j_.is_string()) {
      auto const s = j_.get<std::string>();
      if (s == "inf") return std::numeric_limits<double>::infinity();
      if (s == "-inf") return -std::numeric_limits<double>::infinity();
      if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    fail("expected a number");
  }
  double finite() const {
    double const v = number();
    if (!std::isfinite(v)) fail("must be finite");
    return v;
  }
  std::size_t count() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0))
      fail("expected a nonnegative integer");
    return j_.get<std::size_t>();
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<double> numbers() const {
    std::vector<double> v(size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = at(i).number();
    return v;
  }
  template <class E>
  E enumerated(std::initializer_list<E> all) const {
    std::string const s = string();
    for (E e : all)
      if (s == to_string(e)) return e;
    std::string allowed;
    for (E e : all) allowed += std::string(allowed.empty() ? "" : ", ") + to_string(e);
    fail("unknown value \"" + s + "\" (expected one of " + allowed + ")");
  }

 private:
  std::string join(std::string const& key) const { return path_.empty() ? key : path_ + "." + key; }
  json const& j_;
  std::string path_;
};

template <class T, class F>
std::optional<T> maybe(Node const& n, std::string const& key, F read) {
  if (!n.has(key)) return std::nullopt;
  return read(n.at(key));
}

template <class T, class F>
std::vector<T> list(Node const& n, F read) {
  std::vector<T> v;
  for (std::size_t i = 0; i < n.size(); ++i) v.push_back(read(n.at(i)));
  return v;
}

constexpr auto kSides = {Side::plus, Side::minus};
constexpr auto kApproach = {Approach::below, Approach::above};
constexpr auto kAccum = {Accumulation::none, Accumulation::accumulating, Accumulation::unknown};
constexpr auto kPropP = {PropertyP::holds, PropertyP::fails, PropertyP::unknown};
constexpr auto kSweep = {SweepVerdict::accumulating, SweepVerdict::finite, SweepVerdict::inconclusive};
constexpr auto kOutcome = {KneserOutcome::accumulate, KneserOutcome::no_accumulate, KneserOutcome::inconclusive};
constexpr auto kCheck = {CheckStatus::pass, CheckStatus::fail, CheckStatus::assumed};
constexpr auto kModes = {ComparisonMode::limits, ComparisonMode::l1, ComparisonMode::first_moment};
constexpr auto kBounds = {BoundVariant::general_4n6k11, BoundVariant::gap_6k11, BoundVariant::alpha_eq_beta,
                          BoundVariant::alpha_eq_beta_gap};

}  // namespace

// ---- per-type mappings; to_j writes, from_j reads ----

json to_j(SignWindow const& w) { return {{"alpha", num(w.alpha)}, {"beta", num(w.beta)}}; }
SignWindow window_from(Node const& n) {
  n.only({"alpha", "beta"});
  SignWindow w{n.at("alpha").finite(), n.at("beta").finite()};
  if (w.alpha > w.beta) n.fail("alpha must not exceed beta");
  return w;
}

json to_j(EndpointMeta const& m) {
  if (auto const* l = std::get_if<SideLimits>(&m))
    return {{"kind", "limits"}, {"r", num(l->r)}, {"p", num(l->p)}, {"q", num(l->q)}};
  if (auto const* p = std::get_if<SidePeriod>(&m)) return {{"kind", "periodic"}, {"period", num(p->length)}};
  return {{"kind", "unknown"}};
}
EndpointMeta meta_from(Node const& n) {
  std::string const kind = n.at("kind").string();
  if (kind == "limits") {
    n.only({"kind", "r", "p", "q"});
    SideLimits l;
    l.r = n.at("r").finite();
    if (n.has("p")) l.p = n.at("p").finite();
    if (n.has("q")) l.q = n.at("q").finite();
    if (!(l.p > 0)) n.at("p").fail("limit of p must be positive");
    if (l.r == 0) n.at("r").fail("limit of r must be nonzero");
    return l;
  }
  if (kind == "periodic") {
    n.only({"kind", "period"});
    double const T = n.at("period").finite();
    if (!(T > 0)) n.at("period").fail("period must be positive");
    return SidePeriod{T};
  }
  if (kind == "unknown") {
    n.only({"kind"});
    return UnknownEndpoint{};
  }
  n.at("kind").fail("expected \"limits\", \"periodic\" or \"unknown\"");
}

json to_j(EndpointLimits const& l) {
  return {{"r_minus", num(l.r_minus)}, {"r_plus", num(l.r_plus)}, {"p_minus", num(l.p_minus)},
          {"p_plus", num(l.p_plus)},   {"q_minus", num(l.q_minus)}, {"q_plus", num(l.q_plus)}};
}
EndpointLimits limits_from(Node const& n) {
  return {n.at("r_minus").number(), n.at("r_plus").number(), n.at("p_minus").number(),
          n.at("p_plus").number(),  n.at("q_minus").number(), n.at("q_plus").number()};
}

json to_j(HypothesisCheck const& c) {
  return {{"status", to_string(c.status)}, {"witnesses", nums(c.witnesses)}, {"detail", c.detail}};
}
HypothesisCheck check_from(Node const& n) {
  return {n.at("status").enumerated(kCheck), n.at("witnesses").numbers(), n.at("detail").string()};
}

json to_j(HypothesisReport const& h) {
  return {{"h1_sign_window", to_j(h.h1_sign_window)},
          {"h2_limit_point", to_j(h.h2_limit_point)},
          {"h3_bounded_q_over_r", to_j(h.h3_bounded_q_over_r)},
          {"window", opt(h.window)},
          {"ok", h.ok()}};
}
HypothesisReport hypotheses_from(Node const& n) {
  HypothesisReport h;
  h.h1_sign_window = check_from(n.at("h1_sign_window"));
  h.h2_limit_point = check_from(n.at("h2_limit_point"));
  h.h3_bounded_q_over_r = check_from(n.at("h3_bounded_q_over_r"));
  h.window = maybe<SignWindow>(n, "window", window_from);
  return h;
}

json to_j(BandSet const& b) {
  json a = json::array();
  for (auto const& band : b.bands) a.push_back({num(band.lo), num(band.hi)});
  return a;
}
BandSet bands_from(Node const& n) {
  BandSet b;
  for (std::size_t i = 0; i < n.size(); ++i) {
    Node const e = n.at(i);
    if (e.size() != 2) e.fail("a band is [lo, hi]");
    b.bands.push_back({e.at(0).number(), e.at(1).number()});
  }
  return b;
}

json to_j(PeriodicBands const& p) {
  return {{"bands", to_j(p.bands)},         {"found", p.found},   {"partial", p.partial},
          {"reached_cap", p.reached_cap}, {"cap_lo", num(p.cap_lo)}, {"cap_hi", num(p.cap_hi)}};
}
PeriodicBands periodic_from(Node const& n) {
  PeriodicBands p;
  p.bands = bands_from(n.at("bands"));
  p.found = n.at("found").count();
  p.partial = n.at("partial").boolean();
  p.reached_cap = n.at("reached_cap").boolean();
  p.cap_lo = n.at("cap_lo").number();
  p.cap_hi = n.at("cap_hi").number();
  return p;
}

json to_j(LevelSpectrum const& l) {
  json pairs = json::array();
  for (auto const& z : l.pairs) pairs.push_back({num(z.real()), num(z.imag())});
  return {{"truncation", num(l.truncation)},
          {"order", l.order},
          {"real", nums(l.real)},
          {"pairs", pairs},
          {"real_residuals", nums(l.real_residuals)},
          {"pair_residuals", nums(l.pair_residuals)},
          {"max_residual", num(l.max_residual)},
          {"max_cluster", l.max_cluster},
          {"im_tol", num(l.im_tol)}};
}
LevelSpectrum level_from(Node const& n) {
  LevelSpectrum l;
  l.truncation = n.at("truncation").number();
  l.order = n.at("order").count();
  l.real = n.at("real").numbers();
  l.pairs = list<std::complex<double>>(n.at("pairs"), [](Node const& e) {
    if (e.size() != 2) e.fail("a nonreal eigenvalue is [re, im]");
    return std::complex<double>(e.at(0).number(), e.at(1).number());
  });
  l.real_residuals = n.at("real_residuals").numbers();
  l.pair_residuals = n.at("pair_residuals").numbers();
  l.max_residual = n.at("max_residual").number();
  l.max_cluster = n.at("max_cluster").count();
  l.im_tol = n.at("im_tol").number();
  return l;
}

json to_j(EdgeClassification const& e) {
  return {{"location", num(e.location)},         {"status", to_string(e.status)},
          {"case_a", to_string(e.case_a)},       {"case_b", to_string(e.case_b)},
          {"plus_below", to_string(e.plus_below)}, {"minus_above", to_string(e.minus_above)},
          {"minus_below", to_string(e.minus_below)}, {"plus_above", to_string(e.plus_above)}};
}
EdgeClassification edge_from(Node const& n) {
  EdgeClassification e;
  e.location = n.at("location").number();
  e.status = n.at("status").enumerated(kPropP);
  e.case_a = n.at("case_a").enumerated(kPropP);
  e.case_b = n.at("case_b").enumerated(kPropP);
  e.plus_below = n.at("plus_below").enumerated(kAccum);
  e.minus_above = n.at("minus_above").enumerated(kAccum);
  e.minus_below = n.at("minus_below").enumerated(kAccum);
  e.plus_above = n.at("plus_above").enumerated(kAccum);
  return e;
}

json to_j(AccumulationEvidence const& a) {
  return {{"op", to_string(a.op)},         {"edge", num(a.edge)},     {"approach", to_string(a.approach)},
          {"delta", num(a.delta)},         {"levels", nums(a.levels)}, {"counts", a.counts},
          {"verdict", to_string(a.verdict)}, {"grid_edge", num(a.grid_edge)}};
}
AccumulationEvidence evidence_from(Node const& n) {
  AccumulationEvidence a;
  a.op = n.at("op").enumerated(kSides);
  a.edge = n.at("edge").number();
  a.approach = n.at("approach").enumerated(kApproach);
  a.delta = n.at("delta").number();
  a.levels = n.at("levels").numbers();
  a.counts = list<std::size_t>(n.at("counts"), [](Node const& e) { return e.count(); });
  a.verdict = n.at("verdict").enumerated(kSweep);
  a.grid_edge = n.at("grid_edge").number();
  return a;
}

json to_j(SpectrumReport const& s) {
  json levels = json::array(), edges = json::array(), acc = json::array();
  for (auto const& l : s.levels) levels.push_back(to_j(l));
  for (auto const& e : s.edges) edges.push_back(to_j(e));
  for (auto const& a : s.accumulation) acc.push_back(to_j(a));
  return {{"regime", s.regime},
          {"essential", opt(s.essential)},
          {"essential_plus", opt(s.essential_plus)},
          {"essential_minus", opt(s.essential_minus)},
          {"periodic_plus", opt(s.periodic_plus)},
          {"periodic_minus", opt(s.periodic_minus)},
          {"limits", opt(s.limits)},
          {"window", to_j(s.window)},
          {"levels", levels},
          {"containment", num(s.containment)},
          {"edges", edges},
          {"accumulation", acc},
          {"notes", s.notes}};
}
SpectrumReport spectrum_from(Node const& n) {
  SpectrumReport s;
  s.regime = n.at("regime").string();
  s.essential = maybe<BandSet>(n, "essential", bands_from);
  s.essential_plus = maybe<BandSet>(n, "essential_plus", bands_from);
  s.essential_minus = maybe<BandSet>(n, "essential_minus", bands_from);
  s.periodic_plus = maybe<PeriodicBands>(n, "periodic_plus", periodic_from);
  s.periodic_minus = maybe<PeriodicBands>(n, "periodic_minus", periodic_from);
  s.limits = maybe<EndpointLimits>(n, "limits", limits_from);
  s.window = window_from(n.at("window"));
  s.levels = list<LevelSpectrum>(n.at("levels"), level_from);
  s.containment = n.at("containment").number();
  s.edges = list<EdgeClassification>(n.at("edges"), edge_from);
  s.accumulation = list<AccumulationEvidence>(n.at("accumulation"), evidence_from);
  s.notes = list<std::string>(n.at("notes"), [](Node const& e) { return e.string(); });
  return s;
}

json to_j(KneserVerdict const& v) {
  return {{"side", to_string(v.side)}, {"n", v.n},
          {"edge", num(v.edge)},       {"limsup", num(v.limsup)},
          {"liminf", num(v.liminf)},   {"statistic", num(v.statistic)},
          {"drift", num(v.drift)},     {"settled", v.settled},
          {"verdict", to_string(v.verdict)}, {"margin", num(v.margin)}};
}
KneserVerdict verdict_from(Node const& n) {
  KneserVerdict v;
  v.side = n.at("side").enumerated(kSides);
  v.n = n.at("n").integer();
  v.edge = n.at("edge").number();
  v.limsup = n.at("limsup").number();
  v.liminf = n.at("liminf").number();
  v.statistic = n.at("statistic").number();
  v.drift = n.at("drift").number();
  v.settled = n.at("settled").boolean();
  v.verdict = n.at("verdict").enumerated(kOutcome);
  v.margin = n.at("margin").number();
  return v;
}

json to_j(KneserLink const& k) {
  return {{"verdict", to_j(k.verdict)}, {"sweep", opt(k.sweep)}, {"agreement", k.agreement}};
}
KneserLink link_from(Node const& n) {
  return {verdict_from(n.at("verdict")), maybe<AccumulationEvidence>(n, "sweep", evidence_from),
          n.at("agreement").string()};
}

json to_j(NegativeSquaresBudget const& b) {
  json levels = json::array();
  for (auto const& l : b.levels)
    levels.push_back({{"truncation", num(l.truncation)},
                      {"kappa_plus", l.kappa_plus},
                      {"kappa_minus", l.kappa_minus},
                      {"kappa_eta", l.kappa_eta}});
  return {{"eta", num(b.eta)},
          {"gap", {num(b.gap.lo), num(b.gap.hi)}},
          {"eta_at_edge", b.eta_at_edge},
          {"kappa_plus", b.kappa_plus},
          {"kappa_minus", b.kappa_minus},
          {"kappa_eta", b.kappa_eta},
          {"kappa", b.kappa},
          {"kappa0", b.kappa0},
          {"available", b.available},
          {"reason", b.reason},
          {"levels", levels}};
}
NegativeSquaresBudget budget_from(Node const& n) {
  NegativeSquaresBudget b;
  b.eta = n.at("eta").number();
  Node const g = n.at("gap");
  if (g.size() != 2) g.fail("gap is [lo, hi]");
  b.gap = {g.at(0).number(), g.at(1).number()};
  b.eta_at_edge = n.at("eta_at_edge").boolean();
  b.kappa_plus = n.at("kappa_plus").count();
  b.kappa_minus = n.at("kappa_minus").count();
  b.kappa_eta = n.at("kappa_eta").count();
  b.kappa = n.at("kappa").count();
  b.kappa0 = n.at("kappa0").count();
  b.available = n.at("available").boolean();
  b.reason = n.at("reason").string();
  b.levels = list<BudgetLevel>(n.at("levels"), [](Node const& e) {
    return BudgetLevel{e.at("truncation").number(), e.at("kappa_plus").count(), e.at("kappa_minus").count(),
                       e.at("kappa_eta").count()};
  });
  return b;
}

json to_j(PairBoundCheck const& p) {
  return {{"pass", p.pass},
          {"kappa0", p.kappa0},
          {"max_pairs", p.max_pairs},
          {"offending_truncation", p.offending_truncation ? num(*p.offending_truncation) : json(nullptr)},
          {"detail", p.detail}};
}
PairBoundCheck pair_bound_from(Node const& n) {
  PairBoundCheck p;
  p.pass = n.at("pass").boolean();
  p.kappa0 = n.at("kappa0").count();
  p.max_pairs = n.at("max_pairs").count();
  p.offending_truncation = maybe<double>(n, "offending_truncation", [](Node const& e) { return e.number(); });
  p.detail = n.at("detail").string();
  return p;
}

json to_j(CountEstimate const& c) {
  json levels = json::array();
  for (auto const& l : c.levels)
    levels.push_back(
        {{"truncation", num(l.truncation)}, {"n_H0", l.n_H0}, {"n_K0", l.n_K0}, {"bound", l.bound}});
  return {{"interval", {num(c.interval.lo), num(c.interval.hi)}},
          {"n_H0", c.n_H0},
          {"n_K0", c.n_K0},
          {"kappa", c.kappa},
          {"variant", to_string(c.variant)},
          {"bound", c.bound},
          {"pass", c.pass},
          {"levels", levels}};
}
CountEstimate counts_from(Node const& n) {
  CountEstimate c;
  Node const I = n.at("interval");
  if (I.size() != 2) I.fail("interval is [lo, hi]");
  c.interval = {I.at(0).number(), I.at(1).number()};
  c.n_H0 = n.at("n_H0").count();
  c.n_K0 = n.at("n_K0").count();
  c.kappa = n.at("kappa").count();
  c.variant = n.at("variant").enumerated(kBounds);
  c.bound = n.at("bound").count();
  c.pass = n.at("pass").boolean();
  c.levels = list<CountLevel>(n.at("levels"), [](Node const& e) {
    return CountLevel{e.at("truncation").number(), e.at("n_H0").count(), e.at("n_K0").count(),
                      e.at("bound").count()};
  });
  return c;
}

json to_j(StructuralCheck const& s) {
  return {{"truncation", num(s.truncation)},
          {"order", s.order},
          {"resolvent_rank", s.resolvent_rank},
          {"rank_bound", s.rank_bound},
          {"singular_values", nums(s.singular_values)},
          {"eta", num(s.eta)},
          {"n_minus_full", s.n_minus_full},
          {"n_minus_block", s.n_minus_block},
          {"perturbation_rank", s.perturbation_rank},
          {"pass", s.pass}};
}
StructuralCheck structural_from(Node const& n) {
  StructuralCheck s;
  s.truncation = n.at("truncation").number();
  s.order = n.at("order").count();
  s.resolvent_rank = n.at("resolvent_rank").count();
  s.rank_bound = n.at("rank_bound").count();
  s.singular_values = n.at("singular_values").numbers();
  s.eta = n.at("eta").number();
  s.n_minus_full = n.at("n_minus_full").count();
  s.n_minus_block = n.at("n_minus_block").count();
  s.perturbation_rank = n.at("perturbation_rank").count();
  s.pass = n.at("pass").boolean();
  return s;
}

json to_j(ComparisonReport const& c) {
  return {{"mode", to_string(c.mode)}, {"pass", c.pass}, {"value", num(c.value)}, {"reason", c.reason}};
}
ComparisonReport comparison_from(Node const& n) {
  return {n.at("mode").enumerated(kModes), n.at("pass").boolean(), n.at("value").number(),
          n.at("reason").string()};
}

json to_j(TransferCheck const& t) {
  return {{"n", t.n},
          {"pass", t.pass},
          {"tail_plus", num(t.tail_plus)},
          {"tail_minus", num(t.tail_minus)},
          {"p_tail", num(t.p_tail)},
          {"tol", num(t.tol)},
          {"reason", t.reason}};
}
TransferCheck transfer_from(Node const& n) {
  TransferCheck t;
  t.n = n.at("n").integer();
  t.pass = n.at("pass").boolean();
  t.tail_plus = n.at("tail_plus").number();
  t.tail_minus = n.at("tail_minus").number();
  t.p_tail = n.at("p_tail").number();
  t.tol = n.at("tol").number();
  t.reason = n.at("reason").string();
  return t;
}

json to_j(PerturbationReport const& p) {
  json comps = json::array(), base = json::array(), pert = json::array();
  for (auto const& c : p.comparisons) comps.push_back(to_j(c));
  for (auto const& v : p.base_verdicts) base.push_back(to_j(v));
  for (auto const& v : p.perturbed_verdicts) pert.push_back(to_j(v));
  return {{"comparisons", comps},
          {"transfer", opt(p.transfer)},
          {"base_verdicts", base},
          {"perturbed_verdicts", pert},
          {"verdicts_identical", p.verdicts_identical ? json(*p.verdicts_identical) : json(nullptr)},
          {"spectrum", opt(p.spectrum)}};
}
PerturbationReport perturbation_from(Node const& n) {
  PerturbationReport p;
  p.comparisons = list<ComparisonReport>(n.at("comparisons"), comparison_from);
  p.transfer = maybe<TransferCheck>(n, "transfer", transfer_from);
  p.base_verdicts = list<KneserVerdict>(n.at("base_verdicts"), verdict_from);
  p.perturbed_verdicts = list<KneserVerdict>(n.at("perturbed_verdicts"), verdict_from);
  p.verdicts_identical = maybe<bool>(n, "verdicts_identical", [](Node const& e) { return e.boolean(); });
  p.spectrum = maybe<SpectrumReport>(n, "spectrum", spectrum_from);
  return p;
}

// ---- problem files ----

json to_j(CoefficientSources const& c) { return {{"r", c.r}, {"p", c.p}, {"q", c.q}}; }
CoefficientSources sources_from(Node const& n) {
  n.only({"r", "p", "q"});
  CoefficientSources c;
  c.r = n.at("r").string();
  if (n.has("p")) c.p = n.at("p").string();
  if (n.has("q")) c.q = n.at("q").string();
  return c;
}

json to_j(ProblemSpec const& s) {
  json modes = json::array();
  for (auto m : s.comparison_modes) modes.push_back(to_string(m));
  NumericsConfig const& c = s.numerics;
  json numerics = {{"truncations", nums(c.truncations)},
                   {"density", num(c.density)},
                   {"sweep_levels", nums(c.sweep_levels)},
                   {"k_max", c.k_max},
                   {"im_tol", num(c.im_tol)},
                   {"run_sweeps", c.run_sweeps},
                   {"override_hypotheses", c.override_hypotheses},
                   {"eta", s.eta ? num(*s.eta) : json(nullptr)},
                   {"allow_edge_eta", s.allow_edge_eta},
                   {"kneser_order", s.kneser_order},
                   {"transfer_order", s.transfer_order},
                   {"margin", num(s.margin)},
                   {"count_interval", s.count_interval ? json{num(s.count_interval->lo), num(s.count_interval->hi)}
                                                       : json(nullptr)},
                   {"structural_truncation", num(s.structural_truncation)},
                   {"comparison_modes", modes}};
  Sections const& x = s.sections;
  return {{"schema_version", kSchemaVersion},
          {"name", s.name},
          {"coefficients", to_j(s.base)},
          {"perturbed", opt(s.perturbed)},
          {"interval", {{"a", num(s.a)}, {"b", num(s.b)}}},
          {"sign_window", opt(s.sign_window)},
          {"endpoints", {{"minus", to_j(s.at_a)}, {"plus", to_j(s.at_b)}}},
          {"numerics", numerics},
          {"sections",
           {{"spectrum", x.spectrum},
            {"kneser", x.kneser},
            {"budget", x.budget},
            {"counts", x.counts},
            {"structural", x.structural},
            {"perturbation", x.perturbation}}}};
}

namespace {

void check_increasing(Node const& n, std::vector<double> const& v, std::size_t min_size) {
  if (v.size() < min_size) n.fail("needs at least " + std::to_string(min_size) + " levels");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(std::isfinite(v[i]) && v[i] > 0)) n.at(i).fail("must be positive and finite");
    if (i > 0 && !(v[i] > v[i - 1])) n.at(i).fail("levels must be strictly increasing");
  }
}

}  // namespace

ProblemSpec problem_from(Node const& n) {
  n.only({"schema_version", "name", "coefficients", "perturbed", "interval", "sign_window", "endpoints",
          "numerics", "sections"});
  if (n.has("schema_version") && n.at("schema_version").integer() != kSchemaVersion)
    n.at("schema_version").fail("unsupported schema version");
  ProblemSpec s;
  s.name = n.at("name").string();
  s.base = sources_from(n.at("coefficients"));
  s.perturbed = maybe<CoefficientSources>(n, "perturbed", sources_from);
  if (n.has("interval")) {
    Node const i = n.at("interval");
    i.only({"a", "b"});
    if (i.has("a")) s.a = i.at("a").number();
    if (i.has("b")) s.b = i.at("b").number();
    if (!(s.a < s.b)) i.fail("needs a < b");
  }
  s.sign_window = maybe<SignWindow>(n, "sign_window", window_from);
  if (n.has("endpoints")) {
    Node const e = n.at("endpoints");
    e.only({"minus", "plus"});
    if (e.has("minus")) s.at_a = meta_from(e.at("minus"));
    if (e.has("plus")) s.at_b = meta_from(e.at("plus"));
  }
  if (n.has("numerics")) {
    Node const c = n.at("numerics");
    c.only({"truncations", "density", "sweep_levels", "k_max", "im_tol", "run_sweeps", "override_hypotheses",
            "eta", "allow_edge_eta", "kneser_order", "transfer_order", "margin", "count_interval",
            "structural_truncation", "comparison_modes"});
    NumericsConfig& cfg = s.numerics;
    if (c.has("truncations")) cfg.truncations = c.at("truncations").numbers();
    if (c.has("density")) cfg.density = c.at("density").finite();
    if (c.has("sweep_levels")) cfg.sweep_levels = c.at("sweep_levels").numbers();
    if (c.has("k_max")) cfg.k_max = c.at("k_max").integer();
    if (c.has("im_tol")) cfg.im_tol = c.at("im_tol").finite();
    if (c.has("run_sweeps")) cfg.run_sweeps = c.at("run_sweeps").boolean();
    if (c.has("override_hypotheses")) cfg.override_hypotheses = c.at("override_hypotheses").boolean();
    if (c.has("eta")) s.eta = c.at("eta").finite();
    if (c.has("allow_edge_eta")) s.allow_edge_eta = c.at("allow_edge_eta").boolean();
    if (c.has("kneser_order")) s.kneser_order = c.at("kneser_order").integer();
    if (c.has("transfer_order")) s.transfer_order = c.at("transfer_order").integer();
    if (c.has("margin")) s.margin = c.at("margin").finite();
    if (c.has("count_interval")) {
      Node const I = c.at("count_interval");
      if (I.size() != 2) I.fail("count interval is [lo, hi]");
      s.count_interval = Interval{I.at(0).finite(), I.at(1).finite()};
      if (!(s.count_interval->lo < s.count_interval->hi)) I.fail("needs lo < hi");
    }
    if (c.has("structural_truncation")) s.structural_truncation = c.at("structural_truncation").finite();
    if (c.has("comparison_modes"))
      s.comparison_modes =
          list<ComparisonMode>(c.at("comparison_modes"), [](Node const& e) { return e.enumerated(kModes); });

    if (c.has("truncations")) check_increasing(c.at("truncations"), cfg.truncations, 1);
    if (c.has("sweep_levels")) check_increasing(c.at("sweep_levels"), cfg.sweep_levels, cfg.run_sweeps ? 3 : 0);
    if (!(cfg.density >= 1.0)) c.at("density").fail("must be at least 1 node per unit length");
    if (cfg.k_max < 1) c.at("k_max").fail("must be at least 1");
    if (!(cfg.im_tol > 0.0)) c.at("im_tol").fail("must be positive");
    if (s.kneser_order < 0 || s.kneser_order > 4) c.at("kneser_order").fail("must be in [0, 4]");
    if (s.transfer_order < 0 || s.transfer_order > 4) c.at("transfer_order").fail("must be in [0, 4]");
    if (!(s.margin >= 0.0)) c.at("margin").fail("must be nonnegative");
    if (!(s.structural_truncation > 0.0)) c.at("structural_truncation").fail("must be positive");
  }
  if (n.has("sections")) {
    Node const x = n.at("sections");
    x.only({"spectrum", "kneser", "budget", "counts", "structural", "perturbation"});
    auto flag = [&](char const* key, bool& out) {
      if (x.has(key)) out = x.at(key).boolean();
    };
    flag("spectrum", s.sections.spectrum);
    flag("kneser", s.sections.kneser);
    flag("budget", s.sections.budget);
    flag("counts", s.sections.counts);
    flag("structural", s.sections.structural);
    flag("perturbation", s.sections.perturbation);
  }
  // expressions are checked here so that the path is part of the message
  s.field();
  s.perturbed_field();
  return s;
}

ProblemSpec parse_problem(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (json::parse_error const& e) {
    throw ValidationError(std::string("(root): malformed JSON: ") + e.what());
  }
  return problem_from(Node(j, ""));
}

std::string problem_to_json(ProblemSpec const& spec) { return to_j(spec).dump(2) + "\n"; }

namespace {

Expr expression(std::string const& src, std::string const& path) {
  try {
    return parse_expression(src);
  } catch (ValidationError const& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

CoefficientField make_field(ProblemSpec const& s, CoefficientSources const& c, std::string const& where) {
  CoefficientField f;
  f.r = expression(c.r, where + ".r");
  f.p = expression(c.p, where + ".p");
  f.q = expression(c.q, where + ".q");
  f.a = s.a;
  f.b = s.b;
  f.sign_window = s.sign_window;
  f.at_a = s.at_a;
  f.at_b = s.at_b;
  return f;
}

}  // namespace

CoefficientField ProblemSpec::field() const { return make_field(*this, base, "coefficients"); }

std::optional<CoefficientField> ProblemSpec::perturbed_field() const {
  if (!perturbed) return std::nullopt;
  return make_field(*this, *perturbed, "perturbed");
}

// ---- reports ----

json to_j(SectionIssue const& i) { return {{"section", i.section}, {"kind", i.kind}, {"message", i.message}}; }

json to_j(AnalysisReport const& r) {
  json kneser = json::array(), issues = json::array();
  for (auto const& k : r.kneser) kneser.push_back(to_j(k));
  for (auto const& i : r.issues) issues.push_back(to_j(i));
  return {{"schema_version", r.schema_version},
          {"tool_version", r.tool_version},
          {"name", r.name},
          {"config", opt(r.config)},
          {"hypotheses", opt(r.hypotheses)},
          {"spectrum", opt(r.spectrum)},
          {"kneser", kneser},
          {"budget", opt(r.budget)},
          {"pair_bound", opt(r.pair_bound)},
          {"counts", opt(r.counts)},
          {"structural", opt(r.structural)},
          {"perturbation", opt(r.perturbation)},
          {"issues", issues}};
}

AnalysisReport report_from(Node const& n) {
  AnalysisReport r;
  r.schema_version = n.at("schema_version").integer();
  if (r.schema_version != kSchemaVersion) n.at("schema_version").fail("unsupported schema version");
  r.tool_version = n.at("tool_version").string();
  r.name = n.at("name").string();
  r.config = maybe<ProblemSpec>(n, "config", problem_from);
  r.hypotheses = maybe<HypothesisReport>(n, "hypotheses", hypotheses_from);
  r.spectrum = maybe<SpectrumReport>(n, "spectrum", spectrum_from);
  r.kneser = list<KneserLink>(n.at("kneser"), link_from);
  r.budget = maybe<NegativeSquaresBudget>(n, "budget", budget_from);
  r.pair_bound = maybe<PairBoundCheck>(n, "pair_bound", pair_bound_from);
  r.counts = maybe<CountEstimate>(n, "counts", counts_from);
  r.structural = maybe<StructuralCheck>(n, "structural", structural_from);
  r.perturbation = maybe<PerturbationReport>(n, "perturbation", perturbation_from);
  r.issues = list<SectionIssue>(n.at("issues"), [](Node const& e) {
    return SectionIssue{e.at("section").string(), e.at("kind").string(), e.at("message").string()};
  });
  return r;
}

std::string report_json_text(AnalysisReport const& r) { return to_j(r).dump(2) + "\n"; }

AnalysisReport deserialize_report(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (json::parse_error const& e) {
    throw ValidationError(std::string("(root): malformed JSON: ") + e.what());
  }
  return report_from(Node(j, ""));
}

std::string to_json_text(SpectrumReport const& s) { return to_j(s).dump(2) + "\n"; }
std::string to_json_text(PeriodicBands const& b) { return to_j(b).dump(2) + "\n"; }
std::string to_json_text(EssentialPieces const& e) {
  json gap = nullptr;
  if (e.plus && e.minus && !e.plus->empty() && !e.minus->empty()) {
    EssentialGap const g = essential_gap(e);
    gap = {num(g.lo), num(g.hi)};
  }
  std::optional<BandSet> all;
  if (e.plus && e.minus) all = essential_union(*e.plus, *e.minus);
  json j = {{"regime", e.regime},      {"essential", opt(all)},
            {"essential_plus", opt(e.plus)}, {"essential_minus", opt(e.minus)},
            {"periodic_plus", opt(e.periodic_plus)}, {"periodic_minus", opt(e.periodic_minus)},
            {"limits", opt(e.limits)}, {"gap", gap}};
  return j.dump(2) + "\n";
}
std::string to_json_text(KneserVerdict const& v) { return to_j(v).dump(2) + "\n"; }
std::string to_json_text(NegativeSquaresBudget const& b) { return to_j(b).dump(2) + "\n"; }
std::string to_json_text(ComparisonReport const& c) { return to_j(c).dump(2) + "\n"; }
std::string to_json_text(TransferCheck const& t) { return to_j(t).dump(2) + "\n"; }

}  // namespace indefsl
