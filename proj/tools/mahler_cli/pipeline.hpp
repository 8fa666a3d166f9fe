#ifndef MAHLER_CLI_PIPELINE_HPP
#define MAHLER_CLI_PIPELINE_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mahler_cli/problem.hpp"

namespace mahler::cli {

enum class Command { SOLVE, ORBIT, CHECK, EVAL, BOUNDS, PROBE, FULL };

inline std::optional<Command> parse_command(const std::string& s) {
  if (s == "solve") return Command::SOLVE;
  if (s == "orbit") return Command::ORBIT;
  if (s == "check") return Command::CHECK;
  if (s == "eval") return Command::EVAL;
  if (s == "bounds") return Command::BOUNDS;
  if (s == "probe") return Command::PROBE;
  if (s == "full") return Command::FULL;
  return std::nullopt;
}

inline const char* to_string(Command c) {
  switch (c) {
    case Command::SOLVE: return "solve";
    case Command::ORBIT: return "orbit";
    case Command::CHECK: return "check";
    case Command::EVAL: return "eval";
    case Command::BOUNDS: return "bounds";
    case Command::PROBE: return "probe";
    case Command::FULL: return "full";
  }
  return "?";
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitHypothesis = 2;

struct RunResult {
  json report;
  std::string text;  // human-readable summary
  int exit_code = kExitOk;
};

namespace detail {

inline constexpr std::size_t kShownCoefficients = 16;
inline constexpr std::size_t kExactDisplayBits = 256;

// Significant digits worth printing: a few past the radius, at most the precision.
inline int decimal_digits(const Ball& b) {
  const int cap = std::max(20, static_cast<int>(b.precision() * 0.30103));
  if (b.is_exact() || !b.is_finite() || b.mid().is_zero()) return cap;
  long gap = mpfr_get_exp(b.mid().get()) - mpfr_get_exp(b.rad().get());
  return std::clamp(static_cast<int>(gap * 0.30103) + 3, 20, cap);
}

inline json ball_json(const Ball& b) { return {{"mid", b.mid_string(decimal_digits(b))}, {"rad", b.rad_string(6)}}; }

// upper bound as a decimal string, rounded up
inline std::string upper_string(const Real& r) {
  if (!r.is_finite()) return r.to_decimal();
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.11RUe", r.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

inline json iterate_json(const Iterate& w) {
  if (w.exact && mpz_sizeinbase(w.exact->get_num_mpz_t(), 2) + mpz_sizeinbase(w.exact->get_den_mpz_t(), 2) <=
                     kExactDisplayBits)
    return {{"exact", w.exact->get_str()}};
  return ball_json(w.ball);
}

inline json optional_rational(const std::optional<Rational>& q) { return q ? json(q->get_str()) : json(nullptr); }

inline std::vector<Theorem> theorems(const Options& o) {
  if (!o.theorem) return {Theorem::T1, Theorem::T2, Theorem::T3};
  return {static_cast<Theorem>(*o.theorem - 1)};
}

inline const char* theorem_name(Theorem t) {
  switch (t) {
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    case Theorem::T3: return "T3";
  }
  return "?";
}

inline Rational pow2(long e) {
  Rational q = 1;
  if (e >= 0) mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return q;
}

}  // namespace detail

/// Runs the stages of one subcommand. Each stage records a status:
/// "ok", "failed" (a hypothesis does not hold or could not be certified),
/// "input_error", or "skipped" (a stage it depends on did not succeed).
class Pipeline {
 public:
  Pipeline(Problem pr, bool timing) : pr_(std::move(pr)), timing_(timing) {}

  RunResult run(Command cmd) {
    report_ = json::object();
    report_["command"] = to_string(cmd);
    report_["problem"] = problem_to_json(pr_);
    report_["stages"] = json::array();
    text_.str("");
    exit_ = kExitOk;
    const bool full = cmd == Command::FULL;
    if (full || cmd == Command::SOLVE) stage("solve", [this](json& o) { solve(o); });
    if (cmd != Command::SOLVE && cmd != Command::BOUNDS) {
      stage("orbit", [this](json& o) { orbit(o); });
      if (cmd != Command::ORBIT) stage("hypotheses", [this](json& o) { hypotheses(o); }, {"orbit"});
    }
    if (full || cmd == Command::CHECK) stage("independence", [this](json& o) { independence(o); });
    if (full || cmd == Command::EVAL || cmd == Command::PROBE)
      stage("evaluate", [this](json& o) { evaluate(o); }, {"orbit"});
    if (full || cmd == Command::BOUNDS) stage("bounds", [this](json& o) { bounds(o); });
    if (full || cmd == Command::PROBE) stage("probe", [this](json& o) { probe(o); }, {"orbit", "evaluate"});
    report_["exit_code"] = exit_;
    return {report_, text_.str(), exit_};
  }

 private:
  Problem pr_;
  bool timing_;
  json report_;
  std::ostringstream text_;
  int exit_ = kExitOk;
  std::vector<std::string> succeeded_;

  std::optional<OrbitCertificate> orbit_;
  std::optional<Evaluation> eval_;

  void stage(const std::string& name, const std::function<void(json&)>& body,
             const std::vector<std::string>& deps = {}) {
    json rec{{"name", name}};
    for (const auto& d : deps)
      if (std::find(succeeded_.begin(), succeeded_.end(), d) == succeeded_.end()) {
        rec["status"] = "skipped";
        rec["message"] = "needs stage '" + d + "'";
        report_["stages"].push_back(rec);
        text_ << "[" << name << "] skipped: needs " << d << "\n";
        return;
      }
    json out = json::object();
    auto t0 = std::chrono::steady_clock::now();
    std::string status = "ok", message;
    try {
      body(out);
      if (out.contains("_failure")) {
        status = "failed";
        message = out["_failure"].get<std::string>();
        out.erase("_failure");
      }
    } catch (const InvalidArgument& e) {
      status = "input_error";
      message = std::string(e.kind()) + ": " + e.what();
    } catch (const InputError& e) {
      status = "input_error";
      message = e.what();
    } catch (const mahler::error& e) {
      status = "failed";
      message = std::string(e.kind()) + ": " + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec["status"] = status;
    if (!message.empty()) rec["message"] = message;
    if (timing_) rec["seconds"] = secs;
    report_["stages"].push_back(rec);
    if (!out.empty()) report_[name] = out;
    if (status == "ok") succeeded_.push_back(name);
    if (status == "input_error") exit_ = kExitInput;
    else if (status == "failed" && exit_ == kExitOk) exit_ = kExitHypothesis;
    if (status != "ok") text_ << "[" << name << "] " << status << ": " << message << "\n";
  }

  static void fail(json& o, const std::string& why) { o["_failure"] = why; }

  Evaluation evaluate_at(const Rational& tol) {
    OrbitCertificate orb = orbit_->precision >= working_precision(tol)
                               ? *orbit_
                               : recompute_orbit(*orbit_, working_precision(tol));
    if (pr_.diagonal()) return eval_diagonal(pr_.diagonal_system(), orb, tol);
    return eval_general(pr_.system(), orb, pr_.options.truncation, tol);
  }

  // ---- stages --------------------------------------------------------------

  void solve(json& o) {
    const int N = pr_.options.truncation;
    MahlerSystem ms = pr_.system();
    SeriesSolution sol = solve_series(ms, N);
    bool zero = residual_is_zero(residual(ms, sol, N));
    o["truncation"] = N;
    o["residual_zero"] = zero;
    if (pr_.diagonal()) {
      SeriesSolution ex = explicit_diagonal_series(pr_.diagonal_system(), N);
      bool agree = true;
      for (std::size_t i = 0; i < sol.series.size(); ++i)
        agree = agree && sol.series[i].coefficients() == ex.series[i].coefficients();
      o["explicit_agrees"] = agree;
      if (!agree) fail(o, "explicit series disagrees with the recursive solution");
    }
    json series = json::array();
    const std::size_t shown = std::min<std::size_t>(detail::kShownCoefficients, static_cast<std::size_t>(N) + 1);
    for (const auto& s : sol.series) {
      json c = json::array();
      for (std::size_t k = 0; k < shown; ++k) c.push_back(s[k].get_str());
      series.push_back(c);
    }
    o["coefficients_shown"] = shown;
    o["series"] = series;
    if (!zero) fail(o, "residual is not zero");
    text_ << "series: solved to order " << N << ", residual " << (zero ? "zero" : "NONZERO") << "\n";
  }

  void orbit(json& o) {
    orbit_ = compute_orbit(pr_.p, pr_.y, kDefaultMaxIter, pr_.options.precision_bits);
    const auto& orb = *orbit_;
    o["M"] = orb.M();
    o["basin_radius"] = orb.basin.radius.get_str();
    o["contraction"] = orb.basin.contraction.get_str();
    o["precision_bits"] = orb.precision;
    o["exact"] = orb.exact;
    json its = json::array();
    for (const auto& w : orb.iterates) its.push_back(detail::iterate_json(w));
    o["iterates"] = its;
    text_ << "orbit: w_" << orb.M() << " lies in the basin |z| <= " << orb.basin.radius.get_str()
          << " (contraction " << orb.basin.contraction.get_str() << ")\n";
  }

  void hypotheses(json& o) {
    HypothesisReport rep = check_hypotheses(pr_.system(), *orbit_);
    o["ok"] = rep.ok();
    o["detA_ok"] = rep.detA_ok;
    o["a_ok"] = rep.a_ok;
    o["nonzero_ok"] = rep.nonzero_ok;
    o["failing_index"] = rep.failing_index ? json(*rep.failing_index) : json(nullptr);
    o["failing_factor"] = rep.failing_factor;
    o["checked_through"] = rep.checked_through;
    o["tail_certified"] = rep.tail_certified;
    o["detA"] = detail::to_json(rep.detA);
    o["detA_root_bound"] = detail::optional_rational(rep.detA_root_bound);
    o["a_root_bound"] = detail::optional_rational(rep.a_root_bound);
    if (rep.ok()) {
      text_ << "hypotheses: det A(w_m) and a(w_m) nonzero for all m (explicit through " << rep.checked_through
            << ", tail certified)\n";
    } else {
      std::string why = rep.failing_factor + " vanishes at iterate " + std::to_string(rep.failing_index.value_or(0));
      text_ << "hypotheses: FAIL, " << why << "\n";
      fail(o, why);
    }
  }

  void independence(json& o) {
    if (!pr_.diagonal() || !pr_.p.is_polynomial()) {
      o["applicable"] = false;
      text_ << "independence: criteria need a diagonal system with polynomial p; not applied\n";
      return;
    }
    IndependenceCertificate c = certify(pr_.diagonal_system());
    o["applicable"] = true;
    o["linear_ok"] = c.linear_ok;
    o["condition_a"] = {{"holds", c.condition_a.holds},
                        {"pivot_degrees", c.condition_a.pivot_degrees},
                        {"witness_degrees", c.condition_a.witness_degrees}};
    json b{{"verdict", to_string(c.condition_b.verdict)}};
    if (c.condition_b.verdict == Verdict::FAILS) {
      json s = json::array();
      for (const auto& x : c.condition_b.s) s.push_back(x.get_str());
      b["s"] = s;
      b["g"] = detail::to_json(c.condition_b.g);
    }
    o["condition_b"] = b;
    o["conclusion"] = c.conclusion;
    text_ << "independence: 1, q_i linearly independent: " << (c.linear_ok ? "yes" : "no")
          << "; condition (a) " << (c.condition_a.holds ? "holds" : "fails") << "; condition (b) "
          << to_string(c.condition_b.verdict) << "; chi_i algebraically independent over C(z): "
          << (c.conclusion ? "yes" : "not established") << "\n";
    if (!c.conclusion) fail(o, "algebraic independence of the solutions is not established");
  }

  void evaluate(json& o) {
    eval_ = evaluate_at(pr_.options.tol);
    const Evaluation& ev = *eval_;
    EvaluatedPoint pt = make_point(ev.values, PointStyle::THEOREM1, std::nullopt, ev.certified);
    json vals = json::array();
    for (const auto& v : ev.values) vals.push_back(detail::ball_json(v));
    o["values"] = vals;
    json coords = json::array();
    for (const auto& v : pt.coords) coords.push_back(detail::ball_json(v));
    o["point"] = coords;
    o["certified"] = ev.certified;
    o["last_index"] = ev.last_index;
    o["precision_bits"] = ev.precision;
    o["tail_bound"] = detail::upper_string(ev.tail_bound);
    o["tol"] = pr_.options.tol.get_str();
    for (std::size_t i = 0; i < ev.values.size(); ++i)
      text_ << "f_" << i + 1 << "(y) = " << ev.values[i].mid_string(30) << " +/- " << ev.values[i].rad_string(3)
            << (ev.certified ? "" : " (numerical estimate, not certified)") << "\n";
  }

  void bounds(json& o) {
    const long n = static_cast<long>(pr_.n), d = pr_.p.degree(), delta = pr_.p.ord_zero();
    const mpfr_prec_t prec = pr_.options.precision_bits;
    o["n"] = n;
    o["d"] = d;
    o["delta"] = delta;
    Rho r = rho(d, delta, prec);
    o["rho"] = r.power ? json{{"exact", std::to_string(*r.power)}} : detail::ball_json(r.value);
    Thresholds th = thresholds(n, d, delta, prec);
    o["thresholds"] = {{"T1", detail::ball_json(th.t1)}, {"T2", detail::ball_json(th.t2)}, {"T3", detail::ball_json(th.t3)}};
    json reps = json::array();
    for (Theorem t : detail::theorems(pr_.options)) {
      for (long k = 0; k < n; ++k) {
        json e{{"theorem", to_string(t)}, {"k", k}};
        if (!admissible(t, n, d, delta, k)) {
          e["admissible"] = false;
          reps.push_back(e);
          continue;
        }
        try {
          ExponentReport rep = exponents(t, n, d, delta, k, pr_.options.epsilon, prec);
          e["admissible"] = true;
          e["inner"] = detail::ball_json(rep.inner_exp);
          e["bracket"] = detail::ball_json(rep.bracket_exp);
          e["degree"] = detail::ball_json(rep.degree_exp);
          text_ << detail::theorem_name(t) << ", k = " << k << ": log Dist >= -C (h + deg^"
                << rep.inner_exp.mid_string(8) << ")^" << rep.bracket_exp.mid_string(8) << " deg^"
                << rep.degree_exp.mid_string(8) << "\n";
        } catch (const Inconclusive& ex) {
          e["admissible"] = true;
          e["error"] = ex.what();
        }
        reps.push_back(e);
      }
    }
    o["exponents"] = reps;
    TrdegBounds tb = trdeg_bounds(n, d, delta, prec);
    o["trdeg"] = {{"cor1", tb.cor1},
                  {"cor2", tb.cor2 ? json(*tb.cor2) : json(nullptr)},
                  {"cor3", tb.cor3},
                  {"cor4", tb.cor4 ? json(*tb.cor4) : json(nullptr)},
                  {"thm3_real", detail::ball_json(tb.thm3_real)},
                  {"thm3_ceil", tb.thm3_ceil},
                  {"thm3_floor_plus_one", tb.thm3_floor_plus_one}};
    auto dir = dirichlet_exponent(n, d, delta);
    o["dirichlet_exponent"] = detail::optional_rational(dir);
    text_ << "cor1: trdeg Q(f_1(y), ..., f_n(y)) >= " << tb.cor1 << "\n";
    if (tb.cor2) text_ << "cor2: trdeg = " << *tb.cor2 << "\n";
    text_ << "cor3: trdeg Q(y, f_1(y), ..., f_n(y)) >= " << tb.cor3 << "\n";
    if (tb.cor4) text_ << "cor4: trdeg >= " << *tb.cor4 << "\n";
    text_ << "T3: trdeg >= " << tb.thm3_ceil << "\n";
    if (dir) text_ << "Dirichlet exponent: " << dir->get_str() << "\n";
  }

  void probe(json& o) {
    const mpfr_prec_t b = pr_.options.precision_bits;
    auto values_at = [this](mpfr_prec_t bits) {
      Rational tol = std::min(pr_.options.tol, detail::pow2(-static_cast<long>(bits)));
      std::vector<Ball> v = evaluate_at(tol).values;
      for (auto& x : v) x = x.with_precision(std::max(bits, x.precision()));
      return v;
    };
    std::vector<Ball> values = values_at(b);

    RelationQuery q;
    q.values = values;
    q.max_degree = pr_.options.max_degree;
    q.max_height = pr_.options.max_height;
    q.precision_bits = b;
    q.refine = values_at;
    RelationResult rr = find_relation(q);
    json rel;
    rel["found"] = rr.found ? json(rr.found->to_string()) : json(nullptr);
    if (rr.value_at_point) rel["abs_value_at_point"] = detail::ball_json(*rr.value_at_point);
    rel["best_log_abs"] = rr.best_log_abs ? json(detail::upper_string(*rr.best_log_abs)) : json(nullptr);
    rel["best_candidate"] = rr.best_candidate ? json(rr.best_candidate->to_string()) : json(nullptr);
    rel["lattice_dimension"] = rr.diagnostics.lattice_dimension;
    rel["degrees_tried"] = rr.diagnostics.degrees_tried;
    rel["candidates_examined"] = rr.diagnostics.candidates_examined;
    rel["lll_swaps"] = rr.diagnostics.lll_swaps;
    {
      std::ostringstream s;
      s.precision(6);
      s << rr.diagnostics.first_row_log2_norm;
      rel["first_row_log2_norm"] = s.str();
    }
    o["relation"] = rel;
    text_ << "relation probe (D = " << q.max_degree << ", H = " << q.max_height.get_str() << ", " << b
          << " bits): " << (rr.found ? rr.found->to_string() : std::string("none")) << "\n";

    // measure consistency with the hypersurface exponents of the first selected theorem
    const long n = static_cast<long>(pr_.n), d = pr_.p.degree(), delta = pr_.p.ord_zero();
    const Theorem t = detail::theorems(pr_.options).front();
    json mc{{"theorem", to_string(t)}};
    if (!admissible(t, n, d, delta, n - 1)) {
      mc["applicable"] = false;
      mc["reason"] = "k = n-1 is not admissible";
    } else {
      ExponentReport rep = exponents(t, n, d, delta, n - 1, pr_.options.epsilon, b);
      ConsistencyReport cr = measure_consistency(values, rep, pr_.options.max_degree, pr_.options.max_height,
                                                 pr_.options.trials, pr_.options.seed);
      mc["applicable"] = true;
      mc["seed"] = std::to_string(cr.seed);
      mc["trials"] = cr.trials;
      mc["exhaustive"] = cr.exhaustive;
      mc["diverged"] = cr.diverged;
      mc["shape_violations"] = cr.shape_violations;
      mc["fitted_C"] = cr.fitted_C ? json(detail::upper_string(*cr.fitted_C)) : json(nullptr);
      json sc = json::array();
      for (const auto& s : cr.samples)
        sc.push_back({{"P", s.P.to_string()},
                      {"needed_C", s.violation ? json(nullptr) : json(detail::upper_string(s.needed_C.upper()))}});
      mc["scatter"] = sc;
      text_ << "measure consistency (" << detail::theorem_name(t) << ", " << cr.samples.size()
            << " samples, seed " << cr.seed << "): "
            << (cr.diverged ? std::string("diverges")
                            : cr.fitted_C ? "C = " + detail::upper_string(*cr.fitted_C) : std::string("no samples"))
            << "\n";
    }
    o["consistency"] = mc;
  }
};

inline RunResult run(Command cmd, const Problem& pr, bool timing) { return Pipeline(pr, timing).run(cmd); }

}  // namespace mahler::cli

#endif  // MAHLER_CLI_PIPELINE_HPP
