#ifndef MAHLER_CLI_PROBLEM_HPP
#define MAHLER_CLI_PROBLEM_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mahler/mahler.hpp"

namespace mahler::cli {

using json = nlohmann::json;

/// Bad input; the message starts with the JSON path of the offending value.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Options {
  mpfr_prec_t precision_bits = 256;
  int truncation = 200;
  Rational tol = parse_rational("1e-40");
  Rational epsilon{1, 10};
  int max_degree = 4;
  Integer max_height = 1000000;
  Rational C = 1;
  std::optional<int> theorem;  // 1, 2 or 3; all three when absent
  std::uint64_t seed = 0;
  std::size_t trials = 1000;

  friend bool operator==(const Options&, const Options&) = default;
};

struct Problem {
  std::size_t n = 0;
  RationalFunction p;
  std::optional<std::vector<Polynomial>> q;  // diagonal form
  std::optional<Polynomial> a;               // general form: a, A, B
  std::optional<PolynomialMatrix> A;
  std::optional<std::vector<Polynomial>> B;
  Rational y;
  Options options;

  bool diagonal() const { return q.has_value(); }
  MahlerSystem system() const {
    return diagonal() ? to_mahler_system(DiagonalSystem(p, *q)) : MahlerSystem(p, *a, *A, *B);
  }
  DiagonalSystem diagonal_system() const { return DiagonalSystem(p, *q); }

  friend bool operator==(const Problem&, const Problem&) = default;
};

namespace detail {

inline std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
inline std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline Rational rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (j.is_number_float()) throw InputError(path, "floating-point numbers are not exact; write the value as a string");
  if (!j.is_string()) throw InputError(path, "expected a rational string such as \"3/4\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const mahler::error& e) {
    throw InputError(path, e.what());
  }
}

inline Integer integer(const json& j, const std::string& path) {
  Rational r = rational(j, path);
  if (r.get_den() != 1) throw InputError(path, "expected an integer");
  return r.get_num();
}

template <class T>
T bounded_int(const json& j, const std::string& path, long lo, long hi) {
  Integer v = integer(j, path);
  if (v < lo || v > hi)
    throw InputError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<T>(v.get_si());
}

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw InputError(path, "expected an array");
  return j;
}

// coefficient list, constant term first
inline Polynomial polynomial(const json& j, const std::string& path) {
  std::vector<Rational> c;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) c.push_back(rational(j[i], at(path, i)));
  return Polynomial(std::move(c));
}

inline std::vector<Polynomial> polynomials(const json& j, const std::string& path) {
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(polynomial(j[i], at(path, i)));
  return out;
}

inline json to_json(const Rational& q) { return q.get_str(); }
inline json to_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& c : p.coefficients()) out.push_back(to_json(c));
  return out;
}
inline json to_json(const std::vector<Polynomial>& v) {
  json out = json::array();
  for (const auto& p : v) out.push_back(to_json(p));
  return out;
}

}  // namespace detail

inline Options parse_options(const json& j, const std::string& path = "$.options") {
  Options o;
  if (!j.is_object()) throw InputError(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const std::string p = detail::at(path, k);
    const json& v = it.value();
    if (k == "precision_bits") o.precision_bits = detail::bounded_int<mpfr_prec_t>(v, p, 16, kMaxEvalPrecision);
    else if (k == "truncation") o.truncation = detail::bounded_int<int>(v, p, 0, 100000);
    else if (k == "tol") {
      o.tol = detail::rational(v, p);
      if (o.tol <= 0) throw InputError(p, "must be positive");
    } else if (k == "epsilon") {
      o.epsilon = detail::rational(v, p);
      if (o.epsilon <= 0) throw InputError(p, "must be positive");
    } else if (k == "max_degree") o.max_degree = detail::bounded_int<int>(v, p, 1, 64);
    else if (k == "max_height") {
      o.max_height = detail::integer(v, p);
      if (o.max_height < 1) throw InputError(p, "must be >= 1");
    } else if (k == "C") {
      o.C = detail::rational(v, p);
      if (o.C <= 0) throw InputError(p, "must be positive");
    } else if (k == "theorem") o.theorem = detail::bounded_int<int>(v, p, 1, 3);
    else if (k == "seed") {
      Integer s = detail::integer(v, p);
      if (s < 0 || s > Integer("18446744073709551615")) throw InputError(p, "must be a 64-bit unsigned integer");
      o.seed = std::stoull(s.get_str());
    } else if (k == "trials") o.trials = detail::bounded_int<std::size_t>(v, p, 0, 10000000);
    else throw InputError(p, "unknown option");
  }
  return o;
}

inline Problem parse_problem(const json& j) {
  if (!j.is_object()) throw InputError("$", "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"n", "p", "q", "a", "A", "B", "y", "options"};
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known))
      throw InputError(detail::at("$", it.key()), "unknown field");
  }
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw InputError(detail::at("$", key), "missing");
    return j[key];
  };
  Problem pr;
  pr.n = detail::bounded_int<std::size_t>(need("n"), "$.n", 1, 1000);

  const json& pj = need("p");
  if (!pj.is_object() || !pj.contains("num")) throw InputError("$.p", "expected {\"num\": [...], \"den\": [...]}");
  for (auto it = pj.begin(); it != pj.end(); ++it)
    if (it.key() != "num" && it.key() != "den") throw InputError(detail::at("$.p", it.key()), "unknown field");
  Polynomial num = detail::polynomial(pj["num"], "$.p.num");
  Polynomial den = pj.contains("den") ? detail::polynomial(pj["den"], "$.p.den") : Polynomial::constant(1);
  if (den.is_zero()) throw InputError("$.p.den", "denominator is zero");
  try {
    pr.p = RationalFunction(num, den);
  } catch (const mahler::error& e) {
    throw InputError("$.p", e.what());
  }
  if (pr.p.degree() < 1) throw InputError("$.p", "p must be nonconstant");
  if (pr.p.num().coeff(0) != 0) throw InputError("$.p.num[0]", "p must satisfy p(0) = 0");
  if (pr.p.ord_zero() < 2) throw InputError("$.p.num", "ord p at 0 must be >= 2");

  const bool has_q = j.contains("q");
  const bool has_general = j.contains("a") || j.contains("A") || j.contains("B");
  if (has_q == has_general) throw InputError("$", "give exactly one of q or {a, A, B}");
  if (has_q) {
    pr.q = detail::polynomials(j["q"], "$.q");
    if (pr.q->size() != pr.n) throw InputError("$.q", "expected n = " + std::to_string(pr.n) + " polynomials");
    for (std::size_t i = 0; i < pr.n; ++i) {
      if ((*pr.q)[i].degree() < 1) throw InputError(detail::at("$.q", i), "must have degree >= 1");
      if ((*pr.q)[i].coeff(0) != 0) throw InputError(detail::at("$.q", i) + "[0]", "q_i must vanish at 0");
    }
  } else {
    pr.a = detail::polynomial(need("a"), "$.a");
    if (pr.a->is_zero()) throw InputError("$.a", "a must be nonzero");
    const json& Aj = detail::array(need("A"), "$.A");
    if (Aj.size() != pr.n) throw InputError("$.A", "expected n rows");
    PolynomialMatrix A;
    for (std::size_t i = 0; i < pr.n; ++i) {
      A.push_back(detail::polynomials(Aj[i], detail::at("$.A", i)));
      if (A.back().size() != pr.n) throw InputError(detail::at("$.A", i), "expected n entries");
    }
    pr.A = std::move(A);
    pr.B = detail::polynomials(need("B"), "$.B");
    if (pr.B->size() != pr.n) throw InputError("$.B", "expected n polynomials");
  }

  pr.y = detail::rational(need("y"), "$.y");
  if (pr.y == 0) throw InputError("$.y", "y must be nonzero");
  if (j.contains("options")) pr.options = parse_options(j["options"]);
  return pr;
}

inline Problem parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(j);
}

inline json options_to_json(const Options& o) {
  json j;
  j["precision_bits"] = o.precision_bits;
  j["truncation"] = o.truncation;
  j["tol"] = detail::to_json(o.tol);
  j["epsilon"] = detail::to_json(o.epsilon);
  j["max_degree"] = o.max_degree;
  j["max_height"] = o.max_height.get_str();
  j["C"] = detail::to_json(o.C);
  if (o.theorem) j["theorem"] = *o.theorem;
  j["seed"] = std::to_string(o.seed);
  j["trials"] = o.trials;
  return j;
}

inline json problem_to_json(const Problem& pr) {
  json j;
  j["n"] = pr.n;
  j["p"] = {{"num", detail::to_json(pr.p.num())}, {"den", detail::to_json(pr.p.den())}};
  if (pr.q) {
    j["q"] = detail::to_json(*pr.q);
  } else {
    j["a"] = detail::to_json(*pr.a);
    json A = json::array();
    for (const auto& row : *pr.A) A.push_back(detail::to_json(row));
    j["A"] = A;
    j["B"] = detail::to_json(*pr.B);
  }
  j["y"] = detail::to_json(pr.y);
  j["options"] = options_to_json(pr.options);
  return j;
}

}  // namespace mahler::cli

#endif  // MAHLER_CLI_PROBLEM_HPP
