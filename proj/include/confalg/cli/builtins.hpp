#pragma once

#include "confalg/cli/definition.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace confalg::cli {

namespace detail {

// "c*term" as definition text, with the sign in front.
inline std::string scaled_term(const Rational& c, const std::string& term) {
  if (c == 0) return "";
  const Rational a = abs(c);
  std::string mag = a == 1 ? term : a.get_str() + "*" + term;
  return (c < 0 ? " - " : " + ") + mag;
}

inline std::string join_sum(const std::vector<std::pair<Rational, std::string>>& terms) {
  std::string s;
  for (const auto& [c, t] : terms) s += scaled_term(c, t);
  if (s.empty()) return "0";
  if (s.rfind(" + ", 0) == 0) return s.substr(3);
  return "-" + s.substr(3);
}

inline std::string matrix_text(const QMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < m[i].size(); ++j) s += (j ? ", " : "") + m[i][j].get_str();
    s += "]";
  }
  return s + "]";
}

inline QMatrix shift_matrix(std::size_t n) {
  QMatrix m(n, QVector(n));
  for (std::size_t i = 0; i + 1 < n; ++i) m[i + 1][i] = 1;
  return m;
}

inline std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

inline Rational arg_rational(const std::string& spec, const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::exception&) {
    throw InputError("builtin " + spec + ": '" + s + "' is not a rational number");
  }
}

inline long arg_count(const std::string& spec, const std::string& s, long lo, long hi) {
  long v = 0;
  try {
    std::size_t used = 0;
    v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw InputError("builtin " + spec + ": '" + s + "' is not an integer");
  }
  if (v < lo || v > hi) {
    throw InputError("builtin " + spec + ": " + s + " out of range [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
  }
  return v;
}

}  // namespace detail

struct BuiltinOptions {
  long window = 8;
  bool expect_locality_failure = false;
};

inline std::string virasoro_text() { return "conformal vir {\n  gen L;\n  bracket L L = (del + 2*lambda)*L;\n}\n"; }

inline std::string virasoro_ext_text(const Rational& c, std::size_t n) {
  std::ostringstream os;
  std::vector<std::string> k;
  if (n == 0) {
    k.push_back("k");
  } else {
    for (std::size_t i = 0; i <= n; ++i) k.push_back("k" + std::to_string(i));
  }
  os << "conformal virext {\n  gen L;\n  torsion ";
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? ", " : "") << k[i];
  os << ";\n  del " << detail::matrix_text(detail::shift_matrix(n + 1)) << ";\n";
  os << "  bracket L L = (del + 2*lambda)*L" << detail::scaled_term(c, "lambda^3*" + k.back()) << ";\n}\n";
  return os.str();
}

inline std::string current_sl2_text() {
  return "conformal current_sl2 {\n  gen e, h, f;\n"
         "  bracket e f = h;\n  bracket f e = -h;\n"
         "  bracket h e = 2*e;\n  bracket e h = -2*e;\n"
         "  bracket h f = -2*f;\n  bracket f h = 2*f;\n}\n";
}

inline std::string finitevertex_text(const std::string& psi, const BuiltinOptions& o) {
  std::ostringstream os;
  os << "vertex finitevertex {\n  gen a, b;\n  torsion vac;\n  vacuum vac;\n  window " << o.window << ";\n";
  if (o.expect_locality_failure) os << "  flag expect-locality-failure;\n";
  os << "  field a a = exp(del*z/2)*(" << psi << ")*b;\n}\n";
  return os.str();
}

// C^n (idempotents) or C[x]/(x^n) with T = x^2 d/dx, as tables of
// Y(g_i,z)g_j = sum_k z^k/k! (T^k g_i) g_j.
inline std::string holomorphic_text(std::size_t n, bool jet, const BuiltinOptions& o) {
  std::vector<std::string> labels{"vac"};
  for (std::size_t i = 1; i < n; ++i) {
    labels.push_back(jet ? (i == 1 ? "x" : "x" + std::to_string(i)) : "e" + std::to_string(i));
  }
  QMatrix t(n, QVector(n));
  if (jet) {
    for (std::size_t k = 1; k + 1 < n; ++k) t[k + 1][k] = Rational(static_cast<long>(k));
  }
  std::ostringstream os;
  os << "vertex " << (jet ? "holomorphic_jet" : "holomorphic") << " {\n  torsion ";
  for (std::size_t i = 0; i < n; ++i) os << (i ? ", " : "") << labels[i];
  os << ";\n  del " << detail::matrix_text(t) << ";\n  vacuum vac;\n  window " << o.window << ";\n";
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) {
      std::vector<std::pair<Rational, std::string>> terms;
      if (!jet) {
        if (i == j) terms.emplace_back(1, labels[i]);
      } else {
        // T^k x^i / k! = binom(i+k-1, k) x^{i+k}
        for (std::size_t k = 0; i + j + k < n; ++k) {
          Rational coef = binomial(static_cast<long>(i + k - 1), static_cast<unsigned>(k));
          std::string zpart = k == 0 ? "" : (k == 1 ? "z*" : "z^" + std::to_string(k) + "*");
          terms.emplace_back(coef, zpart + labels[i + j + k]);
        }
      }
      if (!terms.empty()) os << "  field " << labels[i] << " " << labels[j] << " = " << detail::join_sum(terms) << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

inline std::string scalar_coeff_text(const Rational& a) {
  return "coeff C {\n  dim 1;\n  basis c;\n  del [[" + a.get_str() + "]];\n}\n";
}

inline std::string jordan_text(std::size_t n) {
  return "coeff jordan {\n  dim " + std::to_string(n + 1) + ";\n  del " + detail::matrix_text(detail::shift_matrix(n + 1)) +
         ";\n}\n";
}

// Source text of a builtin such as "vir-ext(1,2)", "finitevertex(z^-2)" or "jordan(3)".
inline std::string builtin_text(const std::string& spec, const BuiltinOptions& o = {}) {
  std::string name = spec;
  std::vector<std::string> args;
  if (auto open = spec.find('('); open != std::string::npos) {
    if (spec.back() != ')') throw InputError("builtin " + spec + ": missing ')'");
    name = spec.substr(0, open);
    args = detail::split_args(spec.substr(open + 1, spec.size() - open - 2));
  }
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) throw InputError("builtin " + name + ": wrong number of arguments");
  };
  if (name == "vir") {
    want(0, 0);
    return virasoro_text();
  }
  if (name == "vir-ext") {
    want(2, 2);
    return virasoro_ext_text(detail::arg_rational(spec, args[0]),
                             static_cast<std::size_t>(detail::arg_count(spec, args[1], 0, 16)));
  }
  if (name == "current-sl2") {
    want(0, 0);
    return current_sl2_text();
  }
  if (name == "finitevertex") {
    want(0, 1);
    return finitevertex_text(args.empty() ? "z^-2" : args[0], o);
  }
  if (name == "holomorphic") {
    want(1, 2);
    const long n = detail::arg_count(spec, args[0], 1, 12);
    if (args.size() == 2 && args[1] != "jet") throw InputError("builtin holomorphic: second argument must be 'jet'");
    return holomorphic_text(static_cast<std::size_t>(n), args.size() == 2, o);
  }
  if (name == "C0") {
    want(0, 0);
    return scalar_coeff_text(0);
  }
  if (name == "C") {
    want(1, 1);
    return scalar_coeff_text(detail::arg_rational(spec, args[0]));
  }
  if (name == "jordan") {
    want(1, 1);
    return jordan_text(static_cast<std::size_t>(detail::arg_count(spec, args[0], 0, 16)));
  }
  throw InputError("unknown builtin '" + spec + "'");
}

inline Definition builtin(const std::string& spec, const BuiltinOptions& o = {}) { return parse_definition(builtin_text(spec, o)); }

inline bool is_builtin_name(const std::string& spec) {
  const std::string name = spec.substr(0, spec.find('('));
  static const std::vector<std::string> names{"vir", "vir-ext", "current-sl2", "finitevertex", "holomorphic", "C0", "C", "jordan"};
  return std::find(names.begin(), names.end(), name) != names.end();
}

inline std::vector<std::string> builtin_corpus() {
  return {"vir",          "vir-ext(0,0)",      "vir-ext(0,1)",         "vir-ext(0,2)",    "vir-ext(1,0)",
          "vir-ext(1,1)", "vir-ext(1,2)",      "vir-ext(-1/2,3)",      "current-sl2",     "finitevertex(z^-2)",
          "finitevertex(z^-4+z^-2)",           "finitevertex(0)",      "holomorphic(1)",  "holomorphic(3)",
          "holomorphic(4,jet)",                "C0",                   "C(1)",            "C(-2)",
          "C(1/3)",       "jordan(1)",         "jordan(2)",            "jordan(3)",       "jordan(4)"};
}

}  // namespace confalg::cli
