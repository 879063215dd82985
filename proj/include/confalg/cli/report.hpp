#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace confalg::cli {

enum class Outcome { Pass = 0, Fail = 1, Inconclusive = 2, InputError = 3 };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Inconclusive: return "inconclusive";
    default: return "input-error";
  }
}

// Input errors dominate, then failures, then inconclusive results.
inline Outcome worst(Outcome a, Outcome b) {
  auto rank = [](Outcome o) {
    switch (o) {
      case Outcome::InputError: return 3;
      case Outcome::Fail: return 2;
      case Outcome::Inconclusive: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

inline std::string fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Report {
  std::string command;
  std::string input;
  std::string digest;
  std::vector<std::pair<std::string, std::string>> bounds;  // window, lambda-degree, ...
  std::vector<std::pair<std::string, std::string>> items;
  Outcome outcome = Outcome::Pass;
  std::string verdict;
  std::string witness;
  std::optional<double> millis;

  void add(std::string key, std::string value) { items.emplace_back(std::move(key), std::move(value)); }
  void bound(std::string key, std::string value) { bounds.emplace_back(std::move(key), std::move(value)); }
  void fail(Outcome o, const std::string& w) {
    const Outcome next = worst(outcome, o);
    if (witness.empty() || next != outcome) witness = w;
    outcome = next;
  }
};

inline void render_human(std::ostream& os, const Report& r) {
  os << r.command << " " << r.input << "\n";
  if (!r.digest.empty()) os << "  digest: " << r.digest << "\n";
  for (const auto& [k, v] : r.bounds) os << "  " << k << ": " << v << "\n";
  for (const auto& [k, v] : r.items) os << "  " << k << ": " << v << "\n";
  os << "  verdict: " << outcome_name(r.outcome);
  if (!r.verdict.empty()) os << " (" << r.verdict << ")";
  os << "\n";
  if (!r.witness.empty()) os << "  witness: " << r.witness << "\n";
  if (r.millis) os << "  time-ms: " << *r.millis << "\n";
}

inline std::string machine_value(std::string v) {
  for (auto& c : v) {
    if (c == '\n') c = ' ';
  }
  return v;
}

inline void render_machine(std::ostream& os, const Report& r) {
  os << "confalg-report v1\n";
  os << "command=" << r.command << "\n";
  os << "input=" << machine_value(r.input) << "\n";
  if (!r.digest.empty()) os << "digest=" << r.digest << "\n";
  for (const auto& [k, v] : r.bounds) os << "bound." << k << "=" << machine_value(v) << "\n";
  for (const auto& [k, v] : r.items) os << "item." << k << "=" << machine_value(v) << "\n";
  os << "outcome=" << outcome_name(r.outcome) << "\n";
  if (!r.verdict.empty()) os << "verdict=" << machine_value(r.verdict) << "\n";
  if (!r.witness.empty()) os << "witness=" << machine_value(r.witness) << "\n";
  if (r.millis) os << "time-ms=" << *r.millis << "\n";
  os << "end\n";
}

}  // namespace confalg::cli
