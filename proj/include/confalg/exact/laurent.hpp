#pragma once

#include "confalg/errors.hpp"
#include "confalg/exact/param_poly.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

namespace confalg {

// One variable of a Laurent window. Coefficients with exponent in [lo, hi]
// are known exactly. Outside that range they are known to vanish when the
// corresponding flag is set, and are unknown otherwise. A flag is only ever
// set when the vanishing holds for every exponent of the other variable.
struct Axis {
  long lo = 0;
  long hi = 0;
  bool zero_below = true;
  bool zero_above = true;

  enum class State { Zero, Known, Unknown };

  State state(long e) const {
    if (e >= lo && e <= hi) return State::Known;
    if (e < lo) return zero_below ? State::Zero : State::Unknown;
    return zero_above ? State::Zero : State::Unknown;
  }
  bool empty() const { return lo > hi; }
  bool exact() const { return zero_below && zero_above; }

  friend bool operator==(const Axis&, const Axis&) = default;
};

namespace detail {

inline constexpr long kNegInf = LONG_MIN / 4;
inline constexpr long kPosInf = LONG_MAX / 4;

inline long clamp_inf(long v) {
  if (v <= kNegInf / 2) return kNegInf;
  if (v >= kPosInf / 2) return kPosInf;
  return v;
}
inline long add_bound(long a, long b) {
  if (a == kNegInf || b == kNegInf) return (a == kPosInf || b == kPosInf) ? 0 : kNegInf;
  if (a == kPosInf || b == kPosInf) return kPosInf;
  return clamp_inf(a + b);
}

// Axis of a product: exact wherever every contributing pair of factors is
// known or known to vanish.
inline Axis product_axis(const Axis& a, const Axis& b) {
  const long a0 = a.zero_below ? a.lo : kNegInf;
  const long a1 = a.zero_above ? a.hi : kPosInf;
  const long b0 = b.zero_below ? b.lo : kNegInf;
  const long b1 = b.zero_above ? b.hi : kPosInf;
  long g0 = kNegInf;
  long g1 = kPosInf;
  if (!a.zero_below) g0 = std::max(g0, add_bound(a.lo, b1));
  if (!b.zero_below) g0 = std::max(g0, add_bound(a1, b.lo));
  if (!a.zero_above) g1 = std::min(g1, add_bound(a.hi, b0));
  if (!b.zero_above) g1 = std::min(g1, add_bound(a0, b.hi));
  Axis r;
  r.zero_below = a.zero_below && b.zero_below;
  r.zero_above = a.zero_above && b.zero_above;
  r.lo = r.zero_below ? a0 + b0 : g0;
  r.hi = r.zero_above ? a1 + b1 : g1;
  if (r.lo == kNegInf || r.hi == kPosInf || r.lo == kPosInf || r.hi == kNegInf) {
    r.lo = 1;
    r.hi = 0;
  }
  return r;
}

// Axis of a sum: known where each summand is known or vanishes.
inline Axis sum_axis(const Axis& a, const Axis& b) {
  Axis r;
  r.zero_below = a.zero_below && b.zero_below;
  r.zero_above = a.zero_above && b.zero_above;
  const long ka0 = a.zero_below ? kNegInf : a.lo;
  const long kb0 = b.zero_below ? kNegInf : b.lo;
  const long ka1 = a.zero_above ? kPosInf : a.hi;
  const long kb1 = b.zero_above ? kPosInf : b.hi;
  r.lo = r.zero_below ? std::min(a.lo, b.lo) : std::max(ka0, kb0);
  r.hi = r.zero_above ? std::max(a.hi, b.hi) : std::min(ka1, kb1);
  return r;
}

}  // namespace detail

// A truncated Laurent series in z, or in (z, w), with ParamPoly coefficients
// and an explicit window. Results of arithmetic carry the window on which
// they are exact; "zero" always means zero on that window.
class LaurentWindow {
 public:
  using Key = std::array<long, 2>;
  using CoeffMap = std::map<Key, ParamPoly>;

  LaurentWindow() : LaurentWindow(1) {}

  static LaurentWindow zero(int nvars = 1) { return LaurentWindow(nvars); }

  static LaurentWindow constant(const ParamPoly& c) { return monomial(0, c); }

  static LaurentWindow monomial(long e, const ParamPoly& c) {
    LaurentWindow r(1);
    r.axes_[0] = Axis{e, e, true, true};
    if (!c.is_zero()) r.c_[{e, 0}] = c;
    return r;
  }

  // Exact Laurent polynomial in z.
  static LaurentWindow polynomial(const std::map<long, ParamPoly>& terms) {
    LaurentWindow r(1);
    bool any = false;
    for (const auto& [e, c] : terms) {
      if (c.is_zero()) continue;
      if (!any) r.axes_[0] = Axis{e, e, true, true};
      r.axes_[0].lo = std::min(r.axes_[0].lo, e);
      r.axes_[0].hi = std::max(r.axes_[0].hi, e);
      r.c_[{e, 0}] = c;
      any = true;
    }
    return r;
  }

  // Truncated series in z known on `axis`; terms outside the axis are dropped.
  static LaurentWindow series(const Axis& axis, const std::map<long, ParamPoly>& terms) {
    LaurentWindow r(1);
    r.axes_[0] = axis;
    for (const auto& [e, c] : terms) {
      if (!c.is_zero() && e >= axis.lo && e <= axis.hi) r.c_[{e, 0}] = c;
    }
    return r;
  }

  // Exact Laurent polynomial in (z, w).
  static LaurentWindow polynomial2(const CoeffMap& terms) {
    LaurentWindow r(2);
    bool any = false;
    for (const auto& [k, c] : terms) {
      if (c.is_zero()) continue;
      for (int v = 0; v < 2; ++v) {
        auto& ax = r.axes_[static_cast<std::size_t>(v)];
        if (!any) ax = Axis{k[static_cast<std::size_t>(v)], k[static_cast<std::size_t>(v)], true, true};
        ax.lo = std::min(ax.lo, k[static_cast<std::size_t>(v)]);
        ax.hi = std::max(ax.hi, k[static_cast<std::size_t>(v)]);
      }
      r.c_[k] = c;
      any = true;
    }
    return r;
  }

  static LaurentWindow series2(const Axis& z, const Axis& w, const CoeffMap& terms) {
    LaurentWindow r(2);
    r.axes_ = {z, w};
    for (const auto& [k, c] : terms) {
      if (!c.is_zero() && r.in_box(k)) r.c_[k] = c;
    }
    return r;
  }

  int nvars() const { return nvars_; }
  const Axis& axis(int v = 0) const { return axes_.at(static_cast<std::size_t>(v)); }
  const CoeffMap& coefficients() const { return c_; }

  bool empty_window() const {
    for (int v = 0; v < nvars_; ++v) {
      if (axes_[static_cast<std::size_t>(v)].empty()) return true;
    }
    return false;
  }

  Axis::State state(const Key& k) const {
    bool known = true;
    for (int v = 0; v < nvars_; ++v) {
      auto s = axes_[static_cast<std::size_t>(v)].state(k[static_cast<std::size_t>(v)]);
      if (s == Axis::State::Zero) return Axis::State::Zero;
      if (s == Axis::State::Unknown) known = false;
    }
    return known ? Axis::State::Known : Axis::State::Unknown;
  }
  bool is_known(const Key& k) const { return state(k) != Axis::State::Unknown; }
  bool is_known(long e) const { return is_known(Key{e, 0}); }

  ParamPoly coefficient(const Key& k) const {
    if (state(k) == Axis::State::Unknown) {
      throw WindowError(WindowError::Kind::OutOfWindow,
                        "coefficient at exponent " + key_str(k) + " lies outside window " + window_str());
    }
    auto it = c_.find(k);
    return it == c_.end() ? ParamPoly() : it->second;
  }
  ParamPoly coefficient(long e) const { return coefficient(Key{e, 0}); }

  // Zero on the whole tracked window.
  bool is_zero() const { return c_.empty(); }
  bool is_exact() const {
    for (int v = 0; v < nvars_; ++v) {
      if (!axes_[static_cast<std::size_t>(v)].exact()) return false;
    }
    return true;
  }

  std::optional<Key> first_nonzero() const {
    if (c_.empty()) return std::nullopt;
    return c_.begin()->first;
  }

  LaurentWindow operator-() const {
    LaurentWindow r = *this;
    for (auto& [k, c] : r.c_) c = -c;
    return r;
  }

  friend LaurentWindow operator+(const LaurentWindow& a, const LaurentWindow& b) { return combine(a, b, false); }
  friend LaurentWindow operator-(const LaurentWindow& a, const LaurentWindow& b) { return combine(a, b, true); }

  friend LaurentWindow operator*(const LaurentWindow& a, const LaurentWindow& b) {
    check_vars(a, b);
    LaurentWindow r(a.nvars_);
    for (std::size_t i = 0; i < r.axes_.size() && i < static_cast<std::size_t>(a.nvars_); ++i) {
      r.axes_[i] = detail::product_axis(a.axes_[i], b.axes_[i]);
    }
    if (r.empty_window()) {
      throw WindowError(WindowError::Kind::EmptyWindow,
                        "product of windows " + a.window_str() + " and " + b.window_str() + " has an empty window");
    }
    for (const auto& [ka, ca] : a.c_) {
      for (const auto& [kb, cb] : b.c_) {
        Key k{ka[0] + kb[0], ka[1] + kb[1]};
        if (!r.in_box(k)) continue;
        ParamPoly t = ca * cb;
        if (t.is_zero()) continue;
        auto [it, inserted] = r.c_.emplace(k, t);
        if (!inserted) {
          it->second += t;
          if (it->second.is_zero()) r.c_.erase(it);
        }
      }
    }
    return r;
  }

  // Multiply every coefficient by a polynomial (no window change).
  LaurentWindow scaled(const ParamPoly& s) const {
    LaurentWindow r = *this;
    r.c_.clear();
    if (s.is_zero()) return r;
    for (const auto& [k, c] : c_) {
      ParamPoly t = c * s;
      if (!t.is_zero()) r.c_[k] = std::move(t);
    }
    return r;
  }

  LaurentWindow map_coefficients(const std::function<ParamPoly(const ParamPoly&)>& f) const {
    LaurentWindow r = *this;
    r.c_.clear();
    for (const auto& [k, c] : c_) {
      ParamPoly t = f(c);
      if (!t.is_zero()) r.c_[k] = std::move(t);
    }
    return r;
  }

  // d/dvar
  LaurentWindow derivative(int var = 0) const {
    const auto i = static_cast<std::size_t>(var);
    LaurentWindow r(nvars_);
    r.axes_ = axes_;
    r.axes_[i].lo -= 1;
    r.axes_[i].hi -= 1;
    for (const auto& [k, c] : c_) {
      if (k[i] == 0) continue;
      Key nk = k;
      nk[i] -= 1;
      r.c_[nk] = c * Rational(k[i]);
    }
    return r;
  }

  // Multiply by var^shift.
  LaurentWindow shifted(long shift, int var = 0) const {
    const auto i = static_cast<std::size_t>(var);
    LaurentWindow r(nvars_);
    r.axes_ = axes_;
    r.axes_[i].lo += shift;
    r.axes_[i].hi += shift;
    for (const auto& [k, c] : c_) {
      Key nk = k;
      nk[i] += shift;
      r.c_[nk] = c;
    }
    return r;
  }

  // var -> -var
  LaurentWindow reflected(int var = 0) const {
    const auto i = static_cast<std::size_t>(var);
    LaurentWindow r = *this;
    for (auto& [k, c] : r.c_) {
      if (k[i] % 2 != 0) c = -c;
    }
    return r;
  }

  // Forget coefficients above `hi` in one variable.
  LaurentWindow truncated_above(long hi, int var = 0) const {
    const auto i = static_cast<std::size_t>(var);
    LaurentWindow r = *this;
    if (r.axes_[i].hi <= hi && !r.axes_[i].zero_above) return r;
    if (r.axes_[i].hi > hi || r.axes_[i].zero_above) {
      r.axes_[i].hi = std::min(r.axes_[i].hi, hi);
      r.axes_[i].zero_above = r.axes_[i].zero_above && axes_[i].hi <= hi;
    }
    for (auto it = r.c_.begin(); it != r.c_.end();) {
      it = it->first[i] > r.axes_[i].hi ? r.c_.erase(it) : std::next(it);
    }
    return r;
  }

  // Zero on the common window of both operands.
  friend bool equal_on_window(const LaurentWindow& a, const LaurentWindow& b) { return (a - b).is_zero(); }

  std::string window_str() const {
    std::ostringstream os;
    const char* names[2] = {"z", "w"};
    for (int v = 0; v < nvars_; ++v) {
      const auto& ax = axes_[static_cast<std::size_t>(v)];
      if (v > 0) os << " x ";
      os << names[v] << ":[" << ax.lo << "," << ax.hi << "]";
      if (ax.zero_below || ax.zero_above) {
        os << (ax.zero_below ? "<0" : "") << (ax.zero_above ? ">0" : "");
      }
    }
    return os.str();
  }

  std::string str() const {
    if (c_.empty()) return "0 on " + window_str();
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : c_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")";
      os << "*z^" << k[0];
      if (nvars_ == 2) os << "*w^" << k[1];
    }
    if (!is_exact()) os << " on " << window_str();
    return os.str();
  }

  friend bool operator==(const LaurentWindow& a, const LaurentWindow& b) {
    return a.nvars_ == b.nvars_ && a.axes_ == b.axes_ && a.c_ == b.c_;
  }

 private:
  explicit LaurentWindow(int nvars) : nvars_(nvars) {
    if (nvars != 1 && nvars != 2) throw std::invalid_argument("Laurent windows have one or two variables");
    axes_[0] = Axis{0, 0, true, true};
    axes_[1] = Axis{0, 0, true, true};
  }

  static void check_vars(const LaurentWindow& a, const LaurentWindow& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("incompatible variable sets");
  }

  static LaurentWindow combine(const LaurentWindow& a, const LaurentWindow& b, bool subtract) {
    check_vars(a, b);
    LaurentWindow r(a.nvars_);
    for (std::size_t i = 0; i < r.axes_.size() && i < static_cast<std::size_t>(a.nvars_); ++i) {
      r.axes_[i] = detail::sum_axis(a.axes_[i], b.axes_[i]);
    }
    if (r.empty_window()) {
      throw WindowError(WindowError::Kind::EmptyWindow,
                        "windows " + a.window_str() + " and " + b.window_str() + " do not overlap");
    }
    for (const auto& [k, c] : a.c_) {
      if (r.in_box(k)) r.c_[k] = c;
    }
    for (const auto& [k, c] : b.c_) {
      if (!r.in_box(k)) continue;
      ParamPoly t = subtract ? -c : c;
      auto [it, inserted] = r.c_.emplace(k, t);
      if (!inserted) {
        it->second += t;
        if (it->second.is_zero()) r.c_.erase(it);
      }
    }
    return r;
  }

  bool in_box(const Key& k) const {
    for (int v = 0; v < nvars_; ++v) {
      const auto& ax = axes_[static_cast<std::size_t>(v)];
      if (k[static_cast<std::size_t>(v)] < ax.lo || k[static_cast<std::size_t>(v)] > ax.hi) return false;
    }
    return true;
  }

  std::string key_str(const Key& k) const {
    return nvars_ == 1 ? std::to_string(k[0]) : "(" + std::to_string(k[0]) + "," + std::to_string(k[1]) + ")";
  }

  int nvars_;
  std::array<Axis, 2> axes_;
  CoeffMap c_;
};

// exp(z * x) through z^order, where x is a polynomial in the symbol universe.
inline LaurentWindow truncated_exp(const ParamPoly& x, long order) {
  if (order < 0) throw std::invalid_argument("truncated_exp: negative order");
  if (x.is_zero()) return LaurentWindow::constant(ParamPoly(1));
  std::map<long, ParamPoly> terms;
  ParamPoly p(1);
  for (long n = 0; n <= order; ++n) {
    terms[n] = p * (Rational(1) / factorial(static_cast<unsigned>(n)));
    p *= x;
  }
  return LaurentWindow::series(Axis{0, order, true, false}, terms);
}

enum class IotaRegion { ZOverW, WOverZ };  // |z| > |w|, |w| > |z|

// Expansion of numerator * (z - w)^(-k) in the chosen region, exact on the
// box z_range x w_range.
inline LaurentWindow iota_expand(const ParamPoly& numerator, long k, IotaRegion region, std::pair<long, long> z_range,
                                 std::pair<long, long> w_range) {
  if (k < 0) throw std::invalid_argument("iota_expand: negative pole order");
  // In region ZOverW the big variable is z; otherwise w, with the sign (-1)^k
  // from (z - w)^(-k) = (-1)^k (w - z)^(-k).
  const int big = region == IotaRegion::ZOverW ? 0 : 1;
  const int small = 1 - big;
  std::array<std::pair<long, long>, 2> ranges{z_range, w_range};
  if (ranges[0].first > ranges[0].second || ranges[1].first > ranges[1].second) {
    throw WindowError(WindowError::Kind::TooSmall, "iota_expand: empty window");
  }
  if (k == 0) {
    LaurentWindow::CoeffMap one;
    one[{0, 0}] = numerator;
    return LaurentWindow::polynomial2(one);
  }
  // Leading term: big^(-k) small^0.
  if (ranges[static_cast<std::size_t>(big)].second < -k || ranges[static_cast<std::size_t>(big)].first > -k ||
      ranges[static_cast<std::size_t>(small)].first > 0 || ranges[static_cast<std::size_t>(small)].second < 0) {
    throw WindowError(WindowError::Kind::TooSmall, "iota_expand: window does not hold the leading term");
  }
  const Rational sign = (region == IotaRegion::WOverZ && k % 2 != 0) ? Rational(-1) : Rational(1);
  LaurentWindow::CoeffMap terms;
  for (long j = 0; j <= ranges[static_cast<std::size_t>(small)].second; ++j) {
    const long be = -k - j;
    if (be < ranges[static_cast<std::size_t>(big)].first) break;
    LaurentWindow::Key key{};
    key[static_cast<std::size_t>(big)] = be;
    key[static_cast<std::size_t>(small)] = j;
    terms[key] = numerator * (sign * binomial(k + j - 1, static_cast<unsigned>(j)));
  }
  Axis big_axis{ranges[static_cast<std::size_t>(big)].first, -k, false, true};
  Axis small_axis{ranges[static_cast<std::size_t>(small)].first, ranges[static_cast<std::size_t>(small)].second,
                  ranges[static_cast<std::size_t>(small)].first <= 0, false};
  return big == 0 ? LaurentWindow::series2(big_axis, small_axis, terms)
                  : LaurentWindow::series2(small_axis, big_axis, terms);
}

// Expansion holding exactly `terms` leading terms.
inline LaurentWindow iota_expand_terms(const ParamPoly& numerator, long k, IotaRegion region, long terms) {
  if (terms < 1) throw WindowError(WindowError::Kind::TooSmall, "iota_expand: need at least one term");
  std::pair<long, long> big{-k - terms + 1, -k};
  std::pair<long, long> small{0, terms - 1};
  return region == IotaRegion::ZOverW ? iota_expand(numerator, k, region, big, small)
                                      : iota_expand(numerator, k, region, small, big);
}

}  // namespace confalg
