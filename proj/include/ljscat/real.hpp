/// \file real.hpp
/// \brief Value-semantic arbitrary-precision real number on top of MPFR.
///
/// Every Real carries its own precision. Results of binary operations take the
/// larger precision of the two operands; values created from literals take the
/// calling thread's default precision, which is set with a PrecisionScope.
/// There is no process-wide mutable state, so Reals can be used from many
/// threads at once as long as each thread owns the values it mutates.

#pragma once

#include <cstdint>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace ljscat::mp {

/// Bits needed to carry `digits` decimal digits, plus a few guard bits.
inline mpfr_prec_t digits_to_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

inline int bits_to_digits(mpfr_prec_t bits) {
  return static_cast<int>(std::floor(static_cast<double>(bits - 8) * 0.30102999566398120));
}

namespace detail {
inline int& thread_default_digits() {
  thread_local int digits = 30;
  return digits;
}
}  // namespace detail

inline int default_digits() { return detail::thread_default_digits(); }

/// Sets the calling thread's default precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(int digits) : saved_(detail::thread_default_digits()) {
    if (digits < 1) throw std::invalid_argument("PrecisionScope: digits must be positive");
    detail::thread_default_digits() = digits;
  }
  ~PrecisionScope() { detail::thread_default_digits() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

class Real {
 public:
  Real() { init(digits_to_bits(default_digits())); mpfr_set_zero(v_, 1); }

  Real(double x) {  // NOLINT(google-explicit-constructor)
    init(std::max<mpfr_prec_t>(digits_to_bits(default_digits()), 53));
    mpfr_set_d(v_, x, MPFR_RNDN);
  }

  template <std::integral I>
  Real(I x) {  // NOLINT(google-explicit-constructor)
    init(std::max<mpfr_prec_t>(digits_to_bits(default_digits()), 64));
    if constexpr (std::is_signed_v<I>) {
      mpfr_set_sj(v_, static_cast<std::intmax_t>(x), MPFR_RNDN);
    } else {
      mpfr_set_uj(v_, static_cast<std::uintmax_t>(x), MPFR_RNDN);
    }
  }

  /// Parses a decimal literal ("2.944907", "1e-4") at the thread default precision.
  explicit Real(std::string_view text) : Real(text, default_digits()) {}

  Real(std::string_view text, int digits) {
    init(digits_to_bits(digits));
    std::string buf(text);
    char* end = nullptr;
    if (!buf.empty()) mpfr_strtofr(v_, buf.c_str(), &end, 10, MPFR_RNDN);
    if (buf.empty() || end == buf.c_str() || *end != '\0' || mpfr_nan_p(v_)) {
      mpfr_clear(v_);
      v_->_mpfr_d = nullptr;
      throw std::invalid_argument("not a decimal number: '" + buf + "'");
    }
  }

  Real(const Real& other) {
    init(mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }

  Real(Real&& other) noexcept {
    *v_ = *other.v_;
    other.v_->_mpfr_d = nullptr;
  }

  Real& operator=(const Real& other) {
    if (this == &other) return *this;
    if (v_->_mpfr_d == nullptr) {
      init(mpfr_get_prec(other.v_));
    } else if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    }
    mpfr_set(v_, other.v_, MPFR_RNDN);
    return *this;
  }

  Real& operator=(Real&& other) noexcept {
    std::swap(*v_, *other.v_);
    return *this;
  }

  ~Real() {
    if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
  }

  /// Copy of `x` rounded (or zero-extended) to `digits` decimal digits.
  static Real with_digits(const Real& x, int digits) {
    Real r(uninitialized{}, digits_to_bits(digits));
    mpfr_set(r.v_, x.v_, MPFR_RNDN);
    return r;
  }

  static Real with_bits(const Real& x, mpfr_prec_t bits) {
    Real r(uninitialized{}, bits);
    mpfr_set(r.v_, x.v_, MPFR_RNDN);
    return r;
  }

  static Real pi(int digits = default_digits()) {
    Real r(uninitialized{}, digits_to_bits(digits));
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  /// 10^e at the thread default precision.
  static Real pow10(long e) {
    Real r(uninitialized{}, digits_to_bits(default_digits()));
    mpfr_ui_pow_ui(r.v_, 10, static_cast<unsigned long>(std::labs(e)), MPFR_RNDN);
    if (e < 0) mpfr_ui_div(r.v_, 1, r.v_, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t bits() const { return mpfr_get_prec(v_); }
  int digits() const { return bits_to_digits(bits()); }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  /// Exact, base-16 image of the value including its precision; used as a cache key.
  std::string exact_key() const {
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 16, 0, v_, MPFR_RNDN);
    std::string out = std::string(s) + "@" + std::to_string(e) + "/" + std::to_string(bits());
    mpfr_free_str(s);
    return out;
  }

  /// Scientific notation with `sig` significant digits, e.g. "-1.2345e-05".
  /// Locale independent.
  std::string to_scientific(int sig) const {
    if (is_nan()) return "nan";
    if (mpfr_inf_p(v_)) return sign() < 0 ? "-inf" : "inf";
    if (is_zero()) return sig > 1 ? "0." + std::string(sig - 1, '0') + "e+00" : "0e+00";
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(std::max(sig, 1)), v_, MPFR_RNDN);
    std::string digits(s);
    mpfr_free_str(s);
    std::string out;
    if (digits.front() == '-') {
      out.push_back('-');
      digits.erase(0, 1);
    }
    out.push_back(digits[0]);
    if (digits.size() > 1) {
      out.push_back('.');
      out.append(digits, 1, std::string::npos);
    }
    const long exponent = static_cast<long>(e) - 1;
    out.push_back('e');
    out.push_back(exponent < 0 ? '-' : '+');
    std::string ex = std::to_string(std::labs(exponent));
    if (ex.size() < 2) ex.insert(0, "0");
    out += ex;
    return out;
  }

  /// Fixed notation with `decimals` digits after the point, e.g. "2.944907".
  /// Rounds to nearest, or truncates when `toward_zero`. Locale independent.
  std::string to_fixed(int decimals, bool toward_zero = false) const {
    if (!is_finite()) return to_scientific(1);
    Real scaled = *this * pow10_at(decimals, bits() + 64);
    mpfr_rint(scaled.v_, scaled.v_, toward_zero ? MPFR_RNDZ : MPFR_RNDN);
    char* s = nullptr;
    mpfr_exp_t e = 0;
    s = mpfr_get_str(nullptr, &e, 10, 0, scaled.v_, MPFR_RNDN);
    std::string raw(s);
    mpfr_free_str(s);
    bool negative = false;
    if (!raw.empty() && raw.front() == '-') {
      negative = true;
      raw.erase(0, 1);
    }
    // raw holds the significant digits; the integer has e digits.
    std::string integer;
    if (scaled.is_zero()) {
      integer = "0";
      negative = false;
    } else {
      integer = raw.substr(0, static_cast<std::size_t>(std::max<mpfr_exp_t>(e, 0)));
      while (static_cast<mpfr_exp_t>(integer.size()) < e) integer.push_back('0');
    }
    if (static_cast<int>(integer.size()) <= decimals) {
      integer.insert(0, static_cast<std::size_t>(decimals + 1 - static_cast<int>(integer.size())), '0');
    }
    std::string out = negative ? "-" : "";
    out += integer.substr(0, integer.size() - static_cast<std::size_t>(decimals));
    if (decimals > 0) {
      out.push_back('.');
      out += integer.substr(integer.size() - static_cast<std::size_t>(decimals));
    }
    return out;
  }

  Real& operator+=(const Real& o) { widen(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { widen(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { widen(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { widen(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  template <std::integral I>
  Real& operator+=(I o) { mpfr_add_si(v_, v_, static_cast<long>(o), MPFR_RNDN); return *this; }
  template <std::integral I>
  Real& operator-=(I o) { mpfr_sub_si(v_, v_, static_cast<long>(o), MPFR_RNDN); return *this; }
  template <std::integral I>
  Real& operator*=(I o) { mpfr_mul_si(v_, v_, static_cast<long>(o), MPFR_RNDN); return *this; }
  template <std::integral I>
  Real& operator/=(I o) { mpfr_div_si(v_, v_, static_cast<long>(o), MPFR_RNDN); return *this; }

  friend Real operator-(const Real& a) {
    Real r(uninitialized{}, a.bits());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }

  template <std::integral I>
  friend Real operator+(const Real& a, I b) { Real r(a); r += b; return r; }
  template <std::integral I>
  friend Real operator+(I a, const Real& b) { Real r(b); r += a; return r; }
  template <std::integral I>
  friend Real operator-(const Real& a, I b) { Real r(a); r -= b; return r; }
  template <std::integral I>
  friend Real operator-(I a, const Real& b) {
    Real r(uninitialized{}, b.bits());
    mpfr_si_sub(r.v_, static_cast<long>(a), b.v_, MPFR_RNDN);
    return r;
  }
  template <std::integral I>
  friend Real operator*(const Real& a, I b) { Real r(a); r *= b; return r; }
  template <std::integral I>
  friend Real operator*(I a, const Real& b) { Real r(b); r *= a; return r; }
  template <std::integral I>
  friend Real operator/(const Real& a, I b) { Real r(a); r /= b; return r; }
  template <std::integral I>
  friend Real operator/(I a, const Real& b) {
    Real r(uninitialized{}, b.bits());
    mpfr_si_div(r.v_, static_cast<long>(a), b.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

  friend Real abs(const Real& x) { return unary(x, mpfr_abs); }
  friend Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
  friend Real exp(const Real& x) { return unary(x, mpfr_exp); }
  friend Real log(const Real& x) { return unary(x, mpfr_log); }
  friend Real atan(const Real& x) { return unary(x, mpfr_atan); }
  friend Real tgamma(const Real& x) { return unary(x, mpfr_gamma); }
  friend Real floor(const Real& x) {
    Real r(uninitialized{}, x.bits());
    mpfr_floor(r.v_, x.v_);
    return r;
  }
  friend Real ceil(const Real& x) {
    Real r(uninitialized{}, x.bits());
    mpfr_ceil(r.v_, x.v_);
    return r;
  }
  friend Real pow(const Real& x, const Real& y) { return binary(x, y, mpfr_pow); }
  friend Real pow(const Real& x, long n) {
    Real r(uninitialized{}, x.bits());
    mpfr_pow_si(r.v_, x.v_, n, MPFR_RNDN);
    return r;
  }
  friend Real ldexp(const Real& x, long e) {
    Real r(uninitialized{}, x.bits());
    mpfr_mul_2si(r.v_, x.v_, e, MPFR_RNDN);
    return r;
  }

  friend std::ostream& operator<<(std::ostream& os, const Real& x) {
    return os << x.to_scientific(std::max(x.digits(), 1));
  }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  struct uninitialized {};
  Real(uninitialized, mpfr_prec_t bits) { init(bits); }

  void init(mpfr_prec_t bits) { mpfr_init2(v_, std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN)); }

  void widen(const Real& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  }

  static Real pow10_at(int e, mpfr_prec_t bits) {
    Real r(uninitialized{}, bits);
    mpfr_ui_pow_ui(r.v_, 10, static_cast<unsigned long>(std::abs(e)), MPFR_RNDN);
    if (e < 0) mpfr_ui_div(r.v_, 1, r.v_, MPFR_RNDN);
    return r;
  }

  template <class F>
  static Real binary(const Real& a, const Real& b, F f) {
    Real r(uninitialized{}, std::max(a.bits(), b.bits()));
    f(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  template <class F>
  static Real unary(const Real& a, F f) {
    Real r(uninitialized{}, a.bits());
    f(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return b < a ? b : a; }

}  // namespace ljscat::mp
