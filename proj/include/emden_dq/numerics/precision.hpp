#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ios>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace emden_dq {

/// Software multiprecision scalar. Precision is carried per value; new values
/// take the thread's active default set by ScopedPrecision.
using mp_real = boost::multiprecision::mpfr_float;

enum class PrecisionMode { native_double, multiprecision };

/// Whether ill-conditioned interpolation solves may run with extra digits.
enum class GuardPolicy { automatic, off };

inline constexpr unsigned kDefaultDigits = 50;
inline constexpr unsigned kNativeDigits = 15;

template <class Real>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool is_multiprecision = false;

  static unsigned active_digits() noexcept { return kNativeDigits; }
  static unsigned digits_of(double) noexcept { return kNativeDigits; }
  static double with_digits(double v, unsigned) noexcept { return v; }

  static double parse(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw std::invalid_argument("not a number: " + std::string(text));
    }
    return v;
  }

  /// significant == 0 selects the shortest round-trip representation.
  static std::string format(double v, int significant) {
    char buf[64];
    auto res = significant > 0
                   ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific,
                                   significant - 1)
                   : std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
    return std::string(buf, res.ptr);
  }
};

template <>
struct scalar_traits<mp_real> {
  static constexpr bool is_multiprecision = true;

  static unsigned active_digits() { return mp_real::default_precision(); }
  static unsigned digits_of(const mp_real& v) { return v.precision(); }
  static mp_real with_digits(const mp_real& v, unsigned digits) { return mp_real(v, digits); }

  static mp_real parse(std::string_view text) {
    try {
      return mp_real(std::string(text));
    } catch (const std::runtime_error&) {
      throw std::invalid_argument("not a number: " + std::string(text));
    }
  }

  static std::string format(const mp_real& v, int significant) {
    if (significant <= 0) {
      // digits10 + 3 covers the binary rounding of an mpfr value of that precision.
      significant = static_cast<int>(v.precision()) + 3;
    }
    return v.str(significant, std::ios_base::scientific);
  }
};

template <class Real>
Real from_string(std::string_view text) {
  return scalar_traits<Real>::parse(text);
}

template <class Real>
std::string to_string(const Real& v, int significant = 0) {
  return scalar_traits<Real>::format(v, significant);
}

template <class Real>
unsigned active_digits() {
  return scalar_traits<Real>::active_digits();
}

/// 10^e at the active precision.
template <class Real>
Real pow10(int e) {
  using std::pow;
  return pow(Real(10), Real(e));
}

template <class Real>
bool is_finite(const Real& v) {
  using std::isfinite;
  return static_cast<bool>(isfinite(v));
}

template <class Real>
double log10_magnitude(const Real& v) {
  using std::abs;
  using std::log10;
  return static_cast<double>(log10(abs(v)));
}

/// Sets the default multiprecision digits for the current scope.
///
/// Boost 1.74 keeps this default process-wide, so concurrent solves must agree
/// on precision or be serialised.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned digits) : previous_(mp_real::default_precision()) {
    mp_real::default_precision(digits);
  }
  ~ScopedPrecision() { mp_real::default_precision(previous_); }

  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned previous_;
};

/// Run-scoped working precision.
struct PrecisionContext {
  unsigned decimal_digits = kDefaultDigits;
  PrecisionMode mode = PrecisionMode::multiprecision;
  GuardPolicy guard = GuardPolicy::automatic;
  /// Upper bound on extra digits the guard may add to an interpolation solve.
  unsigned max_guard_digits = 400;

  static PrecisionContext multiprecision(unsigned digits, GuardPolicy guard = GuardPolicy::automatic) {
    if (digits < kNativeDigits) {
      throw std::invalid_argument("decimal_digits must be at least 15");
    }
    PrecisionContext ctx;
    ctx.decimal_digits = digits;
    ctx.guard = guard;
    return ctx;
  }

  static PrecisionContext native_double() {
    PrecisionContext ctx;
    ctx.decimal_digits = kNativeDigits;
    ctx.mode = PrecisionMode::native_double;
    ctx.guard = GuardPolicy::off;
    return ctx;
  }

  /// Default context, with EMDEN_DQ_DIGITS overriding the digit count.
  static PrecisionContext from_environment() {
    unsigned digits = kDefaultDigits;
    if (const char* env = std::getenv("EMDEN_DQ_DIGITS"); env != nullptr && *env != '\0') {
      std::string_view text(env);
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), digits);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("EMDEN_DQ_DIGITS is not an integer: " + std::string(text));
      }
    }
    return multiprecision(digits);
  }

  [[nodiscard]] ScopedPrecision activate() const { return ScopedPrecision(decimal_digits); }

  template <class Real>
  void require_scalar() const {
    const bool mp = scalar_traits<Real>::is_multiprecision;
    if (mp != (mode == PrecisionMode::multiprecision)) {
      throw std::invalid_argument("scalar type does not match precision mode");
    }
  }
};

}  // namespace emden_dq
