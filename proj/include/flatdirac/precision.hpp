#pragma once

#include <cmath>
#include <string>
#include <type_traits>

#include <boost/multiprecision/mpfr.hpp>

namespace flatdirac {

// Runtime-precision binary floating point used for refinement and
// certification. Expression templates are off so `auto` is always a value.
using HighReal = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

struct Precision {
  static constexpr int kSafetyMarginBits = 10;

  int mantissa_bits = 53;

  static Precision hardware() { return Precision{53}; }
  static Precision high(int bits = 256) { return Precision{bits}; }

  // 2^(-mantissa_bits + safety margin).
  double abs_tol() const { return std::ldexp(1.0, -mantissa_bits + kSafetyMarginBits); }

  bool is_hardware() const { return mantissa_bits == 53; }

  // Throws InvalidArgument when mantissa_bits < 53.
  void validate() const;
};

// Sets the working precision of HighReal for its lifetime. The backend keeps
// one process-wide default, so concurrent work must share a precision.
class PrecisionScope {
 public:
  explicit PrecisionScope(const Precision& p);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned previous_digits10_;
};

unsigned bits_to_digits10(int bits);

template <class T>
inline constexpr bool is_high_real_v = std::is_same_v<T, HighReal>;

// Parse a decimal string at the current working precision.
template <class T>
T parse_real(const std::string& text);

// Shortest round-trip text for double; all significant digits for HighReal.
std::string to_decimal_string(double x);
std::string to_decimal_string(const HighReal& x);

inline double to_double(double x) { return x; }
inline double to_double(const HighReal& x) { return x.convert_to<double>(); }

template <class T>
T pi() {
  using std::acos;
  return acos(T(-1));
}

}  // namespace flatdirac
