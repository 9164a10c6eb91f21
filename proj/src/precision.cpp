#include "flatdirac/precision.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "flatdirac/error.hpp"

namespace flatdirac {

void Precision::validate() const {
  if (mantissa_bits < 53) throw InvalidArgument("precision must be at least 53 mantissa bits");
}

unsigned bits_to_digits10(int bits) {
  // digits10 such that the backend carries at least `bits` mantissa bits
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(const Precision& p)
    : previous_digits10_(HighReal::default_precision()) {
  p.validate();
  HighReal::default_precision(bits_to_digits10(p.mantissa_bits));
}

PrecisionScope::~PrecisionScope() { HighReal::default_precision(previous_digits10_); }

template <>
double parse_real<double>(const std::string& text) {
  double x = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first != last && *first == ' ') ++first;
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) throw InvalidArgument("not a real number: '" + text + "'");
  return x;
}

template <>
HighReal parse_real<HighReal>(const std::string& text) {
  // validate the syntax with the double parser first
  (void)parse_real<double>(text);
  return HighReal(text);
}

std::string to_decimal_string(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string to_decimal_string(const HighReal& x) {
  if (x == 0) return "0";
  return x.str(0, std::ios_base::scientific);
}

}  // namespace flatdirac
