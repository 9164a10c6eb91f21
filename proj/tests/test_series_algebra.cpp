#include <cmath>
#include <complex>

#include "doctest.h"
#include "flatdirac/error.hpp"
#include "flatdirac/jet.hpp"
#include "flatdirac/precision.hpp"
#include "oracles.hpp"

using namespace flatdirac;

namespace {

using Jet = TruncatedJet<double>;

Jet random_jet(CounterRng& rng, int order, double c0 = 0.0) {
  Jet j(order);
  for (int k = 0; k <= order; ++k) j[k] = Complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
  if (c0 != 0.0) j[0] = Complex<double>(c0, 0.0);
  return j;
}

double max_diff(const Jet& a, const Jet& b) {
  double m = 0;
  for (int k = 0; k <= a.order(); ++k) m = std::max(m, abs(a[k] - b[k]));
  return m;
}

Jet from_complex(const std::vector<oracle::cd>& c) {
  Jet j(static_cast<int>(c.size()) - 1);
  for (std::size_t k = 0; k < c.size(); ++k) j[static_cast<int>(k)] = Complex<double>(c[k].real(), c[k].imag());
  return j;
}

}  // namespace

TEST_CASE("jet product matches brute-force convolution") {
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 14;
    const Jet a = random_jet(rng, n);
    const Jet b = random_jet(rng, n);
    std::vector<std::complex<double>> ca, cb;
    for (int k = 0; k <= n; ++k) {
      ca.emplace_back(a[k].re, a[k].im);
      cb.emplace_back(b[k].re, b[k].im);
    }
    const auto ref = oracle::poly_mul(ca, cb, static_cast<std::size_t>(n + 1));
    CHECK(max_diff(jet_mul(a, b), from_complex(ref)) < 1e-13);
  }
}

TEST_CASE("order mismatch is rejected") {
  CHECK_THROWS_AS(jet_mul(Jet(3), Jet(4)), InvalidArgument);
  CHECK_THROWS_AS(Jet(3) + Jet(2), InvalidArgument);
  CHECK_THROWS_AS(Jet(-1), InvalidArgument);
  CHECK_THROWS_AS(Jet::from_coefficients({}), InvalidArgument);
  CHECK_THROWS_AS(Jet::from_real({1.0, std::nan("")}), InvalidArgument);
}

TEST_CASE("division and square root invert multiplication") {
  CounterRng rng(12, 0);
  const Jet a = random_jet(rng, 12);
  const Jet b = random_jet(rng, 12, 1.5);
  CHECK(max_diff(jet_mul(jet_div(a, b), b), a) < 1e-12);
  const Jet s = jet_sqrt(b);
  CHECK(max_diff(jet_mul(s, s), b) < 1e-12);
  CHECK_THROWS_AS(jet_div(a, Jet(12)), InvalidArgument);
  CHECK_THROWS_AS(jet_sqrt(Jet(12)), InvalidArgument);
}

TEST_CASE("derivative and integral") {
  const Jet p = Jet::from_real({1, 2, 3, 4});
  const Jet d = p.derivative();
  CHECK(d[0].re == 2);
  CHECK(d[1].re == 6);
  CHECK(d[2].re == 12);
  CHECK(d[3].re == 0);
  const Jet back = d.integral(Complex<double>(1.0));
  CHECK(max_diff(back, p) == 0);
  CHECK(p.evaluate(2.0).re == doctest::Approx(1 + 4 + 12 + 32));
  CHECK(p.times_variable()[1].re == 1);
}

TEST_CASE("cos and sin of a jet match the contour-integral oracle") {
  // x(ξ) = 0.3 + ξ - 0.2 ξ²
  const Jet x = Jet::from_real({0.3, 1.0, -0.2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  const auto [c, s] = jet_cos_sin(x);
  auto xf = [](oracle::cd z) { return 0.3 + z - 0.2 * z * z; };
  const auto rc = oracle::cauchy_taylor([&](oracle::cd z) { return std::cos(xf(z)); }, 12);
  const auto rs = oracle::cauchy_taylor([&](oracle::cd z) { return std::sin(xf(z)); }, 12);
  CHECK(max_diff(c, from_complex(rc)) < 1e-13);
  CHECK(max_diff(s, from_complex(rs)) < 1e-13);
  CHECK_THROWS_AS(sin_cos_zero_constant(x), InvalidArgument);
}

TEST_CASE("omega jets are exact in binary arithmetic") {
  const int n = 12;
  const Jet w = omega_jet<double>(n);
  const Jet iw = inv_omega_jet<double>(n);
  const Jet w2 = jet_mul(w, w);
  CHECK(w2[0].re == 1.0);
  CHECK(w2[2].re == 1.0);
  for (int k = 1; k <= n; ++k)
    if (k != 2) CHECK(w2[k].re == 0.0);
  const Jet one = jet_mul(w, iw);
  CHECK(one[0].re == 1.0);
  for (int k = 1; k <= n; ++k) CHECK(one[k].re == 0.0);
  CHECK(w[4].re == -0.125);
}

TEST_CASE("cos(tω) and sin(tω) jets against the oracle") {
  for (double t : {0.5, 1.7, 4.1}) {
    const auto [c, s] = cos_sin_t_omega_jet(t, 12);
    const auto rc = oracle::cauchy_taylor([&](oracle::cd z) { return std::cos(t * std::sqrt(1.0 + z * z)); }, 12);
    // sin(tω) is odd in ω, so sample inside the unit disk where the principal root is analytic
    const auto rs =
        oracle::cauchy_taylor([&](oracle::cd z) { return std::sin(t * std::sqrt(1.0 + z * z)); }, 12, 0.5);
    CHECK(max_diff(c, from_complex(rc)) < 1e-12);
    CHECK(max_diff(s, from_complex(rs)) < 1e-9);
  }
}

TEST_CASE("jets in high precision agree with hardware jets") {
  PrecisionScope scope(Precision::high(256));
  const auto [ch, sh] = cos_sin_t_omega_jet(HighReal("1.7"), 12);
  const auto [cd, sd] = cos_sin_t_omega_jet(1.7, 12);
  for (int k = 0; k <= 12; ++k) {
    CHECK(std::abs(to_double(ch[k].re) - cd[k].re) < 1e-14);
    CHECK(std::abs(to_double(sh[k].re) - sd[k].re) < 1e-14);
  }
  const TruncatedJet<HighReal> w = omega_jet<HighReal>(12);
  const TruncatedJet<HighReal> w2 = jet_mul(w, w);
  CHECK(w2[2].re == HighReal(1));
  CHECK(w2[4].re == HighReal(0));
}

TEST_CASE("precision helpers") {
  CHECK_THROWS_AS(Precision{52}.validate(), InvalidArgument);
  CHECK(Precision::hardware().is_hardware());
  CHECK(bits_to_digits10(53) == 17);
  CHECK(parse_real<double>("0.25") == 0.25);
  CHECK_THROWS_AS(parse_real<double>("abc"), InvalidArgument);
  CHECK(to_decimal_string(0.1) == "0.1");
  PrecisionScope scope(Precision::high(256));
  const HighReal x = parse_real<HighReal>("0.1");
  CHECK(abs(x * 10 - 1) < HighReal("1e-70"));
  CHECK(parse_real<HighReal>(to_decimal_string(x)) == x);
}
