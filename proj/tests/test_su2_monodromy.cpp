#include <cmath>

#include "doctest.h"
#include "flatdirac/error.hpp"
#include "flatdirac/su2.hpp"
#include "oracles.hpp"

using namespace flatdirac;

namespace {

double max_entry_diff(const UnitaryMatrix2<double>& a, const UnitaryMatrix2<double>& b) { return a.distance(b); }

}  // namespace

TEST_CASE("letters are in SU(2)") {
  for (double xi : {-2.0, 0.0, 0.3, 5.0}) {
    for (int s : {1, -1}) {
      const auto g = letter_at(s, 1.3, xi);
      CHECK(g.unitarity_defect() < 1e-14);
      CHECK(abs(g.det() - Complex<double>(1.0)) < 1e-14);
    }
  }
}

TEST_CASE("closed-form letter matches RK4 in the generator convention") {
  const Word<double> w({-1}, {0.7});
  const auto rk = ode_oracle(w, 0.4, 20000);
  CHECK(max_entry_diff(rk, letter_at(-1, 0.7, 0.4)) < 1e-12);
  CHECK_THROWS_AS(ode_oracle(w, 0.4, 10), InvalidArgument);
}

TEST_CASE("physical convention integrates the adjoint letter") {
  // i dû/dt = (ξσ3 - σ1) û on t ∈ [0, 0.7] at ξ = 0.4
  const Word<double> w({-1}, {0.7});
  const auto rk = ode_oracle(w, 0.4, 20000, OdeConvention::physical);
  CHECK(max_entry_diff(rk, letter_at(-1, 0.7, 0.4).adjoint()) < 1e-12);
}

TEST_CASE("word monodromy matches RK4 and has equal half trace in both conventions") {
  const Word<double> w({1, -1, 1, -1}, {1.1, 0.6, 2.0, 0.9});
  const auto m = word_at(w, 0.8);
  CHECK(max_entry_diff(ode_oracle(w, 0.8, 40000), m) < 1e-10);
  const auto phys = ode_oracle(w, 0.8, 40000, OdeConvention::physical);
  CHECK(abs(phys.half_trace() - m.half_trace()) < 1e-10);
}

TEST_CASE("single letter trace jet starts at cos(T)") {
  const Word<double> w({1}, {1.0});
  const auto tj = trace_jet(word_jet(w, 12), Precision::hardware());
  CHECK(tj.a(0) == doctest::Approx(std::cos(1.0)).epsilon(1e-15));
}

TEST_CASE("equal durations give a2 = 4(cos 2s - 1)") {
  for (double s : {0.5, 1.3, 2.2}) {
    const Word<double> w({1, -1, 1, -1}, {s, s, s, s});
    const auto tj = trace_jet(word_jet(w, 12), Precision::hardware());
    CHECK(tj.a(2) == doctest::Approx(4 * (std::cos(2 * s) - 1)).epsilon(1e-12));
  }
}

TEST_CASE("trace jet coefficients match the contour-integral oracle") {
  const std::vector<int> s{1, -1, 1, -1};
  const std::vector<double> t{4.088866559569492, 3.117488248716022, 2.615221023066265, 1.762750988714514};
  const auto ref = oracle::cauchy_taylor([&](oracle::cd z) { return oracle::half_trace(s, t, z); }, 12);
  const auto tj = trace_jet(word_jet(Word<double>(s, t), 12), Precision::hardware());
  for (int k = 0; k <= 12; ++k) {
    CHECK(std::abs(tj.raw[k].re - ref[static_cast<std::size_t>(k)].real()) < 1e-11);
    CHECK(std::abs(ref[static_cast<std::size_t>(k)].imag()) < 1e-11);
  }
}

TEST_CASE("matrix jet evaluates to the closed form near zero") {
  const Word<double> w({1, -1, -1}, {0.9, 1.4, 0.5});
  const auto mj = word_jet(w, 16);
  CHECK(max_entry_diff(mj.evaluate(0.05), word_at(w, 0.05)) < 1e-14);
  CHECK(max_entry_diff(mj.at_zero(), word_at(w, 0.0)) < 1e-15);
}

TEST_CASE("trace_jet rejects odd or imaginary content") {
  MatrixJet<double> m = MatrixJet<double>::identity(4);
  m(0, 0)[1] = Complex<double>(0.5, 0.0);
  CHECK_THROWS_AS(trace_jet(m, Precision::hardware()), ConsistencyError);
  MatrixJet<double> n = MatrixJet<double>::identity(4);
  n(1, 1)[2] = Complex<double>(0.0, 0.5);
  CHECK_THROWS_AS(trace_jet(n, Precision::hardware()), ConsistencyError);
}

TEST_CASE("duration jacobian jets agree with finite differences at 512 bits") {
  PrecisionScope scope(Precision::high(512));
  const Precision p = Precision::high(512);
  std::vector<HighReal> t{HighReal("1.1"), HighReal("0.6"), HighReal("2.0"), HighReal("0.9")};
  const Word<HighReal> w({1, -1, 1, -1}, t);
  const auto partials = word_t_jacobian_jet(w, 8);
  const HighReal h("1e-40");
  for (std::size_t j = 0; j < 4; ++j) {
    auto tp = t;
    auto tm = t;
    tp[j] += h;
    tm[j] -= h;
    const auto fp = trace_jet(word_jet(Word<HighReal>({1, -1, 1, -1}, tp), 8), p);
    const auto fm = trace_jet(word_jet(Word<HighReal>({1, -1, 1, -1}, tm), 8), p);
    const auto d = trace_jet(partials[j], p);
    for (int k = 0; k <= 8; k += 2) {
      const HighReal fd = (fp.a(k) - fm.a(k)) / (2 * h);
      CHECK(abs(fd - d.a(k)) < HighReal("1e-70"));
    }
  }
}

TEST_CASE("word validation") {
  CHECK_THROWS_AS(Word<double>({1, -1}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(Word<double>({}, {}), InvalidArgument);
  CHECK_THROWS_AS(Word<double>({2}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(Word<double>({1}, {0.0}), InvalidArgument);
  const auto w = Word<double>::alternating4({1, 2, 3, 4});
  CHECK(w.alternating());
  CHECK(w.period() == 10);
  CHECK(w.rotated(1).letters()[0].duration == 2);
}
