#include "wpgap/trace.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace wpgap;

namespace {

// Composite Simpson, independent of the module's Gauss-Legendre panels.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  double h = (b - a) / n, s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(a + i * h);
  return s * h / 3;
}

}  // namespace

TEST_CASE("psi is a normalized bump and H(0) is its L2 norm") {
  CHECK(simpson(TestFunction::psi, -0.5, 0.5) == doctest::Approx(1).epsilon(1e-9));
  double h0 = simpson([](double x) { return TestFunction::psi(x) * TestFunction::psi(x); }, -0.5, 0.5);
  CHECK(TestFunction(1).H0() == doctest::Approx(h0).epsilon(1e-9));
  CHECK(TestFunction(1).H0() == doctest::Approx(1.35023362602).epsilon(1e-10));
  CHECK(TestFunction::psi(0.5) == 0);
  CHECK(TestFunction(1).H(1.0) == 0);
}

TEST_CASE("Fourier transform at 0 is 1 and matches quadrature") {
  TestFunction tf(1);
  CHECK(tf.fourier(0) == doctest::Approx(1).epsilon(1e-12));
  for (double r : {0.0, 0.7, 3.0})
    CHECK(tf.fourier(r) == doctest::Approx(tf.fourierByQuadrature(r)).epsilon(1e-10));
}

TEST_CASE("H_L at i/2 equals twice the integral against cosh(l/2)") {
  for (double L : {2.0, 5.0, 10.0, 20.0}) {
    TestFunction tf(L);
    double direct = 2 * simpson([&](double l) { return tf.HL(l) * std::cosh(l / 2); }, 0, L);
    CHECK(tf.fourier(std::complex<double>(0, 0.5)) == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("D^0 is the identity") {
  TestFunction tf(5);
  for (double l : {0.0, 1.0, 3.3}) CHECK(tf.DmHL(0, l) == doctest::Approx(tf.HL(l)).epsilon(1e-13));
}

TEST_CASE("Fourier multiplier (1/4 + r^2)^m for m <= 3") {
  TestFunction tf(4);
  for (int m = 1; m <= 3; ++m)
    for (double r : {0.0, 0.3, 1.0}) {
      double expect = std::pow(0.25 + r * r, m) * tf.fourier(r);
      CHECK(std::abs(tf.fourierOfDm(m, r) - expect) <= 1e-8);
    }
}

TEST_CASE("cancellation is L-independent and equals -H(0)") {
  double h0 = TestFunction(1).H0();
  for (double L : {5.0, 10.0, 20.0}) {
    auto r = cancellationDemo(TestFunction(L), 1);
    CHECK(r.deviation <= 1e-8);
    CHECK(r.cancelled == doctest::Approx(-h0).epsilon(1e-8));
  }
}

TEST_CASE("higher m leaves -(D^{m-1} H_L)(0)") {
  TestFunction tf(6);
  auto r = cancellationDemo(tf, 2);
  CHECK(r.deviation <= 1e-8);
  CHECK(r.reference == doctest::Approx(-tf.DmHL(1, 0)).epsilon(1e-14));
  CHECK_THROWS_AS(cancellationDemo(tf, 7), std::invalid_argument);
}

TEST_CASE("D H_L changes sign") {
  CHECK(signChanges(TestFunction(10), 1) >= 1);
}

TEST_CASE("counting bound constants") {
  auto c = countingBound(1, 0, [](double) { return 0.0; });
  CHECK(c.countBound == doctest::Approx(205));
  CHECK(c.sumBound == 0);
}

TEST_CASE("topological term is linear in g - 1 and below C_F L^2 g") {
  auto a = topologicalTerm(TestFunction(5), 3), b = topologicalTerm(TestFunction(5), 5);
  CHECK(b.value / a.value == doctest::Approx(2).epsilon(1e-12));
  auto s = topologicalScaling({5, 10, 20, 40}, 3);
  CHECK(s.boundHolds);
  // H_L(l) = H(l/L) makes the term decay; the fitted exponent is negative.
  CHECK(s.exponent < 0);
}

TEST_CASE("parameter selection at alpha = 0.1") {
  auto p = selectParameters(0.1, 0.01);
  CHECK(p.K == 4);
  CHECK(p.A == 12);
  CHECK(p.chiPlus == 36);
  CHECK(p.chiPlusPrime == 28);
  CHECK(p.Q == 197);
  CHECK(p.feasible);
  CHECK(p.selfAudit());
}

TEST_CASE("smallest K for alpha just below 1/6") { CHECK(selectParameters(1.0 / 6 - 1e-6, 0.01).K == 2); }

TEST_CASE("out-of-range inputs are rejected") {
  CHECK_THROWS_AS(selectParameters(0.5, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(selectParameters(0.1, 0.24), std::invalid_argument);
  CHECK_THROWS_AS(selectParameters(0.1, 0.01, 100, [](long n) { return 50 - n; }), std::invalid_argument);
}

TEST_CASE("report json carries the no-spectrum note") {
  auto r = cancellationDemo(TestFunction(5), 1);
  CHECK(r.toJson().find("no spectrum is computed") != std::string::npos);
}
