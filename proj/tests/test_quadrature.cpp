#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vortexem/current.hpp"
#include "vortexem/errors.hpp"
#include "vortexem/quadrature.hpp"

using namespace vortexem;

namespace {

const double kPi = std::numbers::pi;
const double kTiny = 1e-300;

PacketParams packet(int ell, double sigma) {
  PacketParams p;
  p.ell = ell;
  p.sigma = sigma;
  return p;
}

double gaussian(double rho, double, double z) { return std::exp(-(rho * rho + z * z)); }

}  // namespace

TEST_CASE("Gauss-Kronrod rule") {
  const auto& x = GaussKronrod15::nodes();
  const auto& wk = GaussKronrod15::kronrod_weights();
  const auto& wg = GaussKronrod15::gauss_weights();
  // Kronrod exact to degree 22, embedded Gauss to degree 13.
  for (int d = 0; d <= 22; ++d) {
    double k = 0.0, gs = 0.0;
    for (int i = 0; i < 15; ++i) {
      k += wk[i] * std::pow(x[i], d);
      gs += wg[i] * std::pow(x[i], d);
    }
    const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
    CHECK(k == doctest::Approx(exact).epsilon(1e-14));
    if (d <= 13) CHECK(gs == doctest::Approx(exact).epsilon(1e-14));
  }
}

TEST_CASE("Gauss-Legendre rule") {
  for (int n : {1, 2, 5, 12, 20}) {
    const GaussLegendreRule r = gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    for (int i = 1; i < n; ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) < 1e-14);
    }
  }
  const GaussLegendreRule two = gauss_legendre(2);
  CHECK(two.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}

TEST_CASE("Gaussian integral") {
  for (double tol : {1e-6, 1e-10, 1e-12}) {
    const QuadResult r = integrate_cyl(gaussian, {12.0, -12.0, 12.0, 1, false}, tol, kTiny);
    CHECK(std::abs(r.value - std::pow(kPi, 1.5)) <= tol * std::pow(kPi, 1.5));
    CHECK(r.error_estimate <= tol * r.value);
    CHECK(r.evaluations > 0);
  }
}

TEST_CASE("normalized density and its second moment") {
  const PacketParams p2 = packet(2, 0.2);
  const double ext = 5.0 * 1.0 / p2.sigma * 3.0;
  const auto rho_density = [&](double rho, double phi, double z) { return charge_density(p2, {rho, phi, z}, 0.0); };
  CHECK(integrate_cyl(rho_density, {ext, -ext, ext, 1, true}, 1e-10, 1e-15).value == doctest::Approx(1.0).epsilon(1e-9));

  const PacketParams p1 = packet(2, 1.0);
  const auto second = [&](double rho, double phi, double z) { return rho * rho * charge_density(p1, {rho, phi, z}, 0.0); };
  CHECK(integrate_cyl(second, {15.0, -15.0, 15.0, 1, false}, 1e-10, 1e-15).value ==
        doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("linearity") {
  const ScalarIntegrand f = gaussian;
  const ScalarIntegrand g = [](double rho, double phi, double z) {
    return std::exp(-0.5 * (rho * rho + z * z)) * (1.0 + 0.3 * std::cos(phi) * std::cos(phi));
  };
  const IntegrationDomain dom{15.0, -15.0, 15.0, 1, false};
  const double a = 2.5, b = -0.75, tol = 1e-11;
  const QuadResult rf = integrate_cyl(f, dom, tol, kTiny);
  const QuadResult rg = integrate_cyl(g, dom, tol, kTiny);
  const QuadResult rs = integrate_cyl([&](double r, double p, double z) { return a * f(r, p, z) + b * g(r, p, z); }, dom,
                                      tol, kTiny);
  const double combined = std::abs(a) * rf.error_estimate + std::abs(b) * rg.error_estimate + rs.error_estimate;
  CHECK(std::abs(rs.value - (a * rf.value + b * rg.value)) <= std::max(combined, 1e-13 * std::abs(rs.value)));
}

TEST_CASE("azimuthal shortcuts") {
  const ScalarIntegrand f = [](double rho, double, double z) { return rho * std::exp(-rho * rho - std::abs(z)); };
  const QuadResult full = integrate_cyl(f, {10.0, -40.0, 40.0, 1, false}, 1e-12, kTiny);
  const QuadResult axi = integrate_cyl(f, {10.0, -40.0, 40.0, 1, true}, 1e-12, kTiny);
  CHECK(std::abs(full.value - axi.value) <= 1e-12 * std::abs(axi.value));
  CHECK(axi.value == doctest::Approx(2.0 * kPi * 2.0 * std::sqrt(kPi) / 4.0).epsilon(1e-11));

  // cos^2(3 phi) has period 2 pi / 3
  const ScalarIntegrand h = [](double rho, double phi, double z) {
    return std::exp(-rho * rho - z * z) * std::cos(3.0 * phi) * std::cos(3.0 * phi);
  };
  const QuadResult whole = integrate_cyl(h, {10.0, -10.0, 10.0, 1, false}, 1e-12, kTiny);
  const QuadResult folded = integrate_cyl(h, {10.0, -10.0, 10.0, 3, false}, 1e-12, kTiny);
  CHECK(whole.value == doctest::Approx(0.5 * std::pow(kPi, 1.5)).epsilon(1e-11));
  CHECK(folded.value == doctest::Approx(whole.value).epsilon(1e-11));
}

TEST_CASE("azimuthal refinement") {
  const ScalarIntegrand f = [](double rho, double phi, double z) {
    return std::exp(-rho * rho - z * z + 2.0 * std::cos(phi));
  };
  // int exp(2 cos phi) dphi = 2 pi I_0(2)
  const double i0_2 = 2.2795853023360673;
  const QuadResult r = integrate_cyl(f, {10.0, -10.0, 10.0, 1, false}, 1e-12, kTiny);
  CHECK(r.value == doctest::Approx(std::sqrt(kPi) * 0.5 * 2.0 * kPi * i0_2).epsilon(1e-11));
}

TEST_CASE("tighter tolerance never loosens the error estimate") {
  const ScalarIntegrand f = [](double rho, double phi, double z) {
    return std::exp(-rho * rho - (z - 0.3) * (z - 0.3)) * (1.0 + 0.5 * std::sin(phi)) / (1.0 + rho);
  };
  double prev = std::numeric_limits<double>::infinity();
  for (double tol = 1e-4; tol >= 1e-12; tol *= 0.5) {
    const QuadResult r = integrate_cyl(f, {10.0, -10.0, 10.0, 1, false}, tol, kTiny);
    CHECK(r.error_estimate <= prev);
    prev = r.error_estimate;
  }
}

TEST_CASE("vector integration") {
  const VectorIntegrand f = [](double rho, double, double z, std::span<double> out) {
    const double g = std::exp(-rho * rho - z * z);
    out[0] = g;
    out[1] = rho * rho * g;
    out[2] = z * g;
  };
  const double abs_tol[3] = {kTiny, kTiny, 1e-14};
  const VectorQuadResult r = integrate_cyl(f, 3, {12.0, -12.0, 12.0, 1, false}, 1e-12, abs_tol);
  CHECK(r.value[0] == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-12));
  CHECK(r.value[1] == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-12));
  CHECK(std::abs(r.value[2]) < 1e-13);
  CHECK(r.error_estimate.size() == 3);
}

TEST_CASE("budget exhaustion keeps the best estimate") {
  QuadOptions o;
  o.max_evaluations = 2000;
  const ScalarIntegrand spiky = [](double rho, double, double z) {
    return std::exp(-1e4 * ((rho - 0.37) * (rho - 0.37) + (z - 0.11) * (z - 0.11)));
  };
  try {
    integrate_cyl(spiky, {1.0, -1.0, 1.0, 1, true}, 1e-13, kTiny, o);
    FAIL("expected AccuracyError");
  } catch (const AccuracyError& e) {
    CHECK(std::isfinite(e.estimate()));
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(integrate_cyl(gaussian, {-1.0, -1.0, 1.0, 1, false}, 1e-6, kTiny), DomainError);
  CHECK_THROWS_AS(integrate_cyl(gaussian, {1.0, 1.0, -1.0, 1, false}, 1e-6, kTiny), DomainError);
  CHECK_THROWS_AS(integrate_cyl(gaussian, {1.0, -1.0, 1.0, 0, false}, 1e-6, kTiny), DomainError);
  CHECK_THROWS_AS(integrate_cyl(gaussian, {1.0, -1.0, 1.0, 1, false}, 0.0, kTiny), DomainError);
  CHECK_THROWS_AS(integrate_cyl(gaussian, {1.0, -1.0, 1.0, 1, false}, 1e-6, 0.0), DomainError);
}
