#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vortexem/errors.hpp"
#include "vortexem/fields_rest.hpp"
#include "vortexem/moments.hpp"
#include "vortexem/units.hpp"

using namespace vortexem;

namespace {

const double kPi = std::numbers::pi;

PacketParams packet(int ell, double sigma) {
  PacketParams p;
  p.ell = ell;
  p.sigma = sigma;
  return p;
}

struct Sampler {
  std::mt19937 g{17};
  double u(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
  // sin(theta) cos(theta) kept away from zero
  CylPoint far(const PacketParams& p, double rmin = 3.0, double rmax = 30.0) {
    const double scale = std::max(mean_radius(p, 0.0), sigma_perp(p, 0.0));
    double th = u(0.1, kPi / 2 - 0.1);
    if (u(0, 1) < 0.5) th = kPi - th;
    return CylPoint::from_spherical(scale * u(rmin, rmax), th, u(0.0, 2 * kPi));
  }
};

double rel(const FieldVectorCyl& a, const FieldVectorCyl& b) {
  const double d = std::hypot(a.e_rho - b.e_rho, a.e_phi - b.e_phi, a.e_z - b.e_z) +
                   std::hypot(a.h_rho - b.h_rho, a.h_phi - b.h_phi, a.h_z - b.h_z);
  return d / (b.e_norm() + b.h_norm());
}

}  // namespace

TEST_CASE("field vector arithmetic") {
  FieldVectorCyl a{1, 2, 3, 4, 5, 6};
  const FieldVectorCyl b{0.5, 0.5, 0.5, 1, 1, 1};
  const FieldVectorCyl c = a + b;
  CHECK(c.e_phi == 2.5);
  CHECK(c.h_z == 7.0);
  a += b;
  CHECK(a.h_rho == 5.0);
  CHECK(FieldVectorCyl{3, 0, 4, 0, 0, 0}.e_norm() == 5.0);
  CHECK(FieldVectorCyl{0, 0, 0, 0, 6, 8}.h_norm() == 10.0);
}

TEST_CASE("validity flags") {
  const PacketParams p = packet(4, 0.01);
  const double td = diffraction_time(p);
  const double core = mean_radius(p, 0.0);
  CHECK(field_validity(p, 2.0 * core, 0.5 * td) == Validity::valid);
  CHECK(field_validity(p, 0.99 * core, 0.0) == Validity::inside_core);
  CHECK(field_validity(p, 10.0 * core, 1.01 * td) == Validity::outside_time_window);
  CHECK(field_validity(p, 0.5 * core, 2.0 * td) == Validity::inside_core);
  CHECK(field_validity(p, mean_radius(p, td), td) == Validity::valid);
  CHECK(to_string(Validity::valid) == "valid");
  CHECK(to_string(Validity::inside_core) == "inside_core");
  CHECK(to_string(Validity::outside_time_window) == "outside_time_window");
  const FieldBreakdown f = rest_fields(p, {0.5 * core, 0.0, 0.0}, 0.0);
  CHECK(f.validity == Validity::inside_core);
  CHECK(std::isfinite(f.total.e_rho));
}

TEST_CASE("input checks") {
  CHECK_THROWS_AS(rest_fields(packet(1, 0.01), {0.0, 0.0, 0.0}, 0.0), SingularityError);
  PacketParams n1 = packet(1, 0.01);
  n1.n = 1;
  CHECK_THROWS_AS(rest_fields(n1, {1.0, 0.0, 0.0}, 0.0), UnsupportedModeError);
  PacketParams moving = packet(1, 0.01);
  moving.mean_p = 0.1;
  CHECK_THROWS_AS(rest_fields(moving, {1.0, 0.0, 0.0}, 0.0), DomainError);
}

TEST_CASE("structure of the sources") {
  Sampler s;
  for (int i = 0; i < 40; ++i) {
    const PacketParams p = packet(i % 2 ? 3 : -2, 0.01);
    const CylPoint pt = s.far(p);
    const double t = s.u(-1.5, 1.5) * diffraction_time(p);
    const FieldBreakdown f = rest_fields(p, pt, t);
    const double r = pt.r();
    CHECK(f.charge.e_rho == doctest::Approx(pt.rho / (r * r * r)).epsilon(1e-14));
    CHECK(f.charge.e_z == doctest::Approx(pt.z / (r * r * r)).epsilon(1e-14));
    CHECK(f.charge.h_norm() == 0.0);
    CHECK(f.dipole.e_norm() == 0.0);
    CHECK(f.dipole.h_phi == 0.0);
    CHECK(f.quadrupole.h_rho == 0.0);
    CHECK(f.quadrupole.h_z == 0.0);
    CHECK(f.total.e_phi == 0.0);
    const FieldVectorCyl sum = f.charge + f.dipole + f.quadrupole;
    CHECK(sum.e_rho == f.total.e_rho);
    CHECK(sum.h_phi == f.total.h_phi);
  }
}

TEST_CASE("no OAM means a pure Coulomb field") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const PacketParams p = packet(0, 0.01);
    const double t = s.u(-1.0, 1.0) * diffraction_time(p);
    const FieldBreakdown f = rest_fields(p, s.far(p), t);
    CHECK(f.dipole.h_norm() == 0.0);
    CHECK(f.quadrupole.e_norm() == 0.0);
    CHECK(f.quadrupole.h_norm() == 0.0);
    CHECK(f.total.e_rho == f.charge.e_rho);
    CHECK(f.total.h_norm() == 0.0);
  }
  CHECK_THROWS_AS(asymmetry_rest(packet(0, 0.01), 1.0), UndefinedAsymmetryError);
  CHECK_THROWS_AS(asymmetry_bound(packet(0, 0.01)), UndefinedAsymmetryError);
}

TEST_CASE("no azimuthal magnetic field at t = 0") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const PacketParams p = packet(5, 0.01);
    const FieldBreakdown f = rest_fields(p, s.far(p, 1.0, 100.0), 0.0);
    CHECK(f.quadrupole.h_phi == 0.0);
    CHECK(f.total.h_phi == 0.0);
  }
}

TEST_CASE("asymmetry values") {
  const PacketParams p = packet(3, 0.01);
  CHECK(asymmetry_rest(p, 0.0).value == 0.0);
  CHECK(asymmetry_rest(p, diffraction_time(p)).value == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(asymmetry_rest(packet(-3, 0.01), diffraction_time(p)).value == doctest::Approx(1.0).epsilon(1e-15));
  const AsymmetryValue a = asymmetry_rest(p, 123.0);
  CHECK(a.t == 123.0);
  CHECK(a.ell_sign == 1);
  CHECK(a.sigma_perp0 == doctest::Approx(100.0));

  const auto c = units::Constants::rounded();
  PacketParams wide;
  wide.ell = 1;
  wide.sigma = c.lambda_c_cm / 1e-3;  // sigma_perp(0) = 10 um
  const double t = 1e-6 / c.t_c_s;
  const double mag = std::abs(asymmetry_rest(wide, t).value);
  CHECK(mag == doctest::Approx(1e-6 / 8.547e-7).epsilon(1e-3));
  // Order-of-magnitude estimate |A| ~ t / 1e-5 s
  const double estimate = 1e-6 / 1e-5;
  CHECK(mag / estimate <= 20.0);
  CHECK(mag / estimate >= 1.0 / 20.0);
}

TEST_CASE("asymmetry bound") {
  Sampler s;
  for (int ell : {1, -1, 7, -7, 64}) {
    const PacketParams p = packet(ell, s.u(1e-5, 0.05));
    CHECK(std::abs(asymmetry_bound(p) - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(asymmetry_rest(p, diffraction_time(p)).value) - 1.0) <= 1e-12);
  }
  CHECK(asymmetry_bound(packet(7, 0.01)) == asymmetry_bound(packet(-7, 0.01)));
  for (int i = 0; i < 100; ++i) {
    const PacketParams p = packet(i % 2 ? 2 : -5, 0.01);
    const double t = s.u(-1.0, 1.0) * diffraction_time(p);
    const FieldBreakdown f = rest_fields(p, s.far(p), t);
    CHECK(std::abs(f.quadrupole.h_phi) <= std::abs(f.dipole.h_rho) * (1.0 + 1e-12));
  }
}

TEST_CASE("field ratio reproduces the asymmetry") {
  Sampler s;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PacketParams p = packet(static_cast<int>(s.u(1, 9)) * (i % 2 ? 1 : -1), s.u(1e-4, 0.05));
    const double t = s.u(-1.0, 1.0) * diffraction_time(p);
    const FieldBreakdown f = rest_fields(p, s.far(p), t);
    const double a = asymmetry_rest(p, t).value;
    worst = std::max(worst, std::abs(f.quadrupole.h_phi / f.dipole.h_rho - a) / std::abs(a));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("sign of the azimuthal field") {
  const PacketParams p = packet(5, 0.01);
  const double t = 0.5 * diffraction_time(p);
  for (double th : {kPi / 4, 3 * kPi / 4})
    for (double ts : {t, -t}) {
      const CylPoint pt = CylPoint::from_spherical(10.0 * mean_radius(p, ts), th, 0.0);
      const double h = rest_fields(p, pt, ts).quadrupole.h_phi;
      const double expect = -1.0 * (ts > 0 ? 1 : -1) * (std::cos(th) > 0 ? 1 : -1);
      CHECK(h * expect > 0.0);
    }
}

TEST_CASE("OAM parity") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const PacketParams p = packet(4, 0.01);
    const PacketParams q = packet(-4, 0.01);
    const CylPoint pt = s.far(p);
    const double t = s.u(-1, 1) * diffraction_time(p);
    const FieldBreakdown a = rest_fields(p, pt, t);
    const FieldBreakdown b = rest_fields(q, pt, t);
    CHECK(b.dipole.h_rho == -a.dipole.h_rho);
    CHECK(b.dipole.h_z == -a.dipole.h_z);
    CHECK(b.quadrupole.e_rho == a.quadrupole.e_rho);
    CHECK(b.quadrupole.e_z == a.quadrupole.e_z);
    CHECK(b.quadrupole.h_phi == a.quadrupole.h_phi);
  }
}

TEST_CASE("time parity with OAM flip") {
  Sampler s;
  for (int i = 0; i < 100; ++i) {
    const PacketParams p = packet(static_cast<int>(s.u(1, 8)), 0.01);
    const PacketParams q = packet(-p.ell, 0.01);
    const CylPoint pt = s.far(p);
    const double t = s.u(-1, 1) * diffraction_time(p);
    const FieldVectorCyl a = rest_fields(p, pt, t).total;
    const FieldVectorCyl b = rest_fields(q, pt, -t).total;
    CHECK(std::abs(b.e_rho - a.e_rho) <= 1e-12 * a.e_norm());
    CHECK(std::abs(b.e_z - a.e_z) <= 1e-12 * a.e_norm());
    CHECK(std::abs(b.h_rho + a.h_rho) <= 1e-12 * a.h_norm());
    CHECK(std::abs(b.h_phi + a.h_phi) <= 1e-12 * a.h_norm());
    CHECK(std::abs(b.h_z + a.h_z) <= 1e-12 * a.h_norm());
  }
}

TEST_CASE("closed form equals the general multipole formulas") {
  Sampler s;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PacketParams p = packet(static_cast<int>(s.u(-8, 9)), s.u(1e-3, 0.05));
    const double t = s.u(-2, 2) * diffraction_time(p);
    const CylPoint pt = CylPoint::from_spherical(
        (mean_radius(p, 0.0) + sigma_perp(p, 0.0)) * s.u(2.0, 50.0), s.u(0, kPi), s.u(0, 2 * kPi));
    const FieldBreakdown a = rest_fields(p, pt, t);
    const FieldBreakdown b = multipole_fields(p, pt, t);
    worst = std::max(worst, rel(b.total, a.total));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("static quadrupole field of an arbitrary tensor") {
  // Independent Cartesian evaluation of 5/2 n (n.Q.n)/r^4 - Q.n/r^4.
  Mat3 Q{{{1.0, 0.3, -0.2}, {0.3, -0.4, 0.5}, {-0.2, 0.5, -0.6}}};
  const CylPoint pt{2.0, 0.7, -1.3};
  const Vec3 x{pt.x(), pt.y(), pt.z};
  const double r = norm(x);
  const Vec3 n = x * (1.0 / r);
  const Vec3 qn = Q * n;
  const Vec3 e = n * (2.5 * dot(n, qn) / std::pow(r, 4)) - qn * (1.0 / std::pow(r, 4));
  const FieldVectorCyl f = static_quadrupole_field(Q, pt);
  const double c = std::cos(pt.phi), s = std::sin(pt.phi);
  CHECK(f.e_rho == doctest::Approx(e.x * c + e.y * s).epsilon(1e-14));
  CHECK(f.e_phi == doctest::Approx(-e.x * s + e.y * c).epsilon(1e-14));
  CHECK(f.e_z == doctest::Approx(e.z).epsilon(1e-14));
  CHECK(f.h_norm() == 0.0);
}

TEST_CASE("static part of the closed-form quadrupole") {
  // Two packets with the same <rho(0)>: (l = 1, sigma_perp) and (l = 4,
  // sigma_perp / 2). Their t = 0 quadrupole fields share the static term and
  // differ only in the part linear in kappa = |l| sigma^2, so extrapolating to
  // kappa = 0 isolates the static field of Q(0).
  const PacketParams a = packet(1, 0.01);
  const PacketParams b = packet(4, 0.02);
  REQUIRE(mean_radius(a, 0.0) == doctest::Approx(mean_radius(b, 0.0)).epsilon(1e-15));
  const double ka = std::abs(a.ell) * a.sigma * a.sigma;
  const double kb = std::abs(b.ell) * b.sigma * b.sigma;
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const CylPoint pt = s.far(a, 3.0, 20.0);
    const FieldVectorCyl fa = rest_fields(a, pt, 0.0).quadrupole;
    const FieldVectorCyl fb = rest_fields(b, pt, 0.0).quadrupole;
    const FieldVectorCyl st = static_quadrupole_field(analytic_moments(a, 0.0).Q, pt);
    const double er = (kb * fa.e_rho - ka * fb.e_rho) / (kb - ka);
    const double ez = (kb * fa.e_z - ka * fb.e_z) / (kb - ka);
    CHECK(std::abs(er - st.e_rho) <= 1e-12 * st.e_norm());
    CHECK(std::abs(ez - st.e_z) <= 1e-12 * st.e_norm());
  }
}

TEST_CASE("far-zone falloff") {
  const PacketParams p = packet(3, 0.01);
  const double t = 0.3 * diffraction_time(p);
  const double r0 = 10.0 * mean_radius(p, t);
  for (double th : {0.4, 1.1, 2.5}) {
    const FieldBreakdown a = rest_fields(p, CylPoint::from_spherical(r0, th, 0.0), t);
    const FieldBreakdown b = rest_fields(p, CylPoint::from_spherical(2 * r0, th, 0.0), t);
    CHECK(a.charge.e_norm() / b.charge.e_norm() == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(a.dipole.h_norm() / b.dipole.h_norm() == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(a.quadrupole.h_phi / b.quadrupole.h_phi == doctest::Approx(8.0).epsilon(1e-13));
  }
}
