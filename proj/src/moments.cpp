#include "vortexem/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "vortexem/current.hpp"
#include "vortexem/errors.hpp"

namespace vortexem {

namespace {

Mat3 quadrupole_shape(double scale) {
  Mat3 q{};
  q[0][0] = 0.5 * scale;
  q[1][1] = 0.5 * scale;
  q[2][2] = -scale;
  return q;
}

// Component layout of the moment integrand.
enum : std::size_t {
  kNorm = 0,
  kDip = 1,    // x, y, z
  kMag = 4,    // (r x j)_x, _y, _z
  kQuad = 7,   // xx, xy, xz, yy, yz, zz
  kFlux = 13,  // j_x, j_y, j_z
  kMomentDim = 16
};

}  // namespace

MultipoleSet analytic_moments(const PacketParams& p, double t) {
  if (p.n != 0) throw UnsupportedModeError("analytic_moments: closed form exists only for n = 0");
  MultipoleSet m;
  m.t = t;
  m.mu = {0.0, 0.0, p.ell / (2.0 * p.mass)};
  const double rho_mean = mean_radius(p, t);
  m.Q = quadrupole_shape(rho_mean * rho_mean);
  return m;
}

QuadrupoleHistory analytic_quadrupole_history(const PacketParams& p, double t) {
  if (p.n != 0)
    throw UnsupportedModeError("analytic_quadrupole_history: closed form exists only for n = 0");
  // <rho(t)>^2 = <rho(0)>^2 + K t^2 with K = |l| (sigma/m)^2
  const double k = std::abs(p.ell) * (p.sigma / p.mass) * (p.sigma / p.mass);
  const double r0 = mean_radius(p, 0.0);
  QuadrupoleHistory h;
  h.Q = quadrupole_shape(r0 * r0 + k * t * t);
  h.Q_dot = quadrupole_shape(2.0 * k * t);
  h.Q_ddot = quadrupole_shape(2.0 * k);
  return h;
}

double source_extent(const PacketParams& p, double t) {
  return sigma_perp(p, t) * (std::sqrt(2.0 * std::abs(p.ell) + 4.0 * p.n + 3.0) + 12.0);
}

MultipoleSet quadrature_moments(const PacketParams& p, double t, const MomentQuadratureOptions& opts) {
  p.validate();
  const double extent = source_extent(p, t);
  const double zc = p.mean_velocity() * t;
  IntegrationDomain dom{extent, zc - extent, zc + extent, 1, false};

  const VectorIntegrand f = [&](double rho, double phi, double z, std::span<double> out) {
    const CurrentVector j = probability_current(p, CylPoint{rho, phi, z}, t);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const Vec3 r{rho * c, rho * s, z};
    const Vec3 jc{j.j_rho * c - j.j_phi * s, j.j_rho * s + j.j_phi * c, j.j_z};
    const double r2 = dot(r, r);
    out[kNorm] = j.j0;
    for (int a = 0; a < 3; ++a) out[kDip + a] = r[a] * j.j0;
    const Vec3 rxj = cross(r, jc);
    for (int a = 0; a < 3; ++a) out[kMag + a] = rxj[a];
    std::size_t idx = kQuad;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) out[idx++] = j.j0 * (3.0 * r[a] * r[b] - (a == b ? r2 : 0.0));
    for (int a = 0; a < 3; ++a) out[kFlux + a] = jc[a];
  };

  const double sp = sigma_perp(p, t);
  const double al = std::abs(p.ell);
  std::array<double, kMomentDim> abs_tol{};
  const double floor = 1e-13;
  abs_tol[kNorm] = floor;
  for (int a = 0; a < 3; ++a) {
    abs_tol[kDip + a] = floor * (sp + std::abs(zc));
    abs_tol[kMag + a] = floor * (al + 1.0) / p.mass;
    abs_tol[kFlux + a] = floor * ((al + 1.0) / (p.mass * sp) + std::abs(p.mean_velocity()));
  }
  for (std::size_t k = kQuad; k < kFlux; ++k) abs_tol[k] = floor * sp * sp * (al + 2.0 * p.n + 1.0 + zc * zc / (sp * sp));

  QuadOptions qo = opts.quad;
  qo.rho_panels = std::max(qo.rho_panels, 2);
  qo.z_panels = std::max(qo.z_panels, 2);
  const VectorQuadResult res = integrate_cyl(f, kMomentDim, dom, opts.rel_tol, abs_tol, qo);
  const auto& v = res.value;

  MultipoleSet m;
  m.t = t;
  const Vec3 d{v[kDip], v[kDip + 1], v[kDip + 2]};
  const Vec3 flux{v[kFlux], v[kFlux + 1], v[kFlux + 2]};
  const Vec3 mu_raw = 0.5 * Vec3{v[kMag], v[kMag + 1], v[kMag + 2]};
  m.mu = mu_raw - 0.5 * cross(d, flux);

  Mat3 q{};
  std::size_t idx = kQuad;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      q[a][b] = v[idx++];
      q[b][a] = q[a][b];
    }
  const double d2 = dot(d, d);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) q[a][b] += -3.0 * d[a] * d[b] + (a == b ? d2 : 0.0);
  m.Q = q;
  // Dipole about the nominal centre <u> t z. It vanishes when the centre of
  // charge sits there, which is what makes the subtraction above intrinsic.
  m.d = d - Vec3{0.0, 0.0, zc * v[kNorm]};
  return m;
}

QuadResult packet_norm(const PacketParams& p, double t, double rel_tol, const QuadOptions& opts) {
  p.validate();
  const double extent = source_extent(p, t);
  const double zc = p.mean_velocity() * t;
  const IntegrationDomain dom{extent, zc - extent, zc + extent, 1, true};
  const ScalarIntegrand f = [&](double rho, double, double z) {
    return std::norm(evaluate_psi(p, CylPoint{rho, 0.0, z}, t));
  };
  QuadOptions qo = opts;
  qo.rho_panels = std::max(qo.rho_panels, 2);
  qo.z_panels = std::max(qo.z_panels, 2);
  return integrate_cyl(f, dom, rel_tol, 1e-14, qo);
}

PhaseSpaceInfo phase_space(const PacketParams& p, double t) {
  const double tau = t / diffraction_time(p);
  const double u = 0.5 * (std::abs(p.ell) + 1.0) * std::sqrt(1.0 + tau * tau);
  const double two_pi = 2.0 * std::numbers::pi;
  const double states = u * u / (two_pi * two_pi);
  return {u, states, std::log(states)};
}

}  // namespace vortexem
