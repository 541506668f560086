#include "vortexem/fields_rest.hpp"

#include <cmath>
#include <cstdlib>

#include "vortexem/errors.hpp"

namespace vortexem {

FieldVectorCyl& FieldVectorCyl::operator+=(const FieldVectorCyl& o) {
  e_rho += o.e_rho;
  e_phi += o.e_phi;
  e_z += o.e_z;
  h_rho += o.h_rho;
  h_phi += o.h_phi;
  h_z += o.h_z;
  return *this;
}

double FieldVectorCyl::e_norm() const { return std::sqrt(e_rho * e_rho + e_phi * e_phi + e_z * e_z); }
double FieldVectorCyl::h_norm() const { return std::sqrt(h_rho * h_rho + h_phi * h_phi + h_z * h_z); }

FieldVectorCyl operator+(FieldVectorCyl a, const FieldVectorCyl& b) { return a += b; }

std::string_view to_string(Validity v) {
  switch (v) {
    case Validity::valid: return "valid";
    case Validity::outside_time_window: return "outside_time_window";
    case Validity::inside_core: return "inside_core";
  }
  return "unknown";
}

Validity field_validity(const PacketParams& p, double r, double t) {
  if (r < mean_radius(p, t)) return Validity::inside_core;
  if (std::abs(t) > diffraction_time(p)) return Validity::outside_time_window;
  return Validity::valid;
}

namespace {

void check_rest_inputs(const PacketParams& p, const CylPoint& pt, const char* who) {
  p.validate();
  if (p.n != 0) throw UnsupportedModeError(std::string(who) + ": closed-form fields exist only for n = 0");
  if (p.mean_p != 0.0) throw DomainError(std::string(who) + ": packet must be at rest (mean_p = 0)");
  if (!(pt.r() > 0.0)) throw SingularityError(std::string(who) + ": field point at the packet centre");
}

// l^2 (lambda_c / <rho(0)>)^2 = |l| (sigma/m)^2, written so that l = 0 gives 0.
double nonparaxial_factor(const PacketParams& p) {
  const double s = p.sigma / p.mass;
  return std::abs(p.ell) * s * s;
}

struct Basis {
  Vec3 e_rho, e_phi, e_z;
};

Basis local_basis(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {{c, s, 0.0}, {-s, c, 0.0}, {0.0, 0.0, 1.0}};
}

FieldVectorCyl to_cyl(const Basis& b, const Vec3& e, const Vec3& h) {
  return {dot(e, b.e_rho), dot(e, b.e_phi), dot(e, b.e_z), dot(h, b.e_rho), dot(h, b.e_phi), dot(h, b.e_z)};
}

}  // namespace

FieldBreakdown rest_fields(const PacketParams& p, const CylPoint& pt, double t) {
  check_rest_inputs(p, pt, "rest_fields");
  const double r = pt.r();
  const double s = pt.rho / r;
  const double c = pt.z / r;
  const double r2 = r * r;
  const double r3 = r2 * r;
  const double c2 = c * c;
  const double mu = p.ell / (2.0 * p.mass);
  const double rho0 = mean_radius(p, 0.0);
  const double stat = rho0 * rho0 / r2;
  const double kappa = nonparaxial_factor(p);
  const double tr2 = (t / r) * (t / r);

  FieldBreakdown f;
  f.charge.e_rho = s / r2;
  f.charge.e_z = c / r2;

  f.dipole.h_rho = mu * 3.0 * s * c / r3;
  f.dipole.h_z = mu * (3.0 * c2 - 1.0) / r3;

  f.quadrupole.e_rho =
      s / (4.0 * r2) * (3.0 * stat * (1.0 - 5.0 * c2) + kappa * (3.0 * tr2 * (1.0 - 5.0 * c2) + 3.0 * c2 - 1.0));
  f.quadrupole.e_z =
      c / (4.0 * r2) * (3.0 * stat * (3.0 - 5.0 * c2) + kappa * (3.0 * tr2 * (3.0 - 5.0 * c2) + 3.0 * c2 - 1.0));
  f.quadrupole.h_phi = -1.5 * (t / r) * (kappa / r2) * s * c;

  f.total = f.charge + f.dipole + f.quadrupole;
  f.validity = field_validity(p, r, t);
  return f;
}

FieldVectorCyl static_quadrupole_field(const Mat3& Q, const CylPoint& pt) {
  const double r = pt.r();
  if (!(r > 0.0)) throw SingularityError("static_quadrupole_field: field point at the origin");
  const Basis b = local_basis(pt.phi);
  const Vec3 n = (pt.rho / r) * b.e_rho + (pt.z / r) * b.e_z;
  const Vec3 qn = Q * n;
  const double r4 = r * r * r * r;
  const Vec3 e = (2.5 * dot(n, qn) / r4) * n - (1.0 / r4) * qn;
  return to_cyl(b, e, Vec3{});
}

FieldBreakdown multipole_fields(const PacketParams& p, const CylPoint& pt, double t) {
  check_rest_inputs(p, pt, "multipole_fields");
  const double r = pt.r();
  const Basis b = local_basis(pt.phi);
  const Vec3 n = (pt.rho / r) * b.e_rho + (pt.z / r) * b.e_z;
  const Vec3 mu{0.0, 0.0, p.ell / (2.0 * p.mass)};
  const QuadrupoleHistory q = analytic_quadrupole_history(p, t - r);
  const Vec3 qn = q.Q * n;
  const Vec3 qdn = q.Q_dot * n;
  const Vec3 qddn = q.Q_ddot * n;
  const double r2 = r * r;
  const double r3 = r2 * r;
  const double r4 = r3 * r;

  const Vec3 e_charge = (1.0 / r2) * n;
  const Vec3 h_dipole = (1.0 / r3) * (3.0 * dot(n, mu) * n - mu);
  const Vec3 e_quad = (2.5 * dot(n, qn) / r4) * n - (1.0 / r4) * qn + (2.5 * dot(n, qdn) / r3) * n -
                      (1.0 / r3) * qdn + (dot(n, qddn) / r2) * n - (0.5 / r2) * qddn;
  const Vec3 h_quad = (-0.5 / r3) * cross(n, qdn) - (0.5 / r2) * cross(n, qddn);

  FieldBreakdown f;
  f.charge = to_cyl(b, e_charge, Vec3{});
  f.dipole = to_cyl(b, Vec3{}, h_dipole);
  f.quadrupole = to_cyl(b, e_quad, h_quad);
  f.total = f.charge + f.dipole + f.quadrupole;
  f.validity = field_validity(p, r, t);
  return f;
}

AsymmetryValue asymmetry_rest(const PacketParams& p, double t) {
  p.validate();
  if (p.ell == 0) throw UndefinedAsymmetryError("asymmetry_rest: the asymmetry is undefined for l = 0");
  const int sgn = p.ell > 0 ? 1 : -1;
  const double sp0 = sigma_perp(p, 0.0);
  // (lambda_c / sigma_perp(0))^2 t / t_c with lambda_c = t_c = 1/m
  const double ratio = 1.0 / (p.mass * sp0);
  return {-sgn * ratio * ratio * t * p.mass, t, sgn, sp0};
}

double asymmetry_bound(const PacketParams& p) {
  p.validate();
  if (p.ell == 0) throw UndefinedAsymmetryError("asymmetry_bound: the asymmetry is undefined for l = 0");
  const double lc = 1.0 / p.mass;
  const double tc = 1.0 / p.mass;
  const double rho0 = mean_radius(p, 0.0);
  return diffraction_time(p) / tc * std::abs(p.ell) * (lc / rho0) * (lc / rho0);
}

}  // namespace vortexem
