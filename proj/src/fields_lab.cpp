#include "vortexem/fields_lab.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "vortexem/errors.hpp"

namespace vortexem {

BoostSpec BoostSpec::from_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("BoostSpec: beta must lie in [0, 1)");
  return {beta};
}

BoostSpec BoostSpec::from_kinetic(double kinetic_kev, const units::Constants& c) {
  return from_beta(units::beta_gamma_from_kinetic(kinetic_kev, c).beta);
}

double BoostSpec::gamma() const { return 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta)); }

FieldVectorCyl boost_fields(const FieldVectorCyl& f, const BoostSpec& b) {
  const double g = b.gamma();
  const double v = b.beta;
  return {g * (f.e_rho + v * f.h_phi), g * (f.e_phi - v * f.h_rho), f.e_z,
          g * (f.h_rho - v * f.e_phi), g * (f.h_phi + v * f.e_rho), f.h_z};
}

RestEvent boost_coordinates(const CylPoint& pt_lab, double t_lab, const BoostSpec& b) {
  const double g = b.gamma();
  return {CylPoint{pt_lab.rho, pt_lab.phi, g * (pt_lab.z - b.beta * t_lab)}, g * (t_lab - b.beta * pt_lab.z)};
}

namespace {

void check_lab_inputs(const PacketParams& p, const BoostSpec& b, const CylPoint& pt, double t, const char* who) {
  p.validate();
  if (p.n != 0) throw UnsupportedModeError(std::string(who) + ": closed-form fields exist only for n = 0");
  if (p.mean_p != 0.0)
    throw DomainError(std::string(who) + ": packet parameters describe the rest frame (mean_p = 0)");
  if (pt.rho == 0.0 && pt.z == b.beta * t)
    throw SingularityError(std::string(who) + ": field point on the packet worldline");
}

}  // namespace

FieldBreakdown lab_fields_closed(const PacketParams& p, const BoostSpec& b, const CylPoint& pt, double t) {
  check_lab_inputs(p, b, pt, t, "lab_fields_closed");
  const double beta = b.beta;
  const double g = b.gamma();
  const double rho = pt.rho;
  const double w = pt.z - beta * t;

  // Distance D = t - t_ret from the retarded position of the centre:
  // D = gamma^2 (beta w + sqrt(w^2 + rho^2/gamma^2)). The second form avoids
  // cancellation for beta w < 0.
  const double sq = std::sqrt(w * w + rho * rho / (g * g));
  const double dist = beta * w >= 0.0 ? g * g * (beta * w + sq) : (w * w + rho * rho) / (sq - beta * w);
  const double s = rho / dist;
  const double c = (w + beta * dist) / dist;

  const double r2 = rho * rho + g * g * w * w;
  const double r1 = std::sqrt(r2);
  const double r3 = r2 * r1;
  const double tp = t - beta * pt.z;
  const double one_bc = 1.0 - beta * c;
  const double cr = (c - beta) / one_bc;
  const double cr2 = cr * cr;
  const double mu = p.ell / (2.0 * p.mass);
  const double rho0 = mean_radius(p, 0.0);
  const double stat = rho0 * rho0 / (4.0 * r2);
  const double kappa = std::abs(p.ell) * (p.sigma / p.mass) * (p.sigma / p.mass) / 4.0;
  const double tt = g * g * tp * tp / r2;
  const double tl = g * tp / r1;

  const double a_rho = 3.0 * (1.0 - 5.0 * cr2);
  const double b_rho = 3.0 * tt * (1.0 - 5.0 * cr2) - 6.0 * beta * tl * cr + 3.0 * cr2 - 1.0;
  const double a_z = 3.0 * (3.0 - 5.0 * cr2);
  const double b_z = 3.0 * tt * (3.0 - 5.0 * cr2) + 3.0 * cr2 - 1.0;
  const double c_phi = beta * a_rho;
  const double d_phi = 3.0 * beta * tt * (1.0 - 5.0 * cr2) - 6.0 * tl * cr + 3.0 * beta * cr2 - beta;

  const double pre_rho = s / one_bc / r2;
  const double pre_z = cr / r2;

  FieldBreakdown f;
  f.charge.e_rho = pre_rho;
  f.charge.e_z = pre_z;
  f.charge.h_phi = pre_rho * beta;

  f.dipole.e_phi = -3.0 * beta * mu * s * (c - beta) / (one_bc * one_bc) / r3;
  f.dipole.h_rho = beta > 0.0 ? -f.dipole.e_phi / beta : 3.0 * mu * s * (c - beta) / (one_bc * one_bc) / r3;
  f.dipole.h_z = mu * (3.0 * cr2 - 1.0) / r3;

  f.quadrupole.e_rho = pre_rho * (stat * a_rho + kappa * b_rho);
  f.quadrupole.e_z = pre_z * (stat * a_z + kappa * b_z);
  f.quadrupole.h_phi = pre_rho * (stat * c_phi + kappa * d_phi);

  f.total = f.charge + f.dipole + f.quadrupole;
  f.validity = field_validity(p, r1, g * tp);
  return f;
}

FieldBreakdown lab_fields_boosted(const PacketParams& p, const BoostSpec& b, const CylPoint& pt, double t) {
  check_lab_inputs(p, b, pt, t, "lab_fields_boosted");
  const RestEvent ev = boost_coordinates(pt, t, b);
  const FieldBreakdown rest = rest_fields(p, ev.pt, ev.t);
  FieldBreakdown f;
  f.charge = boost_fields(rest.charge, b);
  f.dipole = boost_fields(rest.dipole, b);
  f.quadrupole = boost_fields(rest.quadrupole, b);
  f.total = f.charge + f.dipole + f.quadrupole;
  f.validity = rest.validity;
  return f;
}

double asymmetry_lab(const PacketParams& p, const BoostSpec& b, double t, double z) {
  p.validate();
  if (p.ell == 0) throw UndefinedAsymmetryError("asymmetry_lab: the asymmetry is undefined for l = 0");
  const double lc = 1.0 / p.mass;
  const double tc = 1.0 / p.mass;
  const double rho0 = mean_radius(p, 0.0);
  const double sgn = p.ell > 0 ? 1.0 : -1.0;
  // -l (lambda_c/<rho(0)>)^2 with <rho(0)>^2 = |l| sigma_perp(0)^2
  const double strength = sgn * std::abs(p.ell) * (lc / rho0) * (lc / rho0);
  return -strength * b.gamma() * (t - b.beta * z) / tc;
}

double asymmetry_lab_from_fields(const FieldVectorCyl& lab, const BoostSpec& b) {
  const double den = lab.h_rho + b.beta * lab.e_phi;
  if (den == 0.0) throw DomainError("asymmetry_lab_from_fields: H_rho + beta E_phi vanishes at this point");
  return (lab.h_phi - b.beta * lab.e_rho) / den;
}

double asymmetry_lab_from_fields(const FieldBreakdown& lab, const BoostSpec& b) {
  const auto num = [&](const FieldVectorCyl& f) { return f.h_phi - b.beta * f.e_rho; };
  const auto den = [&](const FieldVectorCyl& f) { return f.h_rho + b.beta * f.e_phi; };
  const double d = den(lab.charge) + den(lab.dipole) + den(lab.quadrupole);
  if (d == 0.0) throw DomainError("asymmetry_lab_from_fields: H_rho + beta E_phi vanishes at this point");
  return (num(lab.charge) + num(lab.dipole) + num(lab.quadrupole)) / d;
}

void ExperimentSpec::validate() const {
  if (!(mean_radius0_cm > 0.0) || !std::isfinite(mean_radius0_cm))
    throw DomainError("ExperimentSpec: mean radius must be positive");
  if (ell == 0) throw DomainError("ExperimentSpec: l = 0 has no vortex radius");
  if (!(kinetic_kev >= 0.0)) throw DomainError("ExperimentSpec: kinetic energy must be non-negative");
}

double ExperimentPlan::asym_at(double t_s) const { return std::abs(t_s) / t_d_s; }

ExperimentPlan experiment_plan(const ExperimentSpec& spec) {
  spec.validate();
  const units::Constants& k = spec.constants;
  const units::BetaGamma bg = units::beta_gamma_from_kinetic(spec.kinetic_kev, k);
  ExperimentPlan plan{};
  plan.beta = bg.beta;
  plan.gamma = bg.gamma;
  plan.sigma_perp0_cm = spec.mean_radius0_cm / std::sqrt(std::abs(spec.ell));
  const double x = (plan.sigma_perp0_cm / k.lambda_c_cm) * (plan.sigma_perp0_cm / k.lambda_c_cm);
  plan.paraxiality = 1.0 / x;
  plan.t_d_nat = x;
  plan.z_d_nat = bg.beta * x;
  plan.omega_d_nat = 1.0 / x;
  plan.z_d_cm = bg.beta * k.lambda_c_cm * x;
  plan.t_d_s = k.t_c_s * x;
  plan.omega_d_ev = k.m_e_kev * 1e3 / x;
  plan.lambda_d_reduced_cm = k.lambda_c_cm * x;
  plan.lambda_d_cm = 2.0 * std::numbers::pi * plan.lambda_d_reduced_cm;
  plan.width_ok = spec.mean_radius0_cm >= 1e-7 && spec.mean_radius0_cm <= 1e-4;

  std::vector<double> times = spec.sample_times_s;
  if (times.empty())
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) times.push_back(f * plan.t_d_s);
  for (double ts : times) plan.asym_table.push_back({ts, plan.asym_at(ts), plan.asym_at(ts) / bg.gamma});

  plan.notes.push_back(
      "at fixed sigma_perp(0) the asymmetry does not depend on l; the fields themselves grow with |l|");
  if (!plan.width_ok) plan.notes.push_back("<rho(0)> lies outside the 1 nm - 1 um registration window");
  return plan;
}

}  // namespace vortexem
