#include "vortexem/current.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "vortexem/errors.hpp"

namespace vortexem {

namespace {

void require_fundamental(const PacketParams& p, const char* op) {
  if (p.n != 0)
    throw UnsupportedModeError(std::string(op) + ": closed form exists only for n = 0");
}

// Spreading coefficient t / (t^2 + t_d^2) of the radial current.
double spreading_rate(const PacketParams& p, double t) {
  const double td = diffraction_time(p);
  return t / (t * t + td * td);
}

}  // namespace

double charge_density(const PacketParams& p, const CylPoint& pt, double t) {
  require_fundamental(p, "charge_density");
  const int al = std::abs(p.ell);
  if (al > 0 && pt.rho == 0.0) return 0.0;
  const double sp = sigma_perp(p, t);
  const double r2 = pt.rho * pt.rho + pt.z * pt.z;
  double log_j0 = -1.5 * std::log(std::numbers::pi) - std::lgamma(al + 1.0) -
                  (2.0 * al + 3.0) * std::log(sp) - r2 / (sp * sp);
  if (al > 0) log_j0 += 2.0 * al * std::log(pt.rho);
  return std::exp(log_j0);
}

CurrentVector current_density(const PacketParams& p, const CylPoint& pt, double t) {
  CurrentVector j;
  j.j0 = charge_density(p, pt, t);
  const double rate = spreading_rate(p, t);
  j.j_rho = j.j0 * pt.rho * rate;
  j.j_z = j.j0 * pt.z * rate;
  j.j_phi = (p.ell == 0 || pt.rho == 0.0) ? 0.0 : j.j0 * p.ell / (p.mass * pt.rho);
  return j;
}

CurrentVector probability_current(const PacketParams& p, const CylPoint& pt, double t) {
  const ComplexAmp psi = evaluate_psi(p, pt, t);
  CurrentVector j;
  j.j0 = std::norm(psi);
  if (p.ell != 0 && pt.rho == 0.0) return j;
  const PsiGradient g = psi_gradient(p, pt, t);
  // Re(psi^* (-i) grad psi) = Im(psi^* grad psi)
  const ComplexAmp conj_psi = std::conj(psi);
  j.j_rho = (conj_psi * g.d_rho).imag() / p.mass;
  j.j_phi = (conj_psi * g.d_phi).imag() / p.mass;
  j.j_z = (conj_psi * g.d_z).imag() / p.mass;
  return j;
}

CurrentVector bessel_current(const BesselParams& b, double rho) {
  if (!(rho >= 0.0)) throw DomainError("bessel_current: rho must be >= 0");
  if (!(b.p_perp > 0.0)) throw DomainError("bessel_current: p_perp must be > 0");
  const double order = std::abs(b.ell);
  const double jl = std::cyl_bessel_j(order, b.p_perp * rho);
  CurrentVector j;
  j.j0 = b.norm * b.norm * jl * jl;
  j.j_phi = (b.ell == 0 || rho == 0.0) ? 0.0 : j.j0 * b.ell / (b.mass * rho);
  return j;
}

double continuity_residual(const PacketParams& p, const CylPoint& pt, double t) {
  require_fundamental(p, "continuity_residual");
  const double sp = sigma_perp(p, t);
  const double h = 1e-3 * sp;
  const double ht = 1e-3 * diffraction_time(p);
  if (pt.rho <= h) throw DomainError("continuity_residual: radial stencil reaches the axis");

  auto at = [&](double rho, double phi, double z, double tt) {
    return current_density(p, CylPoint{rho, phi, z}, tt);
  };
  const double rho = pt.rho;
  const auto divergence = [&](double s, double st) {
    const double dphi = s / rho;
    const double dj0_dt = (at(rho, pt.phi, pt.z, t + st).j0 - at(rho, pt.phi, pt.z, t - st).j0) / (2.0 * st);
    const double drho_term =
        ((rho + s) * at(rho + s, pt.phi, pt.z, t).j_rho - (rho - s) * at(rho - s, pt.phi, pt.z, t).j_rho) /
        (2.0 * s * rho);
    const double dphi_term =
        (at(rho, pt.phi + dphi, pt.z, t).j_phi - at(rho, pt.phi - dphi, pt.z, t).j_phi) / (2.0 * dphi * rho);
    const double dz_term = (at(rho, pt.phi, pt.z + s, t).j_z - at(rho, pt.phi, pt.z - s, t).j_z) / (2.0 * s);
    return dj0_dt + drho_term + dphi_term + dz_term;
  };
  // Richardson on steps (h, ht) and (h/2, ht/2).
  const double div = (4.0 * divergence(0.5 * h, 0.5 * ht) - divergence(h, ht)) / 3.0;

  const double j0 = at(rho, pt.phi, pt.z, t).j0;
  const double scale = std::max(j0 / sp, 1e-300);
  return std::abs(div) / scale;
}

}  // namespace vortexem
