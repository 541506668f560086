#pragma once

#include "vortexem/wavepacket.hpp"

namespace vortexem {

/// Charge density and current density in the local cylindrical basis.
struct CurrentVector {
  double j0 = 0.0;
  double j_rho = 0.0;
  double j_phi = 0.0;
  double j_z = 0.0;
};

/// Reference current of a Bessel beam. Bessel states are not normalizable, so
/// the amplitude N is a free constant.
struct BesselParams {
  double p_perp = 1.0;
  int ell = 0;
  double norm = 1.0;
  double mass = 1.0;
};

/// Closed-form charge density of the n = 0 packet in its rest frame:
///
///   j0 = rho^{2|l|} exp(-r^2/sigma_perp^2) / (pi^{3/2} |l|! sigma_perp^{2|l|+3})
///
/// evaluated in log space so that |l| ~ 10^3 neither overflows nor underflows.
/// Throws UnsupportedModeError for n != 0.
double charge_density(const PacketParams& p, const CylPoint& pt, double t);

/// Closed-form rest-frame current of the n = 0 packet,
///
///   j = j0 (r t / (t^2 + t_d^2) + e_phi l / (m rho)),
///
/// with the azimuthal part taken as its limit 0 on the axis.
/// Throws UnsupportedModeError for n != 0.
CurrentVector current_density(const PacketParams& p, const CylPoint& pt, double t);

/// Probability current j = Re(psi^* (-i/m) grad psi) for any (l, n, mean_p),
/// built from evaluate_psi and the analytic gradient. Zero on the axis for
/// l != 0, where the density vanishes.
CurrentVector probability_current(const PacketParams& p, const CylPoint& pt, double t);

/// Bessel-beam current: j0 = N^2 J_l(p_perp rho)^2, only j_phi = j0 l/(m rho).
CurrentVector bessel_current(const BesselParams& b, double rho);

/// |d_t j0 + div j| / (j0 / sigma_perp(t)) by central differences in
/// cylindrical coordinates, Richardson-combined over steps h and h/2 with
/// h = 1e-3 sigma_perp(t) in space and 1e-3 t_d in time. Throws DomainError if the radial stencil reaches the axis and
/// UnsupportedModeError for n != 0.
double continuity_residual(const PacketParams& p, const CylPoint& pt, double t);

}  // namespace vortexem
