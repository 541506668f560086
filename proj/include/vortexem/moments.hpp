#pragma once

#include "vortexem/quadrature.hpp"
#include "vortexem/vec3.hpp"
#include "vortexem/wavepacket.hpp"

namespace vortexem {

/// Intrinsic electric dipole, magnetic moment and traceless quadrupole of the
/// packet at time t (Cartesian components, z along the OAM axis).
struct MultipoleSet {
  Vec3 d;
  Vec3 mu;
  Mat3 Q{};
  double t = 0.0;
};

/// Quadrupole tensor together with its first two time derivatives; the third
/// derivative of the closed form vanishes identically.
struct QuadrupoleHistory {
  Mat3 Q{};
  Mat3 Q_dot{};
  Mat3 Q_ddot{};
};

struct PhaseSpaceInfo {
  double uncertainty_x;  ///< dx dp_x (= dy dp_y)
  double states;         ///< dx dp_x dy dp_y / (2 pi)^2
  double entropy;        ///< ln(states)
};

/// Closed-form intrinsic moments of the n = 0 packet at rest:
/// d = 0, mu = (l/2m) z, Q = <rho(t)>^2 diag(1/2, 1/2, -1).
/// Throws UnsupportedModeError for n != 0.
MultipoleSet analytic_moments(const PacketParams& p, double t);

/// Q(t), dQ/dt, d^2Q/dt^2 of the closed form. <rho(t)>^2 is quadratic in t.
QuadrupoleHistory analytic_quadrupole_history(const PacketParams& p, double t);

struct MomentQuadratureOptions {
  double rel_tol = 1e-10;
  QuadOptions quad{};
};

/// Moments by direct 3D quadrature of |psi|^2 and the probability current,
/// with the centre-of-charge subtraction applied. Valid for any n and
/// mean_p. d is reported about the nominal centre <u> t z, so it is zero for
/// a correctly centred packet. The source volume extends to sigma_perp(t)(sqrt(2|l| + 4n + 3) + 12)
/// around the packet centre. Throws AccuracyError on non-convergence.
MultipoleSet quadrature_moments(const PacketParams& p, double t, const MomentQuadratureOptions& opts = {});

/// Integral of |psi|^2 over the source volume. |psi|^2 does not depend on
/// phi, so a single azimuth is used.
QuadResult packet_norm(const PacketParams& p, double t, double rel_tol = 1e-10, const QuadOptions& opts = {});

/// Radius beyond which the packet density is below exp(-144) of its bulk.
double source_extent(const PacketParams& p, double t);

PhaseSpaceInfo phase_space(const PacketParams& p, double t);

}  // namespace vortexem
