#pragma once

#include <complex>
#include <optional>

namespace vortexem {

/// Quantum numbers and widths of a generalized Laguerre-Gaussian packet.
/// All values in natural units (lambda_c = t_c = 1 when mass = 1).
struct PacketParams {
  int ell = 0;          ///< OAM projection, any sign
  int n = 0;            ///< radial index
  double sigma = 0.01;  ///< momentum width; sigma_perp(0) = 1/sigma
  double mass = 1.0;
  double mean_p = 0.0;  ///< mean longitudinal momentum (0 in the rest frame)

  /// Throws DomainError unless sigma > 0, n >= 0, (sigma/m)^2 < 1 and
  /// |mean_p| < m.
  void validate() const;

  /// (sigma/m)^2 >= 1e-2: the multipole expansion assumes this is small.
  bool paraxial_warning() const;

  double mean_velocity() const { return mean_p / mass; }
};

/// Evaluation point in cylindrical coordinates (rho >= 0, phi in [0, 2pi)).
struct CylPoint {
  double rho = 0.0;
  double phi = 0.0;
  double z = 0.0;

  /// Builds a point, folding phi into [0, 2pi). Throws DomainError for rho < 0.
  static CylPoint make(double rho, double phi, double z);
  static CylPoint from_cartesian(double x, double y, double z);
  /// Point at distance r and polar angle theta from the origin.
  static CylPoint from_spherical(double r, double theta, double phi);

  double r() const;
  double theta() const;  ///< atan2(rho, z), in [0, pi]
  double x() const;
  double y() const;
};

using ComplexAmp = std::complex<double>;

/// Width sigma_perp(t) = (1/sigma) sqrt(1 + t^2/t_d^2).
double sigma_perp(const PacketParams& p, double t);

/// Mean radius <rho(t)> = sqrt(|ell|) sigma_perp(t).
double mean_radius(const PacketParams& p, double t);

/// t_d = m / sigma^2.
double diffraction_time(const PacketParams& p);

/// Diffraction time in seconds for a packet of lab width sigma_perp(0) [cm]:
/// t_c (sigma_perp(0)/lambda_c)^2.
double diffraction_time_lab(double sigma_perp0_cm, double lambda_c_cm, double t_c_s);

struct Paraxiality {
  double value;                               ///< (sigma/m)^2
  std::optional<double> from_mean_radius;     ///< |ell| (lambda_c/<rho(0)>)^2, ell != 0
};

Paraxiality paraxiality_parameter(const PacketParams& p);

/// Associated Laguerre polynomial L_n^alpha(x) by the upward three-term
/// recurrence.
double laguerre(int n, int alpha, double x);

/// d/dx L_n^alpha(x) = -L_{n-1}^{alpha+1}(x).
double laguerre_derivative(int n, int alpha, double x);

/// Full complex wave function of the packet, normalized to one.
ComplexAmp evaluate_psi(const PacketParams& p, const CylPoint& pt, double t);

/// Gradient of psi in the local cylindrical basis: (d/drho, (1/rho) d/dphi,
/// d/dz). Computed from the closed form by the product and chain rule.
/// Throws DomainError on the axis for ell != 0, where the basis is undefined.
struct PsiGradient {
  ComplexAmp d_rho;
  ComplexAmp d_phi;
  ComplexAmp d_z;
};

PsiGradient psi_gradient(const PacketParams& p, const CylPoint& pt, double t);

/// |i dpsi/dt + laplacian(psi)/(2m)| / max(|psi|, 1e-30), from Cartesian
/// central differences at steps h and h/2 combined by Richardson. h is
/// 1e-3 sigma_perp(t) in space and 1e-3 m sigma_perp(t)^2 in time. Throws DomainError when the stencil would
/// reach the axis for ell != 0.
double schrodinger_residual(const PacketParams& p, const CylPoint& pt, double t);

}  // namespace vortexem
