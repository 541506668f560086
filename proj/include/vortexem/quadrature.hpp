#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vortexem {

/// Cylindrical integration volume 0 <= rho <= rho_max, z_min <= z <= z_max.
///
/// The azimuth is either the full circle, a reduced arc [0, 2pi/phi_fold)
/// whose result is multiplied by phi_fold (for integrands with that
/// periodicity), or a single azimuth times 2pi for phi-independent
/// integrands.
struct IntegrationDomain {
  double rho_max = 1.0;
  double z_min = -1.0;
  double z_max = 1.0;
  int phi_fold = 1;
  bool axisymmetric = false;

  void validate() const;
};

struct QuadOptions {
  std::size_t max_evaluations = 10'000'000;  ///< integrand calls per integration
  int rho_panels = 1;                        ///< initial uniform partition
  int z_panels = 1;
  int phi_points = 8;                        ///< initial trapezoid points per arc
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct VectorQuadResult {
  std::vector<double> value;
  std::vector<double> error_estimate;
  std::size_t evaluations = 0;
};

using ScalarIntegrand = std::function<double(double rho, double phi, double z)>;
/// Writes dim components into out. The integrator adds the rho Jacobian.
using VectorIntegrand = std::function<void(double rho, double phi, double z, std::span<double> out)>;

/// Integral of f over the volume, d^3r = rho drho dphi dz.
///
/// Tensor Gauss-Kronrod (7/15) panels in (rho, z), bisected adaptively where
/// the Kronrod-Gauss difference is largest; trapezoid rule in phi, whose
/// point count doubles while the 2N-vs-N difference dominates the error.
/// Converges when error_estimate <= max(rel_tol |value|, abs_tol); throws
/// AccuracyError carrying the best estimate if the evaluation budget runs out.
QuadResult integrate_cyl(const ScalarIntegrand& f, const IntegrationDomain& dom, double rel_tol,
                         double abs_tol, const QuadOptions& opts = {});

/// Vector version: every component shares the same nodes, and each must meet
/// max(rel_tol |value_k|, abs_tol[k]).
VectorQuadResult integrate_cyl(const VectorIntegrand& f, std::size_t dim, const IntegrationDomain& dom,
                               double rel_tol, std::span<const double> abs_tol,
                               const QuadOptions& opts = {});

/// Gauss-Kronrod 15-point rule on [-1, 1]; nodes in ascending order.
struct GaussKronrod15 {
  static const std::array<double, 15>& nodes();
  static const std::array<double, 15>& kronrod_weights();
  /// Gauss 7-point weights on the same node list (zero at Kronrod-only nodes).
  static const std::array<double, 15>& gauss_weights();
};

struct GaussLegendreRule {
  std::vector<double> nodes;    ///< ascending, on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n), exact for
/// polynomials of degree 2n - 1. Throws DomainError for n < 1.
GaussLegendreRule gauss_legendre(int n);

}  // namespace vortexem
