#pragma once

#include <vector>

#include "vortexem/fields_rest.hpp"
#include "vortexem/quadrature.hpp"
#include "vortexem/vec3.hpp"

namespace vortexem {

/// Lorenz-gauge potentials; vector part in the local cylindrical basis.
struct PotentialValue {
  double a0 = 0.0;
  double a_rho = 0.0;
  double a_phi = 0.0;
  double a_z = 0.0;
};

struct OracleOptions {
  double rel_tol = 1e-11;  ///< on every potential component
  QuadOptions quad{50'000'000};  ///< in-source events need about 3e7 calls
  double step = 1e-3;      ///< spatial FD step as a fraction of r
  double time_step = 1e-3; ///< time FD step as a fraction of max(t_d, |t|)
  int threads = 1;         ///< workers for independent field points
};

struct SpaceTimeEvent {
  Vec3 x;
  double t;
};

struct CartesianPotential {
  double a0 = 0.0;
  Vec3 a;
};

/// A^mu(x, t) = int d^3x' j^mu(x', t - |x - x'|) / |x - x'| for every event
/// in one shared quadrature, so all events see identical nodes. Uses the
/// closed-form n = 0 current at the exact retarded time of each node. When an
/// event lies inside the source the nodes are offsets from each event, which
/// removes the kernel singularity; such batches should be compact (one FD
/// stencil), since the shared domain then covers the source from every event.
///
/// Throws UnsupportedModeError for n != 0, DomainError for a moving packet,
/// AccuracyError if the budget runs out.
std::vector<CartesianPotential> retarded_potentials_batch(const PacketParams& p,
                                                          const std::vector<SpaceTimeEvent>& events,
                                                          const OracleOptions& opts = {});

PotentialValue retarded_potentials(const PacketParams& p, const CylPoint& pt, double t,
                                   const OracleOptions& opts = {});

/// E = -grad A0 - dA/dt, H = curl A from central differences of the
/// potentials at steps h and h/2 combined by Richardson extrapolation.
/// The stencils are Cartesian, so points on the axis are regular; throws
/// DomainError only at the origin.
FieldVectorCyl oracle_fields(const PacketParams& p, const CylPoint& pt, double t, const OracleOptions& opts = {});

/// oracle_fields at many points, spread over opts.threads workers. Output
/// order follows the input.
std::vector<FieldVectorCyl> oracle_fields_many(const PacketParams& p, const std::vector<CylPoint>& pts, double t,
                                               const OracleOptions& opts = {});

/// Pass threshold multiplier on the suppression estimate.
inline constexpr double kAgreementFactor = 3.0;
/// Deviation accepted regardless of the estimate (quadrature and FD floor).
inline constexpr double kAgreementFloor = 1e-6;

struct AgreementReport {
  CylPoint point;
  double t;
  double rel_dev_E;
  double rel_dev_H;             ///< against |H_closed|, or |E_closed| when l = 0
  double expected_suppression;  ///< <rho(t)>/r, or sigma_perp(t)/r when l = 0
  bool pass;
  FieldVectorCyl oracle;
  FieldVectorCyl closed;
};

/// Oracle against rest_fields(...).total. pass iff both deviations are at
/// most max(kAgreementFactor * suppression, kAgreementFloor).
/// Throws DomainError unless r >= 2 <rho(t)> (2 sigma_perp(t) for l = 0).
AgreementReport multipole_agreement(const PacketParams& p, const CylPoint& pt, double t,
                                    const OracleOptions& opts = {});

struct GaussLawResult {
  double charge;  ///< flux / 4 pi
  int nodes;
};

/// Flux of the oracle E through the sphere of the given radius, using the
/// axial symmetry: 2 pi R^2 int E_r d(cos theta) on Gauss-Legendre nodes.
GaussLawResult gauss_law_charge(const PacketParams& p, double radius, double t, int nodes = 12,
                                const OracleOptions& opts = {});

}  // namespace vortexem
