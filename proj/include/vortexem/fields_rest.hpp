#pragma once

#include <string_view>

#include "vortexem/moments.hpp"
#include "vortexem/wavepacket.hpp"

namespace vortexem {

/// E and H in the local cylindrical basis (e_rho, e_phi, z) at the field
/// point. Natural field unit e / lambda_c^2.
struct FieldVectorCyl {
  double e_rho = 0.0;
  double e_phi = 0.0;
  double e_z = 0.0;
  double h_rho = 0.0;
  double h_phi = 0.0;
  double h_z = 0.0;

  FieldVectorCyl& operator+=(const FieldVectorCyl& o);
  double e_norm() const;
  double h_norm() const;
};

FieldVectorCyl operator+(FieldVectorCyl a, const FieldVectorCyl& b);

enum class Validity { valid, outside_time_window, inside_core };

std::string_view to_string(Validity v);

/// Fields split by source. total is the componentwise sum of the parts.
struct FieldBreakdown {
  FieldVectorCyl charge;      ///< Coulomb field (E only)
  FieldVectorCyl dipole;      ///< magnetic moment (H only)
  FieldVectorCyl quadrupole;  ///< E_Q and H_Q
  FieldVectorCyl total;
  Validity validity = Validity::valid;
};

/// inside_core when r < <rho(t)>, else outside_time_window when |t| > t_d.
Validity field_validity(const PacketParams& p, double r, double t);

/// Rest-frame field of the n = 0 packet: charge + magnetic dipole + electric
/// quadrupole in the closed cylindrical form, with the retarded time already
/// expanded into explicit t/r terms. Out-of-window points are evaluated and
/// flagged, not rejected.
///
/// Throws SingularityError at r = 0, UnsupportedModeError for n != 0 and
/// DomainError for a moving packet (mean_p != 0).
FieldBreakdown rest_fields(const PacketParams& p, const CylPoint& pt, double t);

/// Same field from the general multipole formulas
///
///   E_Q = 5/2 n (n.Q)/r^4 - Q/r^4 + 5/2 n (n.Q')/r^3 - Q'/r^3 + n (n.Q'')/r^2 - Q''/(2 r^2)
///   H_Q = -n x Q'/(2 r^3) - n x Q''/(2 r^2),     Q_a = Q_ab(t - r) n_b
///
/// fed with the closed-form moments at the retarded time. Algebraically
/// identical to rest_fields; kept as an independent cross-check.
FieldBreakdown multipole_fields(const PacketParams& p, const CylPoint& pt, double t);

/// Static quadrupole field 5/2 n (n.Qn)/r^4 - Qn/r^4 of an arbitrary
/// traceless tensor, in the local cylindrical basis.
FieldVectorCyl static_quadrupole_field(const Mat3& Q, const CylPoint& pt);

struct AsymmetryValue {
  double value;         ///< H_phi / H_rho
  double t;
  int ell_sign;
  double sigma_perp0;
};

/// A(t) = -sign(l) (lambda_c / sigma_perp(0))^2 t / t_c. Independent of the
/// field point. Throws UndefinedAsymmetryError for l = 0.
AsymmetryValue asymmetry_rest(const PacketParams& p, double t);

/// |A(t_d)| = (t_d/t_c) |l| (lambda_c/<rho(0)>)^2, which is 1 identically.
/// Throws UndefinedAsymmetryError for l = 0.
double asymmetry_bound(const PacketParams& p);

}  // namespace vortexem
