#pragma once

#include <string>
#include <vector>

#include "vortexem/fields_rest.hpp"
#include "vortexem/units.hpp"

namespace vortexem {

/// Longitudinal boost; the packet moves with velocity beta along +z.
struct BoostSpec {
  double beta = 0.0;

  /// Throws DomainError unless 0 <= beta < 1.
  static BoostSpec from_beta(double beta);
  static BoostSpec from_kinetic(double kinetic_kev, const units::Constants& c = units::Constants::rounded());
  double gamma() const;
};

/// Rest-frame field seen from the lab frame (same point, lab components).
FieldVectorCyl boost_fields(const FieldVectorCyl& f, const BoostSpec& b);

struct RestEvent {
  CylPoint pt;
  double t;
};

/// Lab event to rest-frame event: z -> gamma (z - beta t), t -> gamma (t - beta z).
RestEvent boost_coordinates(const CylPoint& pt_lab, double t_lab, const BoostSpec& b);

/// Lab-frame field of the moving n = 0 packet from the closed lab-frame
/// expressions. s and c are the sine and cosine of the lab polar angle of the
/// field point seen from the retarded position of the packet centre. The
/// validity flag is evaluated at the rest-frame event.
///
/// Throws SingularityError on the worldline (rho = 0, z = beta t) and
/// UnsupportedModeError for n != 0.
FieldBreakdown lab_fields_closed(const PacketParams& p, const BoostSpec& b, const CylPoint& pt, double t);

/// Lab field via boost_fields(rest_fields(boost_coordinates(pt, t))).
FieldBreakdown lab_fields_boosted(const PacketParams& p, const BoostSpec& b, const CylPoint& pt, double t);

/// (H_phi - beta E_rho) / (H_rho + beta E_phi) in closed form:
/// -sign(l) (lambda_c/sigma_perp(0))^2 gamma (t - beta z) / t_c.
/// Throws UndefinedAsymmetryError for l = 0.
double asymmetry_lab(const PacketParams& p, const BoostSpec& b, double t, double z);

/// The same ratio built from lab field components. The numerator cancels the
/// moving-charge field against itself, so from total fields the result
/// carries an absolute rounding error of order eps |E_rho| / |H_rho|.
double asymmetry_lab_from_fields(const FieldVectorCyl& lab, const BoostSpec& b);

/// Ratio formed source by source, so the charge terms cancel before they are
/// summed with the quadrupole.
double asymmetry_lab_from_fields(const FieldBreakdown& lab, const BoostSpec& b);

struct ExperimentSpec {
  double mean_radius0_cm;  ///< <rho(0)>
  int ell;
  double kinetic_kev;
  std::vector<double> sample_times_s{};  ///< times for the |A| table
  units::Constants constants = units::Constants::rounded();

  /// Throws DomainError unless mean_radius0_cm > 0, ell != 0, kinetic_kev >= 0.
  void validate() const;
};

struct AsymmetrySample {
  double t_s;
  double rest;  ///< |A| at proper time t
  double lab;   ///< |A| measured at z = beta t, lab time t
};

/// Natural values are in units of lambda_c, t_c and m; lab values in cm, s
/// and eV.
struct ExperimentPlan {
  double beta;
  double gamma;
  double sigma_perp0_cm;
  double paraxiality;          ///< (lambda_c / sigma_perp(0))^2
  double z_d_nat;              ///< beta t_d
  double t_d_nat;
  double omega_d_nat;          ///< m (lambda_c / sigma_perp(0))^2
  double z_d_cm;
  double t_d_s;
  double omega_d_ev;
  double lambda_d_cm;          ///< 2 pi / omega_d
  double lambda_d_reduced_cm;  ///< 1 / omega_d
  std::vector<AsymmetrySample> asym_table;
  bool width_ok;               ///< <rho(0)> in [1 nm, 1 um]
  std::vector<std::string> notes;

  /// |A| at proper time t (seconds).
  double asym_at(double t_s) const;
};

/// Sample times default to t_d {0, 1/4, 1/2, 3/4, 1}.
ExperimentPlan experiment_plan(const ExperimentSpec& spec);

}  // namespace vortexem
