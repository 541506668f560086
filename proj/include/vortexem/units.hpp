#pragma once

#include <string_view>

namespace vortexem::units {

/// Natural units: e = hbar = c = 1 with the electron mass as the internal
/// mass scale, so lengths are measured in Compton wavelengths and times in
/// Compton times. Laboratory units are Gaussian cgs plus keV for energies:
///
///   length     cm
///   time       s
///   energy     keV
///   frequency  rad/s
///   field      statV/cm (equivalently gauss for H)
///
/// Conversions happen only at I/O boundaries; every library routine works in
/// natural units.
struct Constants {
  double lambda_c_cm;   ///< Compton wavelength (hbar / m c)
  double t_c_s;         ///< Compton time (lambda_c / c)
  double m_e_kev;       ///< electron rest energy
  double charge_esu;    ///< elementary charge

  /// Two-significant-figure values used for regression against quoted numbers.
  static constexpr Constants rounded() { return {3.9e-11, 1.3e-21, 511.0, 4.8032047e-10}; }
  /// CODATA 2018 values.
  static constexpr Constants codata() {
    return {3.8615926796e-11, 1.28808866819e-21, 510.99895, 4.8032047e-10};
  }

  /// Field unit e / lambda_c^2 in statV/cm.
  constexpr double field_unit() const { return charge_esu / (lambda_c_cm * lambda_c_cm); }
};

enum class Dimension { length, time, energy, frequency, field };
enum class System { natural, lab };

struct Quantity {
  double value = 0.0;
  Dimension dimension = Dimension::length;
  System system = System::natural;
};

/// Scale factor lab / natural for one dimension.
double lab_scale(Dimension d, const Constants& c = Constants::rounded());

/// Convert to the target system. A quantity already in the target system is
/// returned unchanged.
Quantity convert(const Quantity& q, System target, const Constants& c = Constants::rounded());

std::string_view lab_unit_name(Dimension d);
std::string_view natural_unit_name(Dimension d);

struct BetaGamma {
  double beta;
  double gamma;
};

/// Velocity and Lorentz factor of an electron with kinetic energy T [keV].
/// Throws DomainError for negative or non-finite T.
BetaGamma beta_gamma_from_kinetic(double kinetic_kev, const Constants& c = Constants::rounded());

}  // namespace vortexem::units
