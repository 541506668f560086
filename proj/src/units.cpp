#include "vortexem/units.hpp"

#include <cmath>
#include <stdexcept>

#include "vortexem/errors.hpp"

namespace vortexem::units {

double lab_scale(Dimension d, const Constants& c) {
  switch (d) {
    case Dimension::length:
      return c.lambda_c_cm;
    case Dimension::time:
      return c.t_c_s;
    case Dimension::energy:
      return c.m_e_kev;
    case Dimension::frequency:
      return 1.0 / c.t_c_s;
    case Dimension::field:
      return c.field_unit();
  }
  throw std::invalid_argument("units: unknown dimension");
}

Quantity convert(const Quantity& q, System target, const Constants& c) {
  if (q.system == target) return q;
  const double s = lab_scale(q.dimension, c);
  Quantity out = q;
  out.system = target;
  out.value = target == System::lab ? q.value * s : q.value / s;
  return out;
}

std::string_view lab_unit_name(Dimension d) {
  switch (d) {
    case Dimension::length:
      return "cm";
    case Dimension::time:
      return "s";
    case Dimension::energy:
      return "keV";
    case Dimension::frequency:
      return "rad/s";
    case Dimension::field:
      return "statV/cm";
  }
  return "?";
}

std::string_view natural_unit_name(Dimension d) {
  switch (d) {
    case Dimension::length:
      return "lambda_c";
    case Dimension::time:
      return "t_c";
    case Dimension::energy:
      return "m";
    case Dimension::frequency:
      return "1/t_c";
    case Dimension::field:
      return "e/lambda_c^2";
  }
  return "?";
}

BetaGamma beta_gamma_from_kinetic(double kinetic_kev, const Constants& c) {
  if (!(kinetic_kev >= 0.0) || !std::isfinite(kinetic_kev))
    throw DomainError("beta_gamma_from_kinetic: kinetic energy must be finite and >= 0");
  const double x = kinetic_kev / c.m_e_kev;
  const double gamma = 1.0 + x;
  // beta = sqrt(1 - 1/gamma^2) without the cancellation at small T
  const double beta = std::sqrt(x * (x + 2.0)) / gamma;
  return {beta, gamma};
}

}  // namespace vortexem::units
