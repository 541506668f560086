#include "vortexem/wavepacket.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "vortexem/errors.hpp"

namespace vortexem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// i^k for integer k, exact.
ComplexAmp i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

// Everything in psi except the Laguerre factor: magnitude from log space,
// phase from the exact i^{2n+l} times exp(i * phase).
ComplexAmp psi_without_laguerre(const PacketParams& p, const CylPoint& pt, double t) {
  const int al = std::abs(p.ell);
  if (al > 0 && pt.rho == 0.0) return {0.0, 0.0};
  const double sp = sigma_perp(p, t);
  const double tau = t / diffraction_time(p);
  const double zeta = pt.z - p.mean_velocity() * t;
  const double q2 = (pt.rho * pt.rho + zeta * zeta) / (2.0 * sp * sp);

  double log_amp = 0.5 * (std::lgamma(p.n + 1.0) - std::lgamma(p.n + al + 1.0)) -
                   0.75 * std::log(std::numbers::pi) - (al + 1.5) * std::log(sp) - q2;
  if (al > 0) log_amp += al * std::log(pt.rho);

  const double phase = p.ell * pt.phi + p.mean_p * pt.z -
                       t * p.mean_p * p.mean_p / (2.0 * p.mass) -
                       (2 * p.n + al + 1.5) * std::atan(tau) + tau * q2;
  return i_power(2 * p.n + p.ell) * std::polar(std::exp(log_amp), phase);
}

}  // namespace

void PacketParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("PacketParams: sigma must be > 0");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("PacketParams: mass must be > 0");
  if (n < 0) throw DomainError("PacketParams: radial index n must be >= 0");
  const double par = (sigma / mass) * (sigma / mass);
  if (!(par < 1.0)) throw DomainError("PacketParams: paraxiality (sigma/m)^2 must be < 1");
  if (!(std::abs(mean_p) < mass)) throw DomainError("PacketParams: |mean_p| must be < m");
}

bool PacketParams::paraxial_warning() const { return (sigma / mass) * (sigma / mass) >= 1e-2; }

CylPoint CylPoint::make(double rho, double phi, double z) {
  if (!(rho >= 0.0)) throw DomainError("CylPoint: rho must be >= 0");
  double f = std::fmod(phi, kTwoPi);
  if (f < 0.0) f += kTwoPi;
  if (f >= kTwoPi) f = 0.0;
  return {rho, f, z};
}

CylPoint CylPoint::from_cartesian(double x, double y, double z) {
  const double rho = std::hypot(x, y);
  return make(rho, rho == 0.0 ? 0.0 : std::atan2(y, x), z);
}

CylPoint CylPoint::from_spherical(double r, double theta, double phi) {
  return make(r * std::sin(theta), phi, r * std::cos(theta));
}

double CylPoint::r() const { return std::hypot(rho, z); }
double CylPoint::theta() const { return std::atan2(rho, z); }
double CylPoint::x() const { return rho * std::cos(phi); }
double CylPoint::y() const { return rho * std::sin(phi); }

double sigma_perp(const PacketParams& p, double t) {
  const double tau = t / diffraction_time(p);
  return std::sqrt(1.0 + tau * tau) / p.sigma;
}

double mean_radius(const PacketParams& p, double t) {
  return std::sqrt(static_cast<double>(std::abs(p.ell))) * sigma_perp(p, t);
}

double diffraction_time(const PacketParams& p) { return p.mass / (p.sigma * p.sigma); }

double diffraction_time_lab(double sigma_perp0_cm, double lambda_c_cm, double t_c_s) {
  const double ratio = sigma_perp0_cm / lambda_c_cm;
  return t_c_s * ratio * ratio;
}

Paraxiality paraxiality_parameter(const PacketParams& p) {
  Paraxiality out{(p.sigma / p.mass) * (p.sigma / p.mass), std::nullopt};
  if (p.ell != 0) {
    const double lambda_c = 1.0 / p.mass;
    const double ratio = lambda_c / mean_radius(p, 0.0);
    out.from_mean_radius = std::abs(p.ell) * ratio * ratio;
  }
  return out;
}

double laguerre(int n, int alpha, double x) {
  if (n < 0 || alpha < 0) throw DomainError("laguerre: n and alpha must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre_derivative(int n, int alpha, double x) {
  if (n == 0) return 0.0;
  return -laguerre(n - 1, alpha + 1, x);
}

ComplexAmp evaluate_psi(const PacketParams& p, const CylPoint& pt, double t) {
  const double sp = sigma_perp(p, t);
  const double x = pt.rho * pt.rho / (sp * sp);
  return psi_without_laguerre(p, pt, t) * laguerre(p.n, std::abs(p.ell), x);
}

PsiGradient psi_gradient(const PacketParams& p, const CylPoint& pt, double t) {
  const int al = std::abs(p.ell);
  if (al > 0 && pt.rho == 0.0)
    throw DomainError("psi_gradient: cylindrical basis undefined on the axis for ell != 0");
  const double sp = sigma_perp(p, t);
  const double sp2 = sp * sp;
  const double tau = t / diffraction_time(p);
  const double x = pt.rho * pt.rho / sp2;
  const double lag = laguerre(p.n, al, x);
  const double dlag = laguerre_derivative(p.n, al, x);
  const ComplexAmp base = psi_without_laguerre(p, pt, t);
  const ComplexAmp psi = base * lag;
  const ComplexAmp envelope{1.0, -tau};  // (1 - i t/t_d)
  const double zeta = pt.z - p.mean_velocity() * t;
  constexpr ComplexAmp i{0.0, 1.0};

  PsiGradient g;
  // d/drho of rho^|l| L(rho^2/sp^2) exp(-(1 - i tau) rho^2 / (2 sp^2))
  ComplexAmp radial = lag * (-envelope * pt.rho / sp2) + dlag * 2.0 * pt.rho / sp2;
  if (al > 0) radial += lag * (al / pt.rho);
  g.d_rho = base * radial;
  g.d_phi = al > 0 ? psi * (i * (p.ell / pt.rho)) : ComplexAmp{0.0, 0.0};
  g.d_z = psi * (i * p.mean_p - envelope * zeta / sp2);
  return g;
}

double schrodinger_residual(const PacketParams& p, const CylPoint& pt, double t) {
  const double sp = sigma_perp(p, t);
  const double h = 1e-3 * sp;
  const double ht = 1e-3 * p.mass * sp * sp;
  if (p.ell != 0 && pt.rho <= h)
    throw DomainError("schrodinger_residual: stencil reaches the axis for ell != 0");

  const double x0 = pt.x();
  const double y0 = pt.y();
  const double z0 = pt.z;
  auto psi_at = [&](double x, double y, double z, double tt) {
    return evaluate_psi(p, CylPoint::from_cartesian(x, y, z), tt);
  };

  const ComplexAmp c = psi_at(x0, y0, z0, t);
  const auto laplacian = [&](double s) {
    return (psi_at(x0 + s, y0, z0, t) + psi_at(x0 - s, y0, z0, t) + psi_at(x0, y0 + s, z0, t) +
            psi_at(x0, y0 - s, z0, t) + psi_at(x0, y0, z0 + s, t) + psi_at(x0, y0, z0 - s, t) - 6.0 * c) /
           (s * s);
  };
  const auto time_derivative = [&](double s) {
    return (psi_at(x0, y0, z0, t + s) - psi_at(x0, y0, z0, t - s)) / (2.0 * s);
  };
  // Richardson on steps h and h/2 removes the O(h^2) truncation term.
  const ComplexAmp lap = (4.0 * laplacian(0.5 * h) - laplacian(h)) / 3.0;
  const ComplexAmp dt = (4.0 * time_derivative(0.5 * ht) - time_derivative(ht)) / 3.0;
  const ComplexAmp resid = ComplexAmp{0.0, 1.0} * dt + lap / (2.0 * p.mass);
  return std::abs(resid) / std::max(std::abs(c), 1e-30);
}

}  // namespace vortexem
