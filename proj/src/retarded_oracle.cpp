#include "vortexem/retarded_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "vortexem/current.hpp"
#include "vortexem/errors.hpp"

namespace vortexem {

namespace {

void check_oracle_inputs(const PacketParams& p) {
  p.validate();
  if (p.n != 0) throw UnsupportedModeError("retarded oracle: the closed-form current exists only for n = 0");
  if (p.mean_p != 0.0) throw DomainError("retarded oracle: packet must be at rest (mean_p = 0)");
}

// Truncation radius for the source at any retarded time the events can see.
// The width grows with |t'|, so the extremes of each event's window decide.
double retarded_extent(const PacketParams& p, const std::vector<SpaceTimeEvent>& events) {
  const double shape = std::sqrt(2.0 * std::abs(p.ell) + 3.0) + 12.0;
  double extent = 0.0;
  for (const auto& ev : events) extent = std::max(extent, sigma_perp(p, ev.t) * shape);
  for (int it = 0; it < 20; ++it) {
    double t_far = 0.0;
    for (const auto& ev : events) {
      const double r = norm(ev.x);
      t_far = std::max(t_far, std::abs(ev.t - (r + extent)));
      t_far = std::max(t_far, std::abs(ev.t - std::max(0.0, r - extent)));
    }
    const double next = std::max(extent, sigma_perp(p, t_far) * shape);
    if (next <= extent * (1.0 + 1e-6)) return next;
    extent = next;
  }
  return extent;
}

enum : std::size_t { kSpatialEvents = 12, kTimeEvents = 4, kStencil = kSpatialEvents + kTimeEvents };

double richardson(double fp, double fm, double fp2, double fm2, double h) {
  const double d1 = (fp - fm) / (2.0 * h);
  const double d2 = (fp2 - fm2) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

std::vector<CartesianPotential> retarded_potentials_batch(const PacketParams& p,
                                                          const std::vector<SpaceTimeEvent>& events,
                                                          const OracleOptions& opts) {
  check_oracle_inputs(p);
  if (events.empty()) return {};
  const double extent = retarded_extent(p, events);
  const std::size_t ne = events.size();
  const std::size_t dim = 4 * ne;

  // Events inside the occupied part of the source (density above double
  // precision relative to its peak) are integrated in a frame centred on the
  // event: the rho Jacobian then cancels the 1/|x - x'| kernel, leaving a
  // bounded integrand with its only corner on the domain edge. All events
  // share the same offset nodes, so batches should stay compact.
  const double occupied = std::sqrt(2.0 * std::abs(p.ell) + 3.0) + 3.5;
  bool centred = false;
  double rho_reach = 0.0, z_reach = 0.0;
  for (const auto& ev : events) {
    if (norm(ev.x) < sigma_perp(p, ev.t) * occupied) centred = true;
    rho_reach = std::max(rho_reach, std::hypot(ev.x.x, ev.x.y));
    z_reach = std::max(z_reach, std::abs(ev.x.z));
  }

  const auto accumulate = [&](std::size_t k, const Vec3& src, double dist, std::span<double> out) {
    const CylPoint sp = CylPoint::from_cartesian(src.x, src.y, src.z);
    const double c = std::cos(sp.phi);
    const double s = std::sin(sp.phi);
    const CurrentVector j = current_density(p, sp, events[k].t - dist);
    const double inv = 1.0 / dist;
    out[4 * k] = j.j0 * inv;
    out[4 * k + 1] = (j.j_rho * c - j.j_phi * s) * inv;
    out[4 * k + 2] = (j.j_rho * s + j.j_phi * c) * inv;
    out[4 * k + 3] = j.j_z * inv;
  };

  const VectorIntegrand origin_frame = [&](double rho, double phi, double z, std::span<double> out) {
    const Vec3 src{rho * std::cos(phi), rho * std::sin(phi), z};
    for (std::size_t k = 0; k < ne; ++k) accumulate(k, src, norm(events[k].x - src), out);
  };
  const VectorIntegrand event_frame = [&](double rho, double phi, double z, std::span<double> out) {
    const Vec3 off{rho * std::cos(phi), rho * std::sin(phi), z};
    const double dist = std::hypot(rho, z);
    for (std::size_t k = 0; k < ne; ++k) accumulate(k, events[k].x + off, dist, out);
  };
  const IntegrationDomain dom = centred
                                    ? IntegrationDomain{rho_reach + extent, -(z_reach + extent), z_reach + extent, 1, false}
                                    : IntegrationDomain{extent, -extent, extent, 1, false};

  std::vector<double> abs_tol(dim);
  for (std::size_t k = 0; k < ne; ++k) {
    const double r = std::max(norm(events[k].x), extent);
    abs_tol[4 * k] = opts.rel_tol * 1e-3 / r;
    for (std::size_t a = 1; a < 4; ++a) abs_tol[4 * k + a] = opts.rel_tol / (r * r);
  }

  QuadOptions qo = opts.quad;
  qo.rho_panels = std::max(qo.rho_panels, 2);
  qo.z_panels = std::max(qo.z_panels, 2);
  const VectorQuadResult res = integrate_cyl(centred ? event_frame : origin_frame, dim, dom, opts.rel_tol, abs_tol, qo);

  std::vector<CartesianPotential> out(ne);
  for (std::size_t k = 0; k < ne; ++k) {
    out[k].a0 = res.value[4 * k];
    out[k].a = {res.value[4 * k + 1], res.value[4 * k + 2], res.value[4 * k + 3]};
  }
  return out;
}

PotentialValue retarded_potentials(const PacketParams& p, const CylPoint& pt, double t, const OracleOptions& opts) {
  // The source is axially symmetric: evaluate at azimuth 0, where the
  // Cartesian x and y axes coincide with e_rho and e_phi.
  const auto v = retarded_potentials_batch(p, {{{pt.rho, 0.0, pt.z}, t}}, opts);
  return {v[0].a0, v[0].a.x, v[0].a.y, v[0].a.z};
}

FieldVectorCyl oracle_fields(const PacketParams& p, const CylPoint& pt, double t, const OracleOptions& opts) {
  const double r = pt.r();
  if (!(r > 0.0)) throw DomainError("oracle_fields: stencil needs a field point away from the origin");
  const double h = opts.step * r;
  const double ht = opts.time_step * std::max(diffraction_time(p), std::abs(t));
  const Vec3 x0{pt.rho, 0.0, pt.z};

  std::vector<SpaceTimeEvent> ev;
  ev.reserve(kStencil);
  for (int a = 0; a < 3; ++a)
    for (double off : {h, -h, 0.5 * h, -0.5 * h}) {
      Vec3 x = x0;
      x[a] += off;
      ev.push_back({x, t});
    }
  for (double off : {ht, -ht, 0.5 * ht, -0.5 * ht}) ev.push_back({x0, t + off});

  const auto pot = retarded_potentials_batch(p, ev, opts);

  // grad[a] = d/dx_a of (A0, Ax, Ay, Az)
  double grad[3][4];
  for (int a = 0; a < 3; ++a) {
    const std::size_t b = 4 * a;
    grad[a][0] = richardson(pot[b].a0, pot[b + 1].a0, pot[b + 2].a0, pot[b + 3].a0, h);
    for (int c = 0; c < 3; ++c)
      grad[a][c + 1] = richardson(pot[b].a[c], pot[b + 1].a[c], pot[b + 2].a[c], pot[b + 3].a[c], h);
  }
  double dt[3];
  for (int c = 0; c < 3; ++c) {
    const std::size_t b = kSpatialEvents;
    dt[c] = richardson(pot[b].a[c], pot[b + 1].a[c], pot[b + 2].a[c], pot[b + 3].a[c], ht);
  }

  FieldVectorCyl f;
  f.e_rho = -grad[0][0] - dt[0];
  f.e_phi = -grad[1][0] - dt[1];
  f.e_z = -grad[2][0] - dt[2];
  f.h_rho = grad[1][3] - grad[2][2];
  f.h_phi = grad[2][1] - grad[0][3];
  f.h_z = grad[0][2] - grad[1][1];
  return f;
}

std::vector<FieldVectorCyl> oracle_fields_many(const PacketParams& p, const std::vector<CylPoint>& pts, double t,
                                               const OracleOptions& opts) {
  std::vector<FieldVectorCyl> out(pts.size());
  const int workers = std::clamp(opts.threads, 1, static_cast<int>(std::max<std::size_t>(pts.size(), 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = oracle_fields(p, pts[i], t, opts);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < pts.size(); i = next++) {
        try {
          out[i] = oracle_fields(p, pts[i], t, opts);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

AgreementReport multipole_agreement(const PacketParams& p, const CylPoint& pt, double t, const OracleOptions& opts) {
  const double r = pt.r();
  const double scale = p.ell == 0 ? sigma_perp(p, t) : mean_radius(p, t);
  if (!(r >= 2.0 * scale))
    throw DomainError("multipole_agreement: comparison needs r >= 2 <rho(t)> (2 sigma_perp(t) for l = 0)");

  AgreementReport rep{};
  rep.point = pt;
  rep.t = t;
  rep.closed = rest_fields(p, pt, t).total;
  rep.oracle = oracle_fields(p, pt, t, opts);
  const FieldVectorCyl& a = rep.oracle;
  const FieldVectorCyl& b = rep.closed;
  const FieldVectorCyl d{a.e_rho - b.e_rho, a.e_phi - b.e_phi, a.e_z - b.e_z,
                         a.h_rho - b.h_rho, a.h_phi - b.h_phi, a.h_z - b.h_z};
  rep.rel_dev_E = d.e_norm() / b.e_norm();
  const double h_ref = b.h_norm() > 0.0 ? b.h_norm() : b.e_norm();
  rep.rel_dev_H = d.h_norm() / h_ref;
  rep.expected_suppression = scale / r;
  const double limit = std::max(kAgreementFactor * rep.expected_suppression, kAgreementFloor);
  rep.pass = rep.rel_dev_E <= limit && rep.rel_dev_H <= limit;
  return rep;
}

GaussLawResult gauss_law_charge(const PacketParams& p, double radius, double t, int nodes, const OracleOptions& opts) {
  if (!(radius > 0.0)) throw DomainError("gauss_law_charge: radius must be > 0");
  const GaussLegendreRule rule = gauss_legendre(nodes);
  std::vector<CylPoint> pts;
  for (double u : rule.nodes) pts.push_back({radius * std::sqrt(1.0 - u * u), 0.0, radius * u});
  const auto fields = oracle_fields_many(p, pts, t, opts);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double u = rule.nodes[i];
    const double e_r = fields[i].e_rho * std::sqrt(1.0 - u * u) + fields[i].e_z * u;
    sum += rule.weights[i] * e_r;
  }
  // flux = 2 pi R^2 sum; charge = flux / 4 pi
  return {0.5 * radius * radius * sum, nodes};
}

}  // namespace vortexem
