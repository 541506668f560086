#include "vortexem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vortexem/errors.hpp"

namespace vortexem {

namespace {

constexpr int kNodes = 15;

struct Region {
  double r0, r1, z0, z1;
  int phi_points;                   // coarse azimuths; the fine rule uses twice as many
  std::vector<double> value;        // Kronrod x Kronrod, fine phi rule
  std::vector<double> value_coarse; // Kronrod x Kronrod, half the phi points
  std::vector<double> err;          // per component, err_rho + err_z
  std::vector<double> err_rho;      // Kronrod vs Gauss in rho
  std::vector<double> err_z;        // Kronrod vs Gauss in z
};

class Integrator {
 public:
  Integrator(const VectorIntegrand& f, std::size_t dim, const IntegrationDomain& dom,
             const QuadOptions& opts)
      : f_(f), dim_(dim), dom_(dom), opts_(opts) {
    phi_start_ = dom.axisymmetric ? 1 : std::max(2, opts.phi_points);
    node_fine_.resize(kNodes * kNodes * dim_);
    node_coarse_.resize(kNodes * kNodes * dim_);
    scratch_.resize(dim_);
  }

  VectorQuadResult run(double rel_tol, std::span<const double> abs_tol) {
    const int nr = std::max(1, opts_.rho_panels);
    const int nz = std::max(1, opts_.z_panels);
    const double dr = dom_.rho_max / nr;
    const double dz = (dom_.z_max - dom_.z_min) / nz;
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nz; ++j) {
        Region reg{i * dr, i + 1 == nr ? dom_.rho_max : (i + 1) * dr, dom_.z_min + j * dz,
                   j + 1 == nz ? dom_.z_max : dom_.z_min + (j + 1) * dz, phi_start_, {}, {}, {}, {}, {}};
        evaluate(reg);
        regions_.push_back(std::move(reg));
      }

    std::vector<double> total(dim_), err2d(dim_), err_phi(dim_), tol(dim_);
    for (;;) {
      std::fill(total.begin(), total.end(), 0.0);
      std::fill(err2d.begin(), err2d.end(), 0.0);
      std::fill(err_phi.begin(), err_phi.end(), 0.0);
      for (const Region& reg : regions_)
        for (std::size_t k = 0; k < dim_; ++k) {
          total[k] += reg.value[k];
          err2d[k] += reg.err[k];
          err_phi[k] += reg.value[k] - reg.value_coarse[k];
        }

      bool converged = true;
      for (std::size_t k = 0; k < dim_; ++k) {
        err_phi[k] = std::abs(err_phi[k]);
        tol[k] = std::max(rel_tol * std::abs(total[k]), abs_tol[k]);
        if (!(err2d[k] + err_phi[k] <= tol[k])) converged = false;
      }
      if (converged) break;

      // The worst single error source decides: an azimuthal doubling or a
      // (rho, z) split of one region.
      std::size_t worst = 0;
      std::size_t worst_k = 0;
      double worst_score = -1.0;
      bool refine_phi = false;
      for (std::size_t i = 0; i < regions_.size(); ++i)
        for (std::size_t k = 0; k < dim_; ++k) {
          const double t = tol[k] > 0.0 ? tol[k] : 1e-300;
          const double score = regions_[i].err[k] / t;
          const double score_phi = std::abs(regions_[i].value[k] - regions_[i].value_coarse[k]) / t;
          if (score > worst_score) {
            worst_score = score;
            worst = i;
            worst_k = k;
            refine_phi = false;
          }
          if (score_phi > worst_score) {
            worst_score = score_phi;
            worst = i;
            worst_k = k;
            refine_phi = true;
          }
        }

      if (refine_phi) {
        Region& reg = regions_[worst];
        if (!affordable(1, 2 * reg.phi_points)) fail(total, err2d, err_phi, tol);
        reg.phi_points *= 2;
        evaluate(reg);
        continue;
      }

      if (!affordable(2, regions_[worst].phi_points)) fail(total, err2d, err_phi, tol);
      // Split across the direction that limits the component driving the score.
      Region parent = std::move(regions_[worst]);
      Region a{parent.r0, parent.r1, parent.z0, parent.z1, parent.phi_points, {}, {}, {}, {}, {}};
      Region b = a;
      if (parent.err_rho[worst_k] >= parent.err_z[worst_k]) {
        const double mid = 0.5 * (parent.r0 + parent.r1);
        a.r1 = mid;
        b.r0 = mid;
      } else {
        const double mid = 0.5 * (parent.z0 + parent.z1);
        a.z1 = mid;
        b.z0 = mid;
      }
      evaluate(a);
      evaluate(b);
      regions_[worst] = std::move(a);
      regions_.push_back(std::move(b));
    }

    VectorQuadResult out;
    out.value = total;
    out.error_estimate.resize(dim_);
    for (std::size_t k = 0; k < dim_; ++k) out.error_estimate[k] = err2d[k] + err_phi[k];
    out.evaluations = evaluations_;
    return out;
  }

 private:
  // Integrand calls needed to evaluate `regions` regions with `phi_points`
  // coarse azimuths (2 * phi_points fine ones).
  bool affordable(std::size_t regions, int phi_points) const {
    const std::size_t per_node = dom_.axisymmetric ? 1 : 2 * static_cast<std::size_t>(phi_points);
    return evaluations_ + regions * kNodes * kNodes * per_node <= opts_.max_evaluations;
  }

  // Reports the component furthest over its tolerance.
  [[noreturn]] void fail(const std::vector<double>& total, const std::vector<double>& err2d,
                         const std::vector<double>& err_phi, const std::vector<double>& tol) const {
    std::size_t worst = 0;
    const auto excess = [&](std::size_t k) { return (err2d[k] + err_phi[k]) / std::max(tol[k], 1e-300); };
    for (std::size_t k = 1; k < dim_; ++k)
      if (excess(k) > excess(worst)) worst = k;
    throw AccuracyError("integrate_cyl: evaluation budget of " + std::to_string(opts_.max_evaluations) +
                            " exhausted before reaching tolerance (component " + std::to_string(worst) +
                            ")",
                        total[worst], err2d[worst] + err_phi[worst]);
  }

  // Fills node_fine_ / node_coarse_ with rho * (phi integral) at every
  // (rho, z) Kronrod node of the region, then forms the tensor rules.
  void evaluate(Region& reg) {
    const auto& x = GaussKronrod15::nodes();
    const auto& wk = GaussKronrod15::kronrod_weights();
    const auto& wg = GaussKronrod15::gauss_weights();
    const double hr = 0.5 * (reg.r1 - reg.r0);
    const double cr = 0.5 * (reg.r1 + reg.r0);
    const double hz = 0.5 * (reg.z1 - reg.z0);
    const double cz = 0.5 * (reg.z1 + reg.z0);

    const int fine = dom_.axisymmetric ? 1 : 2 * reg.phi_points;
    const double arc = 2.0 * std::numbers::pi / std::max(1, dom_.phi_fold);
    // weight of one fine node including the fold factor: 2 pi / fine
    const double w_fine = 2.0 * std::numbers::pi / fine;
    const double w_coarse = 2.0 * w_fine;

    for (int i = 0; i < kNodes; ++i) {
      const double rho = cr + hr * x[i];
      for (int j = 0; j < kNodes; ++j) {
        const double z = cz + hz * x[j];
        double* gf = &node_fine_[(i * kNodes + j) * dim_];
        double* gc = &node_coarse_[(i * kNodes + j) * dim_];
        std::fill(gf, gf + dim_, 0.0);
        std::fill(gc, gc + dim_, 0.0);
        for (int m = 0; m < fine; ++m) {
          const double phi = dom_.axisymmetric ? 0.0 : arc * m / fine;
          std::fill(scratch_.begin(), scratch_.end(), 0.0);
          f_(rho, phi, z, scratch_);
          ++evaluations_;
          for (std::size_t k = 0; k < dim_; ++k) {
            gf[k] += w_fine * scratch_[k];
            if (m % 2 == 0) gc[k] += w_coarse * scratch_[k];
          }
        }
        if (dom_.axisymmetric)
          for (std::size_t k = 0; k < dim_; ++k) gc[k] = gf[k];
        for (std::size_t k = 0; k < dim_; ++k) {
          gf[k] *= rho;
          gc[k] *= rho;
        }
      }
    }

    reg.value.assign(dim_, 0.0);
    reg.value_coarse.assign(dim_, 0.0);
    reg.err.assign(dim_, 0.0);
    std::vector<double> gauss_rho(dim_, 0.0), gauss_z(dim_, 0.0);
    for (int i = 0; i < kNodes; ++i)
      for (int j = 0; j < kNodes; ++j) {
        const double* gf = &node_fine_[(i * kNodes + j) * dim_];
        const double* gc = &node_coarse_[(i * kNodes + j) * dim_];
        const double wkk = wk[i] * wk[j];
        const double wgk = wg[i] * wk[j];
        const double wkg = wk[i] * wg[j];
        for (std::size_t k = 0; k < dim_; ++k) {
          reg.value[k] += wkk * gf[k];
          reg.value_coarse[k] += wkk * gc[k];
          gauss_rho[k] += wgk * gf[k];
          gauss_z[k] += wkg * gf[k];
        }
      }
    const double jac = hr * hz;
    reg.err_rho.assign(dim_, 0.0);
    reg.err_z.assign(dim_, 0.0);
    for (std::size_t k = 0; k < dim_; ++k) {
      reg.value[k] *= jac;
      reg.value_coarse[k] *= jac;
      reg.err_rho[k] = std::abs(reg.value[k] - gauss_rho[k] * jac);
      reg.err_z[k] = std::abs(reg.value[k] - gauss_z[k] * jac);
      reg.err[k] = reg.err_rho[k] + reg.err_z[k];
    }
  }

  const VectorIntegrand& f_;
  std::size_t dim_;
  IntegrationDomain dom_;
  QuadOptions opts_;
  int phi_start_;
  std::size_t evaluations_ = 0;
  std::vector<Region> regions_;
  std::vector<double> node_fine_, node_coarse_;
  std::vector<double> scratch_;
};

}  // namespace

void IntegrationDomain::validate() const {
  if (!(rho_max > 0.0)) throw DomainError("IntegrationDomain: rho_max must be > 0");
  if (!(z_min < z_max)) throw DomainError("IntegrationDomain: z_min must be < z_max");
  if (phi_fold < 1) throw DomainError("IntegrationDomain: phi_fold must be >= 1");
}

const std::array<double, 15>& GaussKronrod15::nodes() {
  static const std::array<double, 15> x = {
      -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
      -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
      -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
      -0.207784955007898467600689403773245, 0.0,
      0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
      0.586087235467691130294144845693013,  0.741531185599394439863864773280788,
      0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
      0.991455371120812639206854697526329};
  return x;
}

const std::array<double, 15>& GaussKronrod15::kronrod_weights() {
  static const std::array<double, 15> w = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
      0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
      0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
      0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
      0.022935322010529224963732008058970};
  return w;
}

const std::array<double, 15>& GaussKronrod15::gauss_weights() {
  static const std::array<double, 15> w = {
      0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
      0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327,
      0.0, 0.381830050505118944950369775488975, 0.0, 0.279705391489276667901467771423780,
      0.0, 0.129484966168869693270611432679082, 0.0};
  return w;
}

VectorQuadResult integrate_cyl(const VectorIntegrand& f, std::size_t dim, const IntegrationDomain& dom,
                               double rel_tol, std::span<const double> abs_tol, const QuadOptions& opts) {
  dom.validate();
  if (dim == 0) throw DomainError("integrate_cyl: dimension must be >= 1");
  if (abs_tol.size() != dim) throw DomainError("integrate_cyl: abs_tol size must match dimension");
  if (!(rel_tol > 0.0)) throw DomainError("integrate_cyl: rel_tol must be > 0");
  for (double a : abs_tol)
    if (!(a > 0.0)) throw DomainError("integrate_cyl: abs_tol must be > 0");
  Integrator integ(f, dim, dom, opts);
  return integ.run(rel_tol, abs_tol);
}

QuadResult integrate_cyl(const ScalarIntegrand& f, const IntegrationDomain& dom, double rel_tol,
                         double abs_tol, const QuadOptions& opts) {
  const VectorIntegrand vf = [&f](double rho, double phi, double z, std::span<double> out) {
    out[0] = f(rho, phi, z);
  };
  const double tol[1] = {abs_tol};
  const VectorQuadResult r = integrate_cyl(vf, 1, dom, rel_tol, tol, opts);
  return {r.value[0], r.error_estimate[0], r.evaluations};
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace vortexem
