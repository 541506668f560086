#include "vortexem/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vortexem/errors.hpp"
#include "vortexem/validation.hpp"

#ifndef VORTEXEM_VERSION
#define VORTEXEM_VERSION "unknown"
#endif

namespace vortexem {

namespace {

using json = nlohmann::json;

// Runs f(i) for i in [0, n) on up to `threads` workers. Results go to
// caller-owned slots, so output order never depends on scheduling.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  const int workers = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct Scales {
  double length = 1.0;
  double time = 1.0;
  double field = 1.0;
  std::string length_unit, time_unit, field_unit;
};

Scales output_scales(const Config& cfg) {
  const bool lab = cfg.output_units == OutputUnits::lab;
  const units::System sys = lab ? units::System::lab : units::System::natural;
  const auto name = [&](units::Dimension d) {
    return std::string(sys == units::System::lab ? units::lab_unit_name(d) : units::natural_unit_name(d));
  };
  Scales s;
  if (lab) {
    s.length = units::lab_scale(units::Dimension::length, cfg.constants);
    s.time = units::lab_scale(units::Dimension::time, cfg.constants);
    s.field = units::lab_scale(units::Dimension::field, cfg.constants);
  }
  s.length_unit = name(units::Dimension::length);
  s.time_unit = name(units::Dimension::time);
  s.field_unit = name(units::Dimension::field);
  return s;
}

Frame resolve_frame(const Config& cfg, const CommandOptions& opts) {
  const Frame f = opts.frame.value_or(cfg.frame);
  if (f == Frame::lab && !cfg.boost)
    throw ConfigError("/boost: the lab frame needs a boost (beta or kinetic)", cfg.line_of("/boost"));
  return f;
}

void write_header(std::ostream& out, const char* command, const Config& cfg, Frame frame, const Scales& sc) {
  const PacketParams& p = cfg.packet;
  out << "# vortexem " << command << " " << artifact_version() << "\n";
  out << "# config: " << cfg.canonical << "\n";
  out << "# frame: " << to_string(frame);
  if (frame == Frame::lab) out << " beta=" << format_number(cfg.boost->beta) << " gamma=" << format_number(cfg.boost->gamma());
  out << "\n";
  out << "# packet: ell=" << p.ell << " n=" << p.n << " sigma=" << format_number(p.sigma)
      << " m sigma_perp0=" << format_number(sigma_perp(p, 0.0)) << " lambda_c t_d="
      << format_number(diffraction_time(p)) << " t_c constants=" << (cfg.codata ? "codata" : "rounded") << "\n";
  out << "# units: length=" << sc.length_unit << " time=" << sc.time_unit << " angle=rad field=" << sc.field_unit
      << "\n";
}

}  // namespace

std::string_view artifact_version() { return VORTEXEM_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // one spelling for both signed zeros
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_fieldmap(const Config& cfg, const CommandOptions& opts, std::ostream& out) {
  const Frame frame = resolve_frame(cfg, opts);
  if (!cfg.grid.rho || !cfg.grid.z || cfg.grid.times.empty())
    throw ConfigError("/grid: fieldmap needs grid.rho, grid.z and grid.times", cfg.line_of("/grid"));
  if (cfg.packet.n != 0)
    throw ConfigError("/packet/n: closed-form fields exist only for n = 0", cfg.line_of("/packet/n"));

  const Scales sc = output_scales(cfg);
  const std::vector<double> rho = cfg.grid.rho->values();
  const std::vector<double> z = cfg.grid.z->values();
  const std::vector<double>& times = cfg.grid.times;
  const std::size_t nphi = static_cast<std::size_t>(cfg.grid.phi_count);
  const std::size_t n = times.size() * rho.size() * nphi * z.size();

  struct Row {
    CylPoint pt;
    double t;
    std::string validity;
    FieldBreakdown f;
  };
  std::vector<Row> rows(n);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    std::size_t k = i;
    const std::size_t iz = k % z.size();
    k /= z.size();
    const std::size_t iphi = k % nphi;
    k /= nphi;
    const std::size_t irho = k % rho.size();
    const std::size_t it = k / rho.size();
    Row& r = rows[i];
    r.pt = {rho[irho], 2.0 * std::numbers::pi * static_cast<double>(iphi) / static_cast<double>(nphi), z[iz]};
    r.t = times[it];
    try {
      r.f = frame == Frame::lab ? lab_fields_boosted(cfg.packet, *cfg.boost, r.pt, r.t)
                                : rest_fields(cfg.packet, r.pt, r.t);
      r.validity = std::string(to_string(r.f.validity));
    } catch (const SingularityError&) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      const FieldVectorCyl bad{nan, nan, nan, nan, nan, nan};
      r.f = {bad, bad, bad, bad, Validity::inside_core};
      r.validity = "singular";
    }
  });

  write_header(out, "fieldmap", cfg, frame, sc);
  out << "t,rho,phi,z,validity";
  for (const char* src : {"charge", "dipole", "quadrupole", "total"})
    for (const char* c : {"E_rho", "E_phi", "E_z", "H_rho", "H_phi", "H_z"}) out << "," << c << "_" << src;
  out << "\n";
  for (const Row& r : rows) {
    out << format_number(r.t * sc.time) << "," << format_number(r.pt.rho * sc.length) << ","
        << format_number(r.pt.phi) << "," << format_number(r.pt.z * sc.length) << "," << r.validity;
    for (const FieldVectorCyl* v : {&r.f.charge, &r.f.dipole, &r.f.quadrupole, &r.f.total})
      for (double c : {v->e_rho, v->e_phi, v->e_z, v->h_rho, v->h_phi, v->h_z}) out << "," << format_number(c * sc.field);
    out << "\n";
  }
  return kExitOk;
}

int cmd_asymmetry(const Config& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  const Frame frame = resolve_frame(cfg, opts);
  if (cfg.packet.ell == 0) {
    err << "asymmetry: undefined for ell = 0 (H_rho and H_phi both vanish)\n";
    return kExitUndefinedObservable;
  }
  if (cfg.grid.times.empty())
    throw ConfigError("/grid: asymmetry needs grid.times", cfg.line_of("/grid"));

  const PacketParams& p = cfg.packet;
  const Scales sc = output_scales(cfg);
  const double t_d = diffraction_time(p);
  const BoostSpec b = frame == Frame::lab ? *cfg.boost : BoostSpec{};

  write_header(out, "asymmetry", cfg, frame, sc);
  out << "# |A| = 1 at tau = t_d = " << format_number(t_d * sc.time) << " " << sc.time_unit;
  if (frame == Frame::lab)
    out << "; following z = beta t this is lab time gamma t_d = " << format_number(b.gamma() * t_d * sc.time) << " "
        << sc.time_unit;
  out << "\n";
  out << "t,z,tau,A,abs_A,validity\n";

  std::vector<double> zs;
  if (cfg.grid.z) zs = cfg.grid.z->values();
  for (double t : cfg.grid.times) {
    const std::vector<double> row_z = zs.empty() ? std::vector<double>{frame == Frame::lab ? b.beta * t : 0.0} : zs;
    for (double z : row_z) {
      double tau = t;
      double a;
      if (frame == Frame::lab) {
        tau = boost_coordinates({0.0, 0.0, z}, t, b).t;
        a = asymmetry_lab(p, b, t, z);
      } else {
        a = asymmetry_rest(p, t).value;
      }
      const char* validity = std::abs(tau) > t_d ? "outside_time_window" : "valid";
      out << format_number(t * sc.time) << "," << format_number(z * sc.length) << "," << format_number(tau * sc.time)
          << "," << format_number(a) << "," << format_number(std::abs(a)) << "," << validity << "\n";
    }
  }
  return kExitOk;
}

int cmd_plan(const Config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.packet.ell == 0) {
    err << "plan: the asymmetry is undefined for ell = 0\n";
    return kExitUndefinedObservable;
  }
  if (!cfg.boost) throw ConfigError("/boost: plan needs the beam energy (boost.kinetic)", cfg.line_of("/boost"));

  const units::Constants& k = cfg.constants;
  ExperimentSpec spec;
  spec.ell = cfg.packet.ell;
  spec.mean_radius0_cm = std::sqrt(std::abs(cfg.packet.ell)) * sigma_perp(cfg.packet, 0.0) * k.lambda_c_cm;
  spec.kinetic_kev = cfg.kinetic_kev ? *cfg.kinetic_kev : (cfg.boost->gamma() - 1.0) * k.m_e_kev;
  spec.constants = k;
  for (double t : cfg.grid.times) spec.sample_times_s.push_back(t * k.t_c_s);
  const ExperimentPlan plan = experiment_plan(spec);

  json j;
  j["version"] = std::string(artifact_version());
  j["input"] = {{"ell", spec.ell}, {"mean_radius0_cm", spec.mean_radius0_cm}, {"kinetic_kev", spec.kinetic_kev},
                {"constants", cfg.codata ? "codata" : "rounded"}};
  j["beta"] = plan.beta;
  j["gamma"] = plan.gamma;
  j["sigma_perp0"] = {{"cm", plan.sigma_perp0_cm}, {"lambda_c", plan.sigma_perp0_cm / k.lambda_c_cm}};
  j["paraxiality"] = plan.paraxiality;
  j["z_d"] = {{"cm", plan.z_d_cm}, {"lambda_c", plan.z_d_nat}};
  j["t_d"] = {{"s", plan.t_d_s}, {"t_c", plan.t_d_nat}};
  j["omega_d"] = {{"eV", plan.omega_d_ev}, {"m", plan.omega_d_nat}};
  j["lambda_d"] = {{"cm", plan.lambda_d_cm}, {"lambda_c", plan.lambda_d_cm / k.lambda_c_cm}};
  j["lambda_d_reduced"] = {{"cm", plan.lambda_d_reduced_cm}, {"lambda_c", plan.lambda_d_reduced_cm / k.lambda_c_cm}};
  j["asymmetry_table"] = json::array();
  for (const auto& s : plan.asym_table) j["asymmetry_table"].push_back({{"t_s", s.t_s}, {"rest", s.rest}, {"lab", s.lab}});
  j["width_ok"] = plan.width_ok;
  j["width_window_cm"] = {1e-7, 1e-4};
  j["notes"] = plan.notes;
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_validate(const std::map<std::string, double>& tolerances, const CommandOptions& opts, std::ostream& out) {
  ValidationOptions vo;
  vo.filter = opts.filter;
  vo.tolerances = tolerances;
  vo.threads = opts.threads;
  const ValidationReport rep = run_validation(vo);

  json j;
  j["version"] = std::string(artifact_version());
  j["filter"] = opts.filter.empty() ? json(nullptr) : json(opts.filter);
  j["all_pass"] = rep.all_pass();
  j["checks"] = json::array();
  for (const auto& c : rep.checks) {
    json e{{"module", c.module}, {"name", c.name}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    e["residual"] = std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
    if (!c.detail.empty()) e["detail"] = c.detail;
    j["checks"].push_back(e);
  }
  out << j.dump(2) << "\n";
  return rep.all_pass() ? kExitOk : kExitValidationFailed;
}

}  // namespace vortexem
