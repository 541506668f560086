#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vortexem/fields_lab.hpp"
#include "vortexem/units.hpp"
#include "vortexem/wavepacket.hpp"

namespace vortexem {

/// Bad configuration input. line is 1-based, 0 when no position applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// "<number> <unit>" split at the first space run. The unit is mandatory.
/// The unit parsers throw std::invalid_argument; parse_config reports the
/// same messages as ConfigError with the line of the value.
struct UnitString {
  double value;
  std::string unit;
};
UnitString split_unit_string(std::string_view s);

/// Length in units of lambda_c. Accepts lambda_c, fm, pm, nm, um (or µm/μm),
/// mm, cm, m.
double parse_length(std::string_view s, const units::Constants& c);

/// Time in units of t_c. Accepts t_c, fs, ps, ns, us (or µs/μs), ms, s, and
/// t_d (multiples of the diffraction time t_d).
double parse_time(std::string_view s, const units::Constants& c, double t_d);

/// Energy in keV. Accepts eV, keV, MeV and m_e (electron rest energy).
double parse_energy_kev(std::string_view s, const units::Constants& c);

struct AxisRange {
  double min = 0.0;  ///< natural units
  double max = 0.0;
  int count = 1;

  /// count points; a single point sits at min.
  std::vector<double> values() const;
};

struct GridSpec {
  std::optional<AxisRange> rho;
  std::optional<AxisRange> z;
  int phi_count = 1;          ///< phi_k = 2 pi k / phi_count
  std::vector<double> times;  ///< natural units
};

enum class Frame { rest, lab };
enum class OutputUnits { natural, lab };

struct Config {
  PacketParams packet;
  units::Constants constants = units::Constants::rounded();
  bool codata = false;
  std::optional<BoostSpec> boost;
  std::optional<double> kinetic_kev;  ///< set when the boost was given as an energy
  Frame frame = Frame::rest;
  OutputUnits output_units = OutputUnits::natural;
  GridSpec grid;
  std::vector<std::string> outputs;
  std::map<std::string, double> tolerances;

  std::string canonical;              ///< compact JSON of the input document
  std::map<std::string, int> lines;   ///< JSON pointer to source line

  /// Source line of a JSON pointer, or of its closest listed ancestor.
  int line_of(const std::string& pointer) const;
};

std::string_view to_string(Frame f);

/// Parses a JSON document. Throws ConfigError with the line of the offending
/// token for syntax errors, unknown keys, wrong types, missing unit strings
/// and out-of-range values.
Config parse_config(std::string_view text);
Config load_config(const std::string& path);

/// Same physics and grid, ignoring the source bookkeeping.
bool equivalent(const Config& a, const Config& b);

}  // namespace vortexem
