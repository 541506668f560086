#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "vortexem/cli.hpp"
#include "vortexem/config.hpp"

using namespace vortexem;

namespace {

struct Args {
  std::string config;
  std::string out;
  std::string frame;
  std::string filter;
  int threads = 1;
};

int run(const std::string& command, const Args& a) {
  CommandOptions opts;
  opts.threads = a.threads;
  opts.filter = a.filter;
  if (a.frame == "rest") opts.frame = Frame::rest;
  else if (a.frame == "lab") opts.frame = Frame::lab;

  std::optional<Config> cfg;
  if (!a.config.empty()) cfg = load_config(a.config);
  if (!cfg && command != "validate") throw ConfigError(command + " needs --config <path>", 0);

  std::unique_ptr<std::ofstream> file;
  if (!a.out.empty()) {
    file = std::make_unique<std::ofstream>(a.out, std::ios::binary);
    if (!*file) throw ConfigError("cannot open output file '" + a.out + "'", 0);
  }
  std::ostream& out = file ? *file : std::cout;

  if (command == "fieldmap") return cmd_fieldmap(*cfg, opts, out);
  if (command == "asymmetry") return cmd_asymmetry(*cfg, opts, out, std::cerr);
  if (command == "plan") return cmd_plan(*cfg, out, std::cerr);
  try {
    return cmd_validate(cfg ? cfg->tolerances : std::map<std::string, double>{}, opts, out);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electromagnetic fields of vortex electron wave packets"};
  app.set_version_flag("--version", std::string(artifact_version()));
  app.require_subcommand(1);

  Args a;
  const auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* c = sub->add_option("--config", a.config, "JSON configuration file");
    if (need_config) c->required();
    sub->add_option("--out", a.out, "output file (default stdout)");
    sub->add_option("--threads", a.threads, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* fieldmap = app.add_subcommand("fieldmap", "CSV field map over the configured grid");
  auto* asymmetry = app.add_subcommand("asymmetry", "CSV scan of the azimuthal asymmetry");
  auto* plan = app.add_subcommand("plan", "JSON experiment estimates");
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  add_common(fieldmap, true);
  add_common(asymmetry, true);
  add_common(plan, true);
  add_common(validate, false);
  for (auto* sub : {fieldmap, asymmetry})
    sub->add_option("--frame", a.frame, "rest or lab (overrides the config)")->check(CLI::IsMember({"rest", "lab"}));
  validate->add_option("--filter", a.filter, "run only one module's checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, a);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidationFailed;
  }
}
