// SPDX-License-Identifier: Apache-2.0
// Command-line sweeps: evaluates ADR/ADEP curves and writes them as CSV.
//
// Exit codes: 0 every point evaluated, 2 some points failed (rows kept with
// an empty value and a note), 1 invalid invocation.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irs/sweep.hpp"

int main(int argc, char** argv) {
  CLI::App app{"IRS finite-blocklength performance sweeps"};
  app.set_version_flag("--version", "irs_sweep 1.0");

  std::string preset_name;
  std::string config_path;
  std::string out_path;
  app.add_option("--preset", preset_name, "Figure preset: fig2, fig3, fig4, fig5");
  app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Output CSV path (default: stdout)");

  // Every sweep setting is kept as text and routed through the same
  // parser as the config file, so flags and config agree exactly.
  const std::vector<std::pair<std::string, std::string>> settings = {
      {"metric", "adr or adep"},
      {"mode", "csi or nocsi"},
      {"methods", "Comma-separated methods"},
      {"n", "Comma-separated surface sizes N"},
      {"snr-start", "First SNR point in dB"},
      {"snr-stop", "Last SNR point in dB"},
      {"snr-step", "SNR step in dB"},
      {"m", "Blocklength M"},
      {"eps", "Target error probability for ADR"},
      {"bits", "Packet size D in bits for ADEP"},
      {"alpha", "Controller-to-surface channel variance"},
      {"beta", "Surface-to-device channel variance"},
      {"trials", "Monte-Carlo trials per point"},
      {"seed", "Monte-Carlo seed"},
      {"rs-convention", "Packet rate in asymptotic formulas: nats or bits"},
      {"threads", "Monte-Carlo worker threads (0 = all cores)"},
  };
  std::map<std::string, std::string> raw;
  for (const auto& [key, help] : settings) {
    app.add_option("--" + key, raw[key], help)->allow_extra_args(false);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::map<std::string, std::string> config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot read config '" + config_path + "'");
      config = irs::sweep::parse_config(in);
    }
    // Preset: flag, then config, else an empty spec.
    if (preset_name.empty() && config.count("preset")) preset_name = config.at("preset");
    if (out_path.empty() && config.count("out")) out_path = config.at("out");
    config.erase("preset");
    config.erase("out");

    irs::sweep::SweepSpec spec;
    if (!preset_name.empty()) spec = irs::sweep::preset(preset_name);
    for (const auto& [key, value] : config) irs::sweep::apply_setting(spec, key, value);
    for (const auto& [key, help] : settings) {
      if (app.count("--" + key) > 0) irs::sweep::apply_setting(spec, key, raw[key]);
    }
    spec.validate();

    const auto curves = irs::sweep::run_sweep(spec);
    if (out_path.empty()) {
      irs::sweep::emit_csv(curves, std::cout);
    } else {
      irs::sweep::emit_csv(curves, out_path);
    }
    const auto failures = irs::sweep::count_failures(curves);
    if (failures > 0) {
      std::cerr << "irs_sweep: " << failures << " point(s) failed; see the note column\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "irs_sweep: " << e.what() << '\n';
    return 1;
  }
}
