#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vband/config.hpp"
#include "vband/converge.hpp"
#include "vband/driver.hpp"
#include "vband/error.hpp"
#include "vband/io.hpp"

namespace {

// Flags shared by run and converge; each set flag becomes a config override.
struct CommonFlags {
  std::string config;
  std::vector<std::pair<std::string, std::string>> values;
  std::string scenario, n_elements, n_bands, order, cfl, t_final, output_dir, workers,
      snapshot_times, series_cadence;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "config file (key = value, [scenario] sections)");
    app->add_option("--scenario", scenario, "scenario name (see list-scenarios)");
    app->add_option("--n-elements", n_elements, "spatial elements");
    app->add_option("--n-bands", n_bands, "velocity bands");
    app->add_option("--order", order, "DG polynomial degree (0..3)");
    app->add_option("--cfl", cfl, "CFL number");
    app->add_option("--t-final", t_final, "final time");
    app->add_option("--output-dir", output_dir, "output directory");
    app->add_option("--workers", workers, "worker threads (1 = serial reference path)");
    app->add_option("--snapshot-times", snapshot_times, "comma-separated snapshot times");
    app->add_option("--series-cadence", series_cadence, "steps between series points");
  }

  vband::Overrides overrides() const {
    vband::Overrides o;
    auto add = [&](const char* key, const std::string& v) {
      if (!v.empty()) o.emplace_back(key, v);
    };
    add("scenario", scenario);
    add("n_elements", n_elements);
    add("n_bands", n_bands);
    add("order", order);
    add("cfl", cfl);
    add("t_final", t_final);
    add("output_dir", output_dir);
    add("workers", workers);
    add("snapshot_times", snapshot_times);
    add("series_cadence", series_cadence);
    return o;
  }

  std::optional<std::filesystem::path> config_path() const {
    if (config.empty()) return std::nullopt;
    return std::filesystem::path(config);
  }
};

std::vector<int> parse_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    try {
      out.push_back(std::stoi(text.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      throw vband::ConfigError(std::string("invalid ") + what + ": '" + text + "'");
    }
    pos = comma + 1;
  }
  if (out.empty()) throw vband::ConfigError(std::string("invalid ") + what + ": empty list");
  return out;
}

int do_run(const CommonFlags& flags) {
  const vband::ScenarioConfig config = vband::parse_config(flags.config_path(), flags.overrides());
  vband::RunResult result;
  try {
    result = vband::run(config);
  } catch (const std::exception& e) {
    vband::write_failure_metadata(config.output_dir, e.what(), vband::config_entries(config));
    throw;
  }
  vband::write_run_outputs(result);
  std::printf("scenario=%s steps=%ld t=%.6g wall=%.2fs\n", config.scenario.c_str(),
              result.state.steps, result.state.time, result.wall_seconds);
  if (result.moment_error) std::printf("moment_l2_error=%.6e\n", *result.moment_error);
  if (result.decay_fit) std::printf("decay_rate=%.6f\n", result.decay_fit->rate);
  if (!result.decay_fit_error.empty()) std::printf("decay_fit: %s\n", result.decay_fit_error.c_str());
  if (result.growth_fit) std::printf("growth_rate=%.6f\n", result.growth_fit->rate);
  if (!result.growth_fit_error.empty()) {
    std::printf("growth_fit: %s\n", result.growth_fit_error.c_str());
  }
  std::printf("outputs in %s\n", config.output_dir.c_str());
  if (!result.ok) {
    std::fprintf(stderr, "run failed: %s\n", result.failure.c_str());
    return 2;
  }
  return 0;
}

int do_converge(const CommonFlags& flags, const std::string& orders_text,
                const std::string& ns_text) {
  vband::Overrides o = flags.overrides();
  bool has_scenario = false;
  for (const auto& [k, v] : o) has_scenario |= k == "scenario";
  if (!has_scenario && flags.config.empty()) o.emplace_back("scenario", "manufactured");
  const vband::ScenarioConfig base = vband::parse_config(flags.config_path(), o);
  const std::vector<int> orders = parse_ints(orders_text, "--orders");
  const std::vector<int> ns = parse_ints(ns_text, "--n");
  const auto rows = vband::converge(base, orders, ns);
  const std::string table = vband::format_convergence_table(rows);
  std::cout << table;
  std::filesystem::create_directories(base.output_dir);
  const auto path = std::filesystem::path(base.output_dir) / "convergence.csv";
  std::ofstream out(path, std::ios::binary);
  out << "order,n_elements,error,rate,band_error,field_error,wall_seconds\n";
  for (const auto& r : rows) {
    out << r.order << ',' << r.n_elements << ',' << vband::format_scientific(r.error) << ','
        << (r.rate ? vband::format_scientific(*r.rate) : std::string()) << ','
        << vband::format_scientific(r.band_error) << ','
        << vband::format_scientific(r.field_error) << ','
        << vband::format_scientific(r.wall_seconds) << '\n';
  }
  if (!out) throw vband::IoError("write failed for " + path.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Velocity-band moment-closure Vlasov-Ampere solver"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario");
  run_flags.attach(run_cmd);

  CommonFlags conv_flags;
  std::string orders = "1,2,3";
  std::string ns = "20,40,80";
  CLI::App* conv_cmd = app.add_subcommand("converge", "resolution study with an order table");
  conv_flags.attach(conv_cmd);
  conv_cmd->add_option("--orders", orders, "comma-separated DG degrees");
  conv_cmd->add_option("--n", ns, "comma-separated element counts");

  CLI::App* list_cmd = app.add_subcommand("list-scenarios", "list registered scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(run_flags);
    if (*conv_cmd) return do_converge(conv_flags, orders, ns);
    if (*list_cmd) {
      for (const auto& s : vband::scenario_registry()) {
        std::printf("%-14s %s%s\n", s.name.c_str(), s.summary.c_str(),
                    s.experimental ? " [experimental]" : "");
      }
      return 0;
    }
  } catch (const vband::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
