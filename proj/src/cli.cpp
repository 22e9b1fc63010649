#include "bandshare/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "bandshare/coverage.hpp"
#include "bandshare/error.hpp"
#include "bandshare/regulatory.hpp"
#include "bandshare/report.hpp"
#include "bandshare/sharing.hpp"
#include "text_util.hpp"

#ifndef BANDSHARE_DATA_DIR
#define BANDSHARE_DATA_DIR "data"
#endif

namespace bandshare::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kMetersPerMile = 1609.344;

std::string resolve(const fs::path& base, const std::string& path) {
  if (path.empty()) return path;
  const fs::path p(path);
  return p.is_absolute() ? path : (base / p).lexically_normal().string();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw IoError("failed writing '" + path + "'");
}

regulatory::EmissionMask find_mask(const std::string& name, const std::string& dir) {
  // A name with a directory part or an extension is taken as a path.
  if (name.find('/') != std::string::npos || fs::path(name).has_extension()) {
    return regulatory::load_emission_mask(name);
  }
  return regulatory::load_emission_mask((fs::path(dir) / (name + ".txt")).string());
}

regulatory::ComplianceReport check_psd_file(const std::string& psd_path, const regulatory::AggregateChannel& channel,
                                            const regulatory::EmissionMask& mask) {
  const auto samples = regulatory::parse_psd(detail::read_file(psd_path));
  return regulatory::check_emission_mask(samples, channel, mask);
}

struct ScenarioOptions {
  std::string scenario_path;
  std::optional<double> tx_height;
  std::string antenna;
  std::string model;
  bool echo_config = false;
  unsigned threads = 0;

  void attach(CLI::App* cmd, bool with_threads) {
    cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    cmd->add_option("--tx-height", tx_height, "Override tx.height_m (m)");
    cmd->add_option("--antenna", antenna, "Override tx.antenna: isotropic, dipole, directional");
    cmd->add_option("--model", model, "Override env.model: free_space, two_ray");
    cmd->add_flag("--echo-config", echo_config, "Print the effective scenario and exit");
    if (with_threads) cmd->add_option("--threads", threads, "Worker threads for the raster (0 = all cores)");
  }

  Scenario load() const {
    Scenario s = load_scenario_file(scenario_path);
    if (tx_height) s.tx_location = s.tx_location.with_height(*tx_height);
    if (!antenna.empty()) s.tx_antenna = rf::parse_antenna_kind(antenna);
    if (!model.empty()) s.environment.propagation_model = rf::parse_propagation_model(model);
    s.validate();
    return s;
  }
};

}  // namespace

Scenario load_scenario_file(const std::string& path) {
  const std::string text = detail::read_file(path);
  Scenario s;
  try {
    s = parse_scenario(text);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path, e.what()));
  }
  const fs::path base = fs::path(path).parent_path();
  s.registry_path = resolve(base, s.registry_path);
  s.mask_dir = resolve(base, s.mask_dir);
  s.psd_path = resolve(base, s.psd_path);
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectrum-sharing feasibility for V2X in the 4940-4990 MHz band", "bandshare"};
  app.require_subcommand(1);

  auto* bandplan = app.add_subcommand("bandplan", "Print the standard 4.9 GHz band plan");

  int bandwidth = 0;
  std::string power_class;
  auto* power_limit = app.add_subcommand("power-limit", "Maximum conducted power for a bandwidth and class");
  power_limit->add_option("--bandwidth", bandwidth, "Bandwidth in MHz (1, 5, 10, 15, 20)")->required();
  power_limit->add_option("--class", power_class, "Power class: low or high")->required();

  std::string psd_path, mask_name, channel_spec, mask_dir = std::string(BANDSHARE_DATA_DIR) + "/masks";
  auto* mask_check = app.add_subcommand("mask-check", "Check a measured PSD against an emission mask");
  mask_check->add_option("--psd", psd_path, "PSD file: 'freq_mhz psd_dbm_per_mhz' per line")->required();
  mask_check->add_option("--mask", mask_name, "Mask name (file stem in --mask-dir) or mask file path")->required();
  mask_check->add_option("--channel", channel_spec, "Channel indices, e.g. 12,13 or 6-9")->required();
  mask_check->add_option("--mask-dir", mask_dir, "Directory holding <name>.txt mask files");

  ScenarioOptions feas_opts;
  std::string format = "text";
  std::string feas_psd;
  bool no_coverage = false;
  auto* feasibility = app.add_subcommand("feasibility", "Full feasibility report for a scenario");
  feas_opts.attach(feasibility, true);
  feasibility->add_option("--format", format, "text or json-lines")->check(CLI::IsMember({"text", "json-lines"}));
  feasibility->add_option("--psd", feas_psd, "PSD file to check against the scenario's mask");
  feasibility->add_flag("--no-coverage", no_coverage, "Skip the coverage raster summary");

  ScenarioOptions rx_opts;
  auto* rx_report = app.add_subcommand("rx-report", "Link report for every Rx site");
  rx_opts.attach(rx_report, false);

  ScenarioOptions cov_opts;
  std::string out_path, geojson_path;
  auto* coverage_cmd = app.add_subcommand("coverage", "Coverage raster as CSV");
  cov_opts.attach(coverage_cmd, true);
  coverage_cmd->add_option("--out", out_path, "Write the CSV raster here instead of stdout");
  coverage_cmd->add_option("--geojson", geojson_path, "Also write covered cells as GeoJSON");

  ScenarioOptions radius_opts;
  double bearing = 0.0;
  auto* radius = app.add_subcommand("radius", "Coverage radius along a bearing");
  radius_opts.attach(radius, false);
  radius->add_option("--bearing", bearing, "Bearing in degrees clockwise from north")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (bandplan->parsed()) {
      for (const auto& ch : regulatory::standard_band_plan().channels()) {
        out << fmt::format("channel {:2d}  center {:.1f} MHz  width {} MHz  span {:.1f}-{:.1f} MHz\n", ch.index,
                           ch.center_mhz, ch.bandwidth_mhz, ch.lower_edge_mhz(), ch.upper_edge_mhz());
      }
      return kExitOk;
    }
    if (power_limit->parsed()) {
      const double watts = regulatory::max_conducted_power_w(bandwidth, regulatory::parse_power_class(power_class));
      out << fmt::format("{} W\n", watts);
      return kExitOk;
    }
    if (mask_check->parsed()) {
      const auto channel = regulatory::validate_aggregation(regulatory::standard_band_plan(),
                                                            regulatory::parse_channel_list(channel_spec));
      const auto report = check_psd_file(psd_path, channel, find_mask(mask_name, mask_dir));
      out << report::format_compliance(report);
      return report.compliant() ? kExitOk : kExitValidation;
    }

    const auto echo = [&](const ScenarioOptions& o, const Scenario& s) {
      if (o.echo_config) out << serialize_scenario(s);
      return o.echo_config;
    };

    if (feasibility->parsed()) {
      const Scenario s = feas_opts.load();
      if (echo(feas_opts, s)) return kExitOk;
      const auto registry = sharing::load_registry(s.registry_path);
      std::optional<regulatory::ComplianceReport> mask;
      const std::string psd = feas_psd.empty() ? s.psd_path : feas_psd;
      if (!psd.empty()) mask = check_psd_file(psd, s.channel, find_mask(s.mask_name, s.mask_dir));
      const auto r = report::build_feasibility_report(s, registry, std::move(mask),
                                                      {!no_coverage, feas_opts.threads});
      out << (format == "json-lines" ? report::format_report_json_lines(r) : report::format_report_text(r));
      return kExitOk;
    }
    if (rx_report->parsed()) {
      const Scenario s = rx_opts.load();
      if (echo(rx_opts, s)) return kExitOk;
      out << report::format_rx_reports(s, coverage::evaluate_rx_sites(s));
      return kExitOk;
    }
    if (coverage_cmd->parsed()) {
      const Scenario s = cov_opts.load();
      if (echo(cov_opts, s)) return kExitOk;
      const auto raster = coverage::compute_coverage(s, cov_opts.threads);
      const std::string csv = report::write_raster_csv(raster);
      if (out_path.empty()) {
        out << csv;
      } else {
        write_file(out_path, csv);
        const auto summary = coverage::summarize(raster, {});
        out << fmt::format("wrote {} cells ({} covered, {:.1f}%) to {}\n", summary.total_cells,
                           summary.covered_cells, 100.0 * summary.covered_fraction, out_path);
      }
      if (!geojson_path.empty()) write_file(geojson_path, report::write_coverage_geojson(raster));
      return kExitOk;
    }
    if (radius->parsed()) {
      const Scenario s = radius_opts.load();
      if (echo(radius_opts, s)) return kExitOk;
      const double r = coverage::coverage_radius_m(s, geo::normalize_bearing_deg(bearing));
      out << fmt::format("bearing {:.1f} deg: radius {:.0f} m ({:.2f} mi)\n", geo::normalize_bearing_deg(bearing),
                         r, r / kMetersPerMile);
      return kExitOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  err << app.help();
  return kExitValidation;
}

}  // namespace bandshare::cli
