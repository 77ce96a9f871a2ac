// Command-line front end: frequency sweeps of both models, gnuplot output,
// property checks and wavepacket runs.

#include "ptwg/errors.hpp"
#include "ptwg/medium.hpp"
#include "ptwg/models.hpp"
#include "ptwg/quantities.hpp"
#include "ptwg/report.hpp"
#include "ptwg/timeprop.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_config = 2;
constexpr int exit_io = 3;

struct Options {
  std::string config_path;
  std::string models = "both";
  std::string sweep;
  std::string output;
  std::string plot_csv;
  bool plot = false;
  bool check = false;
  unsigned threads = 0;

  bool packet = false;
  double sigma_um = 2.0;
  double energy_ev = 0.02;
  std::string from = "left";
  std::vector<double> snapshot_ps;
};

ptwg::Config resolve_config(const Options& opt)
{
  auto config = opt.config_path.empty() ? ptwg::Config{} : ptwg::load_config(opt.config_path);
  if (!opt.sweep.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(opt.sweep);
    for (std::string part; std::getline(ss, part, ':');)
      parts.push_back(part);
    if (parts.size() != 3)
      throw ptwg::ConfigValidationError("--sweep", "expected START:STOP:N");
    try {
      config.sweep_start = std::stod(parts[0]);
      config.sweep_stop = std::stod(parts[1]);
      config.sweep_points = std::stoi(parts[2]);
    } catch (const std::logic_error&) {
      throw ptwg::ConfigValidationError("--sweep", "expected START:STOP:N");
    }
  }
  if (!opt.output.empty())
    config.output_path = opt.output;
  ptwg::validate(config);
  return config;
}

void write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out)
    throw std::ios_base::failure("write failed for " + path);
}

int cmd_plot(const std::string& csv_path)
{
  std::ifstream in(csv_path);
  if (!in) {
    std::cerr << "error: cannot read " << csv_path << "\n";
    return exit_io;
  }
  try {
    const auto records = ptwg::read_sweep_csv(in);
    std::cout << ptwg::plot_script(records, csv_path);
  } catch (const ptwg::CsvFormatError& e) {
    std::cerr << "error: " << csv_path << ": " << e.what() << "\n";
    return exit_config;
  }
  return exit_ok;
}

int cmd_sweep(const Options& opt)
{
  const auto config = resolve_config(opt);
  const auto params = ptwg::MediumParams::from_config(config);
  ptwg::ModelSelection selection{opt.models != "approx", opt.models != "exact"};

  if (params.regime_warning())
    std::cerr << "warning: omega_p^2/delta is not small (ratio " << params.regime_ratio()
              << "); the effective equation may be inaccurate\n";

  const auto rows = ptwg::sweep(params, config.sweep_start, config.sweep_stop, config.sweep_points,
                                selection, opt.threads);
  std::ostringstream csv;
  ptwg::write_sweep_csv(csv, rows);
  write_file(config.output_path, csv.str());

  const auto summary = ptwg::summarize(rows, params);
  write_file(config.output_path + ".manifest.json",
             ptwg::manifest_json(config, params, summary, opt.models));

  std::printf("wrote %s (%zu frequency points, %zu singular)\n", config.output_path.c_str(),
              summary.rows, summary.singular_rows);
  std::printf("max PT defect of the exact model: %.6e\n", summary.max_exact_pt_defect);

  if (opt.plot) {
    std::istringstream back(csv.str());
    const auto script = ptwg::plot_script(ptwg::read_sweep_csv(back), config.output_path);
    write_file(config.output_path + ".gp", script);
    std::printf("wrote %s.gp\n", config.output_path.c_str());
  }

  if (opt.check) {
    bool all = true;
    for (const auto& c : ptwg::run_checks(params, rows, config.sweep_start, config.sweep_stop,
                                          config.sweep_points, opt.threads)) {
      std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
      all = all && c.passed;
    }
    if (!all)
      return exit_check_failed;
  }
  return exit_ok;
}

int cmd_packet(const Options& opt)
{
  const auto config = resolve_config(opt);
  const auto params = ptwg::MediumParams::from_config(config);
  if (opt.from != "left" && opt.from != "right")
    throw ptwg::ConfigValidationError("--from", "must be left or right");
  const auto side = opt.from == "left" ? ptwg::Incidence::Left : ptwg::Incidence::Right;

  const auto plan = ptwg::plan_packet(params, opt.sigma_um * ptwg::micrometre,
                                      ptwg::ev_to_joule(opt.energy_ev), side);
  std::printf("packet: sigma %.4g um, carrier %.4g eV (omega/omega_c = %.6f), from %s\n",
              opt.sigma_um, opt.energy_ev,
              1.0 + ptwg::ev_to_angular(opt.energy_ev) / params.omega_c(), opt.from.c_str());
  std::printf("grid: [%.3f, %.3f] um, %zu points, dt %.4e s, t_final %.4e s\n",
              plan.grid.z_min / ptwg::micrometre, plan.grid.z_max / ptwg::micrometre,
              plan.grid.n_points, plan.grid.dt, plan.t_final);

  ptwg::PacketOptions options;
  for (double t : opt.snapshot_ps)
    options.snapshot_times.push_back(t * 1e-12);
  std::size_t snap_index = 0;
  options.on_snapshot = [&](const ptwg::WavepacketState& state) {
    const auto path = config.output_path + ".snapshot" + std::to_string(snap_index++) + ".csv";
    std::ofstream out(path);
    if (!out)
      throw std::ios_base::failure("cannot write " + path);
    ptwg::write_snapshot(out, state, plan.grid);
  };

  const auto r = ptwg::scatter_packet(params, plan.spec, plan.grid, plan.t_final, options);
  auto deviation = [](double a, double b) { return b != 0.0 ? (a - b) / b : a - b; };
  std::printf("bandwidth Omega/delta: %.6f\n", r.bandwidth_ratio);
  std::printf("transmitted: %.6f  predicted %.6f  deviation %+.3e\n", r.transmitted,
              r.prediction.transmitted, deviation(r.transmitted, r.prediction.transmitted));
  std::printf("reflected:   %.6f  predicted %.6f  deviation %+.3e\n", r.reflected,
              r.prediction.reflected, deviation(r.reflected, r.prediction.reflected));
  std::printf("total norm:  %.6f  gained %+.6f\n", 1.0 + r.gained, r.gained);
  std::printf("norm balance residual: %.3e  (%zu steps)\n", r.norm_residual, r.steps);
  return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Scattering off adjacent gain and absorbing regions in a planar slab waveguide"};
  Options opt;
  app.add_option("--config", opt.config_path, "configuration file (key = value)");
  app.add_option("--models", opt.models, "models to evaluate")
      ->check(CLI::IsMember({"exact", "approx", "both"}));
  app.add_option("--sweep", opt.sweep, "override the sweep as START:STOP:N in omega/omega_c");
  app.add_option("--output", opt.output, "CSV output path");
  app.add_flag("--plot", opt.plot, "also write a gnuplot script next to the CSV");
  app.add_option("--plot-csv", opt.plot_csv, "print a gnuplot script for an existing CSV");
  app.add_flag("--check", opt.check, "run the property checks on the sweep");
  app.add_option("--threads", opt.threads, "worker threads for the sweep (0 = all cores)");
  app.add_flag("--packet", opt.packet, "run a wavepacket through the effective potential");
  app.add_option("--sigma-um", opt.sigma_um, "packet width in micrometres");
  app.add_option("--energy-ev", opt.energy_ev, "carrier energy above cutoff in eV");
  app.add_option("--from", opt.from, "incidence side")->check(CLI::IsMember({"left", "right"}));
  app.add_option("--snapshot-ps", opt.snapshot_ps, "write field snapshots at these times (ps)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (!opt.plot_csv.empty())
      return cmd_plot(opt.plot_csv);
    if (opt.packet)
      return cmd_packet(opt);
    return cmd_sweep(opt);
  } catch (const ptwg::ConfigParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const ptwg::ConfigValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const ptwg::PlacementError& e) {
    std::cerr << "packet error: " << e.what() << "\n";
    return exit_config;
  } catch (const ptwg::ContaminationError& e) {
    std::cerr << "packet error: " << e.what() << "\n";
    return exit_config;
  } catch (const ptwg::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  }
}
