#include "ptwg/quantities.hpp"

#include "ptwg/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ptwg {

double ev_to_angular(double energy_ev)
{
  if (!(energy_ev >= 0.0))
    throw DomainError("energy must be non-negative");
  return energy_ev * constants::e_charge / constants::hbar;
}

double angular_to_ev(double omega)
{
  if (!(omega >= 0.0))
    throw DomainError("angular frequency must be non-negative");
  return omega * constants::hbar / constants::e_charge;
}

double cutoff_frequency(double slab_width)
{
  if (!(slab_width > 0.0))
    throw DomainError("slab width must be positive");
  return constants::c * constants::pi / slab_width;
}

namespace {

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view value, std::size_t line)
{
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigParseError(line, "not a number: '" + std::string(value) + "'");
  return out;
}

int parse_int(std::string_view value, std::size_t line)
{
  int out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigParseError(line, "not an integer: '" + std::string(value) + "'");
  return out;
}

void require_positive(double v, const char* key)
{
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigValidationError(key, "must be a positive finite number");
}

} // namespace

void validate(const Config& config)
{
  require_positive(config.slab_width_um, "slab_width_um");
  require_positive(config.hbar_omega0_ev, "hbar_omega0_ev");
  require_positive(config.hbar_omegap_ev, "hbar_omegap_ev");
  require_positive(config.hbar_delta_ev, "hbar_delta_ev");
  require_positive(config.region_length_um, "region_length_um");
  if (!(config.sweep_start > 1.0) || !std::isfinite(config.sweep_start))
    throw ConfigValidationError("sweep_start", "must exceed 1 (propagation requires omega > omega_c)");
  if (!(config.sweep_stop > config.sweep_start) || !std::isfinite(config.sweep_stop))
    throw ConfigValidationError("sweep_stop", "must exceed sweep_start");
  if (config.sweep_points < 2)
    throw ConfigValidationError("sweep_points", "must be at least 2");
  if (config.output_path.empty())
    throw ConfigValidationError("output_path", "must not be empty");
}

Config parse_config(std::string_view text)
{
  Config config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigParseError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigParseError(line_no, "expected 'key = value'");

    if (key == "slab_width_um")
      config.slab_width_um = parse_double(value, line_no);
    else if (key == "hbar_omega0_ev")
      config.hbar_omega0_ev = parse_double(value, line_no);
    else if (key == "hbar_omegap_ev")
      config.hbar_omegap_ev = parse_double(value, line_no);
    else if (key == "hbar_delta_ev")
      config.hbar_delta_ev = parse_double(value, line_no);
    else if (key == "region_length_um")
      config.region_length_um = parse_double(value, line_no);
    else if (key == "sweep_start")
      config.sweep_start = parse_double(value, line_no);
    else if (key == "sweep_stop")
      config.sweep_stop = parse_double(value, line_no);
    else if (key == "sweep_points")
      config.sweep_points = parse_int(value, line_no);
    else if (key == "output_path")
      config.output_path = std::string(value);
    else
      throw ConfigParseError(line_no, "unknown key '" + std::string(key) + "'");
  }
  validate(config);
  return config;
}

Config load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::ios_base::failure("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const Config& config)
{
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out;
  out += "slab_width_um = " + num(config.slab_width_um) + "\n";
  out += "hbar_omega0_ev = " + num(config.hbar_omega0_ev) + "\n";
  out += "hbar_omegap_ev = " + num(config.hbar_omegap_ev) + "\n";
  out += "hbar_delta_ev = " + num(config.hbar_delta_ev) + "\n";
  out += "region_length_um = " + num(config.region_length_um) + "\n";
  out += "sweep_start = " + num(config.sweep_start) + "\n";
  out += "sweep_stop = " + num(config.sweep_stop) + "\n";
  out += "sweep_points = " + std::to_string(config.sweep_points) + "\n";
  out += "output_path = " + config.output_path + "\n";
  return out;
}

} // namespace ptwg
