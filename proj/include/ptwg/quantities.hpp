#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ptwg {

/// Exact SI values (2019 redefinition).
namespace constants {
inline constexpr double c = 299792458.0;          // m/s
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double e_charge = 1.602176634e-19; // C
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

inline constexpr double micrometre = 1e-6;

/// Photon energy in eV to angular frequency in rad/s.
double ev_to_angular(double energy_ev);
double angular_to_ev(double omega);

inline double ev_to_joule(double energy_ev) { return energy_ev * constants::e_charge; }
inline double joule_to_ev(double energy) { return energy / constants::e_charge; }

/// Cutoff of the lowest mode of a parallel-plate guide of full width
/// `slab_width` (metres): c*pi/width.
double cutoff_frequency(double slab_width);

/// Run configuration. Physical magnitudes are kept in the units named by the
/// key; conversion to SI happens when the medium is built.
struct Config {
  double slab_width_um = 0.124;
  double hbar_omega0_ev = 5.0;
  double hbar_omegap_ev = 0.2;
  double hbar_delta_ev = 1.25;
  double region_length_um = 19.7;
  double sweep_start = 1.0005;
  double sweep_stop = 1.10;
  int sweep_points = 400;
  std::string output_path = "results.csv";

  bool operator==(const Config&) const = default;
};

/// Parses `key = value` lines. Blank lines and `#` comments are ignored;
/// missing keys keep their defaults. Throws ConfigParseError on malformed
/// or unknown lines and ConfigValidationError if the result is invalid.
Config parse_config(std::string_view text);

Config load_config(const std::filesystem::path& path);

/// Throws ConfigValidationError naming the first offending key.
void validate(const Config& config);

/// Renders a config in the same key = value format parse_config accepts.
std::string format_config(const Config& config);

} // namespace ptwg
