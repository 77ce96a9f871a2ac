#pragma once

#include "ptwg/models.hpp"
#include "ptwg/quantities.hpp"

#include <iosfwd>
#include <string>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace ptwg {

inline constexpr std::string_view tool_version = "1.0.0";

/// Column header of the sweep CSV.
inline constexpr std::string_view csv_header =
    "omega_over_omegac,model,t_left_re,t_left_im,r_left_re,r_left_im,t_right_re,t_right_im,"
    "r_right_re,r_right_im,sum_left,sum_right,log10_sum_left,log10_sum_right,status";

/// One CSV line per (frequency, model), ascending in frequency with exact
/// before approx. Singular rows keep the abscissa and model, leave numeric
/// fields empty and carry status "singular".
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// A parsed CSV line.
struct CsvRecord {
  double omega_over_omegac = 0.0;
  ModelKind model = ModelKind::Exact;
  bool singular = false;
  ScatteringAmplitudes amp;
  FluxSums sums;
  double log10_left = 0.0;
  double log10_right = 0.0;
};

class CsvFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Throws CsvFormatError on a wrong header, malformed line or empty body.
std::vector<CsvRecord> read_sweep_csv(std::istream& in);

/// gnuplot script drawing log10 flux sums against omega/omega_c: exact
/// model as solid (left) and dashed (right) lines, approximate model as
/// filled (left) and open (right) symbols. Output depends only on the
/// records and the path.
std::string plot_script(const std::vector<CsvRecord>& records, std::string_view csv_path);

struct SweepSummary {
  std::size_t rows = 0;          // frequency points
  std::size_t singular_rows = 0; // (frequency, model) pairs at a pole
  double max_exact_pt_defect = 0.0;
};

SweepSummary summarize(const std::vector<SweepRow>& rows, const MediumParams& params);

/// Manifest paired with every CSV: resolved config, version, UTC timestamp,
/// regime ratios and the singular-row count. JSON text.
std::string manifest_json(const Config& config, const MediumParams& params,
                          const SweepSummary& summary, std::string_view models);

/// Range of omega/omega_c over which gain dominates left incidence and
/// absorption dominates right incidence for the default medium.
inline constexpr std::pair<double, double> low_energy_window{1.0005, 1.019};

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Property checks on a configured sweep: reciprocity, unitarity with the
/// medium switched off, generalised unitarity of the approximate model and
/// the low-energy gain/absorption asymmetry.
std::vector<CheckOutcome> run_checks(const MediumParams& params, const std::vector<SweepRow>& rows,
                                     double start, double stop, int n, unsigned threads = 0);

/// Residuals of the PT generalised-unitarity relations
/// |t|^2 + conj(r_l) r_r = 1, Re(conj(t) r_l) = 0, Re(conj(t) r_r) = 0.
struct PtUnitarityResidual {
  double unitarity_re = 0.0;   // |Re(|t|^2 + conj(r_l) r_r - 1)|
  double unitarity_im = 0.0;   // |Im(conj(r_l) r_r)|
  double left_phase = 0.0;     // |Re(conj(t) r_l)|
  double right_phase = 0.0;    // |Re(conj(t) r_r)|

  double worst() const;
};

PtUnitarityResidual pt_unitarity_residual(const ScatteringAmplitudes& amp);

} // namespace ptwg
