#include "ptwg/report.hpp"

#include "ptwg/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>

namespace ptwg {

namespace {

std::string num(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

void write_point(std::ostream& out, double x, ModelKind model, const ModelPoint& p)
{
  out << num(x) << ',' << to_string(model) << ',';
  if (p.singular) {
    out << ",,,,,,,,,,,,singular\n";
    return;
  }
  const auto& a = p.amp;
  out << num(a.t_left.real()) << ',' << num(a.t_left.imag()) << ',' << num(a.r_left.real()) << ','
      << num(a.r_left.imag()) << ',' << num(a.t_right.real()) << ',' << num(a.t_right.imag())
      << ',' << num(a.r_right.real()) << ',' << num(a.r_right.imag()) << ',' << num(p.sums.left)
      << ',' << num(p.sums.right) << ',' << num(p.log10_left) << ',' << num(p.log10_right)
      << ",ok\n";
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

double field(std::string_view s, std::size_t line)
{
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw CsvFormatError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

} // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
  out << csv_header << '\n';
  for (const auto& row : rows) {
    if (row.exact)
      write_point(out, row.omega_over_omegac, ModelKind::Exact, *row.exact);
    if (row.approx)
      write_point(out, row.omega_over_omegac, ModelKind::Approximate, *row.approx);
  }
}

std::vector<CsvRecord> read_sweep_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line))
    throw CsvFormatError("empty CSV");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != csv_header)
    throw CsvFormatError("unexpected CSV header");

  std::vector<CsvRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto cols = split(line, ',');
    if (cols.size() != 15)
      throw CsvFormatError("line " + std::to_string(line_no) + ": expected 15 fields");
    CsvRecord rec;
    rec.omega_over_omegac = field(cols[0], line_no);
    if (cols[1] == "exact")
      rec.model = ModelKind::Exact;
    else if (cols[1] == "approx")
      rec.model = ModelKind::Approximate;
    else
      throw CsvFormatError("line " + std::to_string(line_no) + ": unknown model");
    if (cols[14] == "singular") {
      rec.singular = true;
    } else if (cols[14] == "ok") {
      auto c = [&](std::size_t re) {
        return cplx(field(cols[re], line_no), field(cols[re + 1], line_no));
      };
      rec.amp = {c(2), c(4), c(6), c(8)};
      rec.sums = {field(cols[10], line_no), field(cols[11], line_no)};
      rec.log10_left = field(cols[12], line_no);
      rec.log10_right = field(cols[13], line_no);
    } else {
      throw CsvFormatError("line " + std::to_string(line_no) + ": unknown status");
    }
    records.push_back(rec);
  }
  if (records.empty())
    throw CsvFormatError("CSV has no data rows");
  return records;
}

std::string plot_script(const std::vector<CsvRecord>& records, std::string_view csv_path)
{
  const bool has_exact = std::any_of(records.begin(), records.end(),
                                     [](const auto& r) { return r.model == ModelKind::Exact; });
  const bool has_approx = std::any_of(records.begin(), records.end(), [](const auto& r) {
    return r.model == ModelKind::Approximate;
  });

  std::string file = "\"";
  for (char ch : csv_path) {
    if (ch == '"' || ch == '\\')
      file += '\\';
    file += ch;
  }
  file += "\"";

  std::vector<std::string> series;
  auto add = [&](const char* model, int column, const char* style, const char* title) {
    series.push_back(file + " every ::1 using 1:(strcol(2) eq \"" + model + "\" ? $" +
                     std::to_string(column) + " : NaN) " + style + " title \"" + title + "\"");
  };
  if (has_exact) {
    add("exact", 13, "with lines lt 1 dt 1 lw 2", "exact, left incidence");
    add("exact", 14, "with lines lt 1 dt 2 lw 2", "exact, right incidence");
  }
  if (has_approx) {
    add("approx", 13, "with points lt 2 pt 7 ps 0.6", "effective, left incidence");
    add("approx", 14, "with points lt 2 pt 6 ps 0.6", "effective, right incidence");
  }

  std::string out;
  out += "# log10 of |T|^2 + |R|^2 for left and right incidence versus omega/omega_c\n";
  out += "set datafile separator \",\"\n";
  out += "set datafile missing \"\"\n";
  out += "set xlabel \"omega / omega_c\"\n";
  out += "set ylabel \"log10(|T|^2 + |R|^2)\"\n";
  out += "set key outside right top\n";
  out += "set grid\n";
  out += "plot ";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i)
      out += ", \\\n     ";
    out += series[i];
  }
  out += "\n";
  return out;
}

SweepSummary summarize(const std::vector<SweepRow>& rows, const MediumParams& params)
{
  SweepSummary s;
  s.rows = rows.size();
  for (const auto& row : rows) {
    if (row.exact && row.exact->singular)
      ++s.singular_rows;
    if (row.approx && row.approx->singular)
      ++s.singular_rows;
    s.max_exact_pt_defect =
        std::max(s.max_exact_pt_defect,
                 pt_defect(ModelKind::Exact, params, row.omega_over_omegac * params.omega_c()));
  }
  return s;
}

std::string manifest_json(const Config& config, const MediumParams& params,
                          const SweepSummary& summary, std::string_view models)
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  nlohmann::ordered_json j;
  j["tool"] = "ptwg";
  j["version"] = std::string(tool_version);
  j["timestamp"] = stamp;
  j["config"] = {{"slab_width_um", config.slab_width_um},
                 {"hbar_omega0_ev", config.hbar_omega0_ev},
                 {"hbar_omegap_ev", config.hbar_omegap_ev},
                 {"hbar_delta_ev", config.hbar_delta_ev},
                 {"region_length_um", config.region_length_um},
                 {"sweep_start", config.sweep_start},
                 {"sweep_stop", config.sweep_stop},
                 {"sweep_points", config.sweep_points},
                 {"output_path", config.output_path}};
  j["models"] = std::string(models);
  j["tuned_slab_width_m"] = params.slab_width();
  j["omega_c_rad_per_s"] = params.omega_c();
  j["regime"] = {{"omegap2_over_delta2", params.ratio_over_delta()},
                 {"omegap2_over_delta_omegac", params.ratio_over_cutoff()},
                 {"warning", params.regime_warning()}};
  j["rows"] = summary.rows;
  j["singular_rows"] = summary.singular_rows;
  j["max_exact_pt_defect"] = summary.max_exact_pt_defect;
  return j.dump(2) + "\n";
}

double PtUnitarityResidual::worst() const
{
  return std::max({unitarity_re, unitarity_im, left_phase, right_phase});
}

PtUnitarityResidual pt_unitarity_residual(const ScatteringAmplitudes& amp)
{
  const cplx t = amp.t_left;
  const cplx product = std::conj(amp.r_left) * amp.r_right;
  const cplx balance = std::norm(t) + product - 1.0;
  return {std::abs(balance.real()), std::abs(product.imag()),
          std::abs((std::conj(t) * amp.r_left).real()),
          std::abs((std::conj(t) * amp.r_right).real())};
}

std::vector<CheckOutcome> run_checks(const MediumParams& params, const std::vector<SweepRow>& rows,
                                     double start, double stop, int n, unsigned threads)
{
  std::vector<CheckOutcome> out;
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return std::string(buf);
  };
  auto each_point = [&](auto&& fn) {
    for (const auto& row : rows) {
      if (row.exact && !row.exact->singular)
        fn(row.omega_over_omegac, ModelKind::Exact, *row.exact);
      if (row.approx && !row.approx->singular)
        fn(row.omega_over_omegac, ModelKind::Approximate, *row.approx);
    }
  };

  {
    double worst = 0.0;
    each_point([&](double, ModelKind, const ModelPoint& p) {
      const double scale = std::max(std::abs(p.amp.t_left), std::abs(p.amp.t_right));
      if (scale > 0.0)
        worst = std::max(worst, std::abs(p.amp.t_left - p.amp.t_right) / scale);
    });
    out.push_back({"reciprocity t_left = t_right (1e-10 rel)", worst <= 1e-10,
                   "max relative difference " + fmt(worst)});
  }
  {
    ModelSelection both;
    const auto off = sweep(params.with_plasma_frequency(0.0), start, stop, n, both, threads);
    double worst = 0.0;
    for (const auto& row : off)
      for (const auto* p : {&row.exact, &row.approx})
        if (*p && !(*p)->singular)
          worst = std::max({worst, std::abs((*p)->sums.left - 1.0), std::abs((*p)->sums.right - 1.0)});
    out.push_back({"unitarity with omega_p = 0 (1e-10)", worst <= 1e-10,
                   "max |sum - 1| " + fmt(worst)});
  }
  {
    double worst = 0.0;
    std::size_t count = 0;
    each_point([&](double, ModelKind model, const ModelPoint& p) {
      if (model != ModelKind::Approximate)
        return;
      ++count;
      worst = std::max(worst, pt_unitarity_residual(p.amp).worst());
    });
    out.push_back({"PT generalised unitarity, effective model (1e-8)", worst <= 1e-8,
                   count ? "max residual " + fmt(worst) : "no effective-model rows"});
  }
  {
    std::size_t checked = 0, failed = 0;
    each_point([&](double x, ModelKind, const ModelPoint& p) {
      if (x < low_energy_window.first || x > low_energy_window.second)
        return;
      ++checked;
      if (!(p.sums.left > 1.0 && p.sums.right < 1.0))
        ++failed;
    });
    out.push_back({"low-energy asymmetry s_left > 1 > s_right", failed == 0,
                   std::to_string(checked) + " points checked, " + std::to_string(failed) +
                       " violations"});
  }
  return out;
}

} // namespace ptwg
