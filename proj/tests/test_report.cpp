#include "ptwg/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace ptwg;

namespace {

const MediumParams reference = MediumParams::from_config(Config{});

bool close(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)); }

bool close(cplx a, cplx b) { return close(a.real(), b.real()) && close(a.imag(), b.imag()); }

std::string to_csv(const std::vector<SweepRow>& rows)
{
  std::ostringstream out;
  write_sweep_csv(out, rows);
  return out.str();
}

std::vector<CsvRecord> parse(const std::string& text)
{
  std::istringstream in(text);
  return read_sweep_csv(in);
}

std::size_t count(const std::string& text, std::string_view needle)
{
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
    ++n;
  return n;
}

} // namespace

TEST_CASE("CSV layout")
{
  const auto rows = sweep(reference, 1.0005, 1.1, 5);
  const auto text = to_csv(rows);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == csv_header);

  std::vector<std::string> lines;
  while (std::getline(in, line))
    lines.push_back(line);
  REQUIRE(lines.size() == 10);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    CHECK(count(lines[i], ",") == 14);
    CHECK(lines[i].find(i % 2 == 0 ? ",exact," : ",approx,") != std::string::npos);
    CHECK(lines[i].substr(lines[i].size() - 3) == ",ok");
  }
}

TEST_CASE("CSV round trip")
{
  const auto rows = sweep(reference, 1.0005, 1.1, 7);
  const auto records = parse(to_csv(rows));
  REQUIRE(records.size() == 14);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int m = 0; m < 2; ++m) {
      const auto& rec = records[2 * i + m];
      const auto& point = m == 0 ? *rows[i].exact : *rows[i].approx;
      CHECK(rec.model == (m == 0 ? ModelKind::Exact : ModelKind::Approximate));
      CHECK(close(rec.omega_over_omegac, rows[i].omega_over_omegac));
      CHECK_FALSE(rec.singular);
      CHECK(close(rec.amp.t_left, point.amp.t_left));
      CHECK(close(rec.amp.r_left, point.amp.r_left));
      CHECK(close(rec.amp.t_right, point.amp.t_right));
      CHECK(close(rec.amp.r_right, point.amp.r_right));
      CHECK(close(rec.sums.left, point.sums.left));
      CHECK(close(rec.sums.right, point.sums.right));
      CHECK(close(rec.log10_left, point.log10_left));
      CHECK(close(rec.log10_right, point.log10_right));
    }
  }
}

TEST_CASE("singular rows keep abscissa and model only")
{
  SweepRow row;
  row.omega_over_omegac = 1.25;
  row.exact = ModelPoint{};
  row.exact->singular = true;
  const auto text = to_csv({row});
  CHECK(text.find("1.250000000000000e+00,exact,,,,,,,,,,,,,singular\n") != std::string::npos);
  CHECK(text.find(",approx,") == std::string::npos);
  CHECK(count(text, ",") == 28);

  const auto records = parse(text);
  REQUIRE(records.size() == 1);
  CHECK(records[0].singular);
  CHECK(records[0].omega_over_omegac == 1.25);
  CHECK(records[0].model == ModelKind::Exact);
}

TEST_CASE("malformed CSV input")
{
  const std::string header = std::string(csv_header) + "\n";
  const std::string good = "1.01,approx,1,0,0,0,1,0,0,0,1,1,0,0,ok\n";
  CHECK_NOTHROW(parse(header + good));
  CHECK_NOTHROW(parse(header + "\n" + good + "\n"));
  // Windows line endings are accepted.
  CHECK_NOTHROW(parse(std::string(csv_header) + "\r\n" + "1.01,approx,1,0,0,0,1,0,0,0,1,1,0,0,ok\r\n"));

  CHECK_THROWS_AS(parse(""), CsvFormatError);
  CHECK_THROWS_AS(parse(header), CsvFormatError);
  CHECK_THROWS_AS(parse("omega,model\n" + good), CsvFormatError);
  CHECK_THROWS_AS(parse(header + "1.01,approx,1,0,0,0,1,0,0,0,1,1,0,ok\n"), CsvFormatError);
  CHECK_THROWS_AS(parse(header + "1.01,approx,1,0,0,0,1,0,0,0,1,1,0,0,0,ok\n"), CsvFormatError);
  CHECK_THROWS_AS(parse(header + "1.01,other,1,0,0,0,1,0,0,0,1,1,0,0,ok\n"), CsvFormatError);
  CHECK_THROWS_AS(parse(header + "1.01,approx,1,0,0,0,1,0,0,0,1,1,0,0,maybe\n"), CsvFormatError);
  CHECK_THROWS_AS(parse(header + "1.01,approx,x,0,0,0,1,0,0,0,1,1,0,0,ok\n"), CsvFormatError);
  CHECK_THROWS_AS(parse(header + "1.01,approx,1.5e,0,0,0,1,0,0,0,1,1,0,0,ok\n"), CsvFormatError);

  try {
    parse(header + good + "1.02,approx,1,0,0,0,1,0,0,0,1,1,0,ok\n");
    FAIL("expected a format error");
  } catch (const CsvFormatError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("plot script")
{
  const auto records = parse(to_csv(sweep(reference, 1.0005, 1.1, 11)));
  const auto script = plot_script(records, "out/sweep.csv");
  CHECK(script == plot_script(records, "out/sweep.csv"));
  CHECK(script.find("set datafile separator \",\"") != std::string::npos);
  CHECK(count(script, "\"out/sweep.csv\"") == 4);
  CHECK(count(script, "with lines") == 2);
  CHECK(count(script, "with points") == 2);
  CHECK(script.find("dt 2") != std::string::npos);
  CHECK(script.find("pt 7") != std::string::npos);
  CHECK(script.find("pt 6") != std::string::npos);
  CHECK(script.find("$13") != std::string::npos);
  CHECK(script.find("$14") != std::string::npos);

  std::vector<CsvRecord> approx_only;
  for (const auto& r : records)
    if (r.model == ModelKind::Approximate)
      approx_only.push_back(r);
  const auto partial = plot_script(approx_only, "a.csv");
  CHECK(count(partial, "with lines") == 0);
  CHECK(count(partial, "with points") == 2);

  CHECK(plot_script(records, "we\"ird.csv").find("\"we\\\"ird.csv\"") != std::string::npos);
}

TEST_CASE("sweep summary")
{
  const auto rows = sweep(reference, 1.0005, 1.1, 21);
  const auto s = summarize(rows, reference);
  CHECK(s.rows == 21);
  CHECK(s.singular_rows == 0);
  CHECK(s.max_exact_pt_defect ==
        doctest::Approx(pt_defect(ModelKind::Exact, reference, 1.1 * reference.omega_c())));

  auto with_pole = rows;
  with_pole[3].approx->singular = true;
  with_pole[4].exact->singular = true;
  CHECK(summarize(with_pole, reference).singular_rows == 2);
}

TEST_CASE("manifest")
{
  Config config;
  config.output_path = "out/sweep.csv";
  const auto rows = sweep(reference, 1.0005, 1.1, 5);
  const auto j = nlohmann::json::parse(
      manifest_json(config, reference, summarize(rows, reference), "exact,approx"));
  CHECK(j.at("tool") == "ptwg");
  CHECK(j.at("version") == std::string(tool_version));
  const std::string stamp = j.at("timestamp");
  CHECK(stamp.size() == 20);
  CHECK(stamp.back() == 'Z');
  CHECK(j.at("config").at("hbar_omega0_ev") == 5.0);
  CHECK(j.at("config").at("output_path") == "out/sweep.csv");
  CHECK(j.at("config").at("sweep_points") == config.sweep_points);
  CHECK(j.at("models") == "exact,approx");
  CHECK(j.at("regime").at("omegap2_over_delta2").get<double>() == doctest::Approx(0.0256));
  CHECK(j.at("regime").at("omegap2_over_delta_omegac").get<double>() == doctest::Approx(0.0064));
  CHECK(j.at("regime").at("warning") == false);
  CHECK(j.at("rows") == 5);
  CHECK(j.at("singular_rows") == 0);
  CHECK(j.at("omega_c_rad_per_s").get<double>() == doctest::Approx(reference.omega_c()));
}

TEST_CASE("property checks on the default sweep")
{
  const Config config;
  const auto rows = sweep(reference, config.sweep_start, config.sweep_stop, config.sweep_points);
  const auto outcomes =
      run_checks(reference, rows, config.sweep_start, config.sweep_stop, config.sweep_points);
  REQUIRE(outcomes.size() == 4);
  for (const auto& o : outcomes) {
    INFO(o.name << ": " << o.detail);
    CHECK(o.passed);
  }
  CHECK(outcomes[3].detail.find("0 violations") != std::string::npos);
}

TEST_CASE("property checks catch a broken row")
{
  auto rows = sweep(reference, 1.001, 1.01, 4);
  rows[1].approx->amp.t_right *= 1.001;
  rows[2].exact->sums.right = 1.2;
  const auto outcomes = run_checks(reference, rows, 1.001, 1.01, 4, 1);
  REQUIRE(outcomes.size() == 4);
  CHECK_FALSE(outcomes[0].passed);
  CHECK(outcomes[1].passed);
  CHECK(outcomes[2].passed);
  CHECK_FALSE(outcomes[3].passed);
}

TEST_CASE("generalised unitarity residual")
{
  // A lossless symmetric barrier scatters with r_l = r_r and t r* purely
  // imaginary; unitarity then reads |t|^2 + |r|^2 = 1.
  const double theta = 0.3;
  const cplx t = std::polar(std::cos(theta), 0.7);
  const cplx r = cplx(0.0, std::sin(theta)) * std::polar(1.0, 0.7);
  const auto ok = pt_unitarity_residual({t, r, t, r});
  CHECK(ok.worst() <= 1e-15);

  const auto off = pt_unitarity_residual({1.1 * t, r, 1.1 * t, r});
  CHECK(off.unitarity_re == doctest::Approx(0.21 * std::norm(t)));
  CHECK(off.unitarity_im <= 1e-15);
  CHECK(off.worst() == off.unitarity_re);

  const auto phase = pt_unitarity_residual({t, r * std::polar(1.0, 0.2), t, r});
  CHECK(phase.left_phase == doctest::Approx(std::abs(t) * std::abs(r) * std::sin(0.2)));
  CHECK(phase.unitarity_im > 0.0);
  CHECK(phase.right_phase <= 1e-15);
}
