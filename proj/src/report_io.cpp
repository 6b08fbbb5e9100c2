#include "acev/report_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace acev {

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

template <class Int>
Int parse_integer(std::string_view s) {
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void emit_rows(std::ostream& os, std::string_view x_label, std::string_view y_label,
               const std::vector<PlotRow>& rows) {
  os << "# x: " << x_label << "\n# y: " << y_label << "\n# columns: series x y err\n";
  for (const auto& r : rows) {
    os << r.series << ' ' << format_double(r.x) << ' ' << format_double(r.y) << ' '
       << format_double(r.err) << '\n';
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& os, const CsvRow& r) {
  const auto& p = r.params;
  os << r.scheme << ',' << format_double(p.alpha) << ',' << format_double(p.gamma) << ','
     << format_double(p.a) << ',' << format_double(p.k) << ',' << format_double(p.sigma1) << ','
     << format_double(p.sigma2) << ',' << format_double(p.x0) << ',' << format_double(r.T) << ','
     << r.n << ',' << r.samples << ',' << r.seed << ',' << r.metric << ','
     << format_double(r.value) << ',' << format_double(r.stderr_value) << '\n';
}

std::vector<CsvRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw std::invalid_argument("missing or unexpected CSV header");
  }
  std::vector<CsvRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 15) throw std::invalid_argument("CSV row has wrong field count: " + line);
    CsvRow r;
    r.scheme = std::string(f[0]);
    r.params.alpha = parse_double(f[1]);
    r.params.gamma = parse_double(f[2]);
    r.params.a = parse_double(f[3]);
    r.params.k = parse_double(f[4]);
    r.params.sigma1 = parse_double(f[5]);
    r.params.sigma2 = parse_double(f[6]);
    r.params.x0 = parse_double(f[7]);
    r.T = parse_double(f[8]);
    r.n = parse_integer<std::size_t>(f[9]);
    r.samples = parse_integer<std::size_t>(f[10]);
    r.seed = parse_integer<std::uint64_t>(f[11]);
    r.metric = std::string(f[12]);
    r.value = parse_double(f[13]);
    r.stderr_value = parse_double(f[14]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<PlotRow> plot_rows(std::span<const RateReport> reports) {
  std::vector<PlotRow> rows;
  for (const auto& r : reports) rows.push_back({"rate", r.alpha, r.rate_estimate, r.rate_stderr});
  for (const auto& r : reports) rows.push_back({"ref_half", r.alpha, r.reference.half, 0.0});
  for (const auto& r : reports) {
    rows.push_back({"ref_inv2alpha", r.alpha, r.reference.inv2alpha, 0.0});
  }
  for (const auto& r : reports) {
    rows.push_back({"ref_alpha_quarter", r.alpha, r.reference.alpha_quarter, 0.0});
  }
  return rows;
}

std::vector<PlotRow> plot_rows(std::span<const StrongErrorReport> reports) {
  std::vector<PlotRow> rows;
  for (const auto& r : reports) {
    rows.push_back({"s_n", static_cast<double>(r.n), r.s_n, r.std_error});
  }
  return rows;
}

void emit_plot_data(std::ostream& os, std::span<const RateReport> reports) {
  if (reports.empty()) throw std::invalid_argument("no rate reports to plot");
  emit_rows(os, "alpha", "strong convergence rate", plot_rows(reports));
}

void emit_plot_data(std::ostream& os, std::span<const StrongErrorReport> reports) {
  if (reports.empty()) throw std::invalid_argument("no strong-error reports to plot");
  emit_rows(os, "n", "S_n = E|X_T^{2n} - X_T^n|", plot_rows(reports));
}

std::vector<PlotRow> parse_plot_data(std::istream& is) {
  std::vector<PlotRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string series, x, y, err;
    if (!(fields >> series >> x >> y >> err)) {
      throw std::invalid_argument("malformed plot data line: " + line);
    }
    rows.push_back({series, parse_double(x), parse_double(y), parse_double(err)});
  }
  return rows;
}

}  // namespace acev
