#ifndef ACEV_REPORT_IO_HPP
#define ACEV_REPORT_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acev/convergence.hpp"
#include "acev/model.hpp"

namespace acev {

inline constexpr std::string_view kCsvHeader =
    "scheme,alpha,gamma,a,k,sigma1,sigma2,x0,T,n,samples,seed,metric,value,stderr";

// Shortest representation that parses back to the same double.
std::string format_double(double v);

struct CsvRow {
  std::string scheme;
  ModelParams params;
  double T = 1.0;
  std::size_t n = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
  double stderr_value = 0.0;
};

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const CsvRow& row);
// Parses rows written by write_csv_row (header line must be present).
std::vector<CsvRow> read_csv(std::istream& is);

struct PlotRow {
  std::string series;
  double x = 0.0;
  double y = 0.0;
  double err = 0.0;
};

// Rate reports: one `rate` row (x = alpha) plus the three reference rows
// `ref_half`, `ref_inv2alpha`, `ref_alpha_quarter` per report.
std::vector<PlotRow> plot_rows(std::span<const RateReport> reports);
// Strong-error reports: one `s_n` row per report (x = n).
std::vector<PlotRow> plot_rows(std::span<const StrongErrorReport> reports);

// Whitespace-delimited `series x y err` lines after `#` comment headers.
// Throws std::invalid_argument on empty input.
void emit_plot_data(std::ostream& os, std::span<const RateReport> reports);
void emit_plot_data(std::ostream& os, std::span<const StrongErrorReport> reports);

std::vector<PlotRow> parse_plot_data(std::istream& is);

}  // namespace acev

#endif  // ACEV_REPORT_IO_HPP
