#pragma once

// Minimal numeric CSV reading and the streaming interval writer.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "bacs/wealth.hpp"

namespace bacs {

/// Shortest round-trip decimal form ("%.17g"); NaN prints as "nan".
std::string format_real(double v);

/// Parses a full field as a real; throws DataError naming `line`.
double parse_real(std::string_view field, long line);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<long> row_lines;        // 1-based source line of each row
  std::vector<std::string> comments;  // lines starting with '#', without the '#'

  /// Index of the named column; throws DataError when absent.
  std::size_t column(std::string_view name) const;
};

/// Header row then numeric rows. Blank lines are skipped.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// One real per non-blank line.
std::vector<double> read_observations(std::istream& in);

/// Streaming per-step output: n, x, lower, upper, raw_lower, raw_upper,
/// empty_flag. Every row is flushed.
class IntervalCsvWriter {
 public:
  explicit IntervalCsvWriter(std::ostream& out);
  void write(std::size_t n, double x, const StepReport& report);

 private:
  std::ostream& out_;
};

}  // namespace bacs
