#include "bacs/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "bacs/error.hpp"

namespace bacs {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(std::string_view field, long line) {
  field = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError("cannot parse '" + std::string(field) + "' as a number", line);
  }
  return v;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DataError("missing column '" + std::string(name) + "'", 1);
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  long lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      table.comments.emplace_back(trim(view.substr(1)));
      continue;
    }
    const auto fields = split(view);
    if (!have_header) {
      for (auto f : fields) table.header.emplace_back(f);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw DataError("expected " + std::to_string(table.header.size()) + " fields, found " +
                          std::to_string(fields.size()),
                      lineno);
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_real(f, lineno));
    table.rows.push_back(std::move(row));
    table.row_lines.push_back(lineno);
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file", path.string());
  return read_csv(in);
}

std::vector<double> read_observations(std::istream& in) {
  std::vector<double> xs;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = trim(line);
    if (view.empty()) continue;
    const double x = parse_real(view, lineno);
    if (!(x >= 0.0 && x <= 1.0)) throw DataError("observation outside [0,1]", lineno);
    xs.push_back(x);
  }
  return xs;
}

IntervalCsvWriter::IntervalCsvWriter(std::ostream& out) : out_(out) {
  out_ << "n,x,lower,upper,raw_lower,raw_upper,empty_flag\n";
  out_.flush();
}

void IntervalCsvWriter::write(std::size_t n, double x, const StepReport& report) {
  out_ << n << ',' << format_real(x) << ',' << format_real(report.running.lower) << ','
       << format_real(report.running.upper) << ',' << format_real(report.raw.lower) << ','
       << format_real(report.raw.upper) << ',' << (report.running.empty ? 1 : 0) << '\n';
  out_.flush();
}

}  // namespace bacs
