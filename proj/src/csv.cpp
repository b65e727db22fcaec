#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "featred/errors.hpp"
#include "featred/feature_pipeline.hpp"

namespace featred {

namespace {

struct Record {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::vector<std::string> fields;
};

std::vector<Record> split_records(std::string_view text, char delimiter) {
  std::vector<Record> records;
  Record current;
  std::string field;
  std::size_t line = 1;
  current.line = line;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A blank line yields one empty field; skip it.
    if (!(current.fields.size() == 1 && current.fields.front().empty())) records.push_back(std::move(current));
    current = Record{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      ++line;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field starting on line " + std::to_string(current.line),
                                  current.line, current.fields.size() + 1);
  if (field_started || !field.empty() || !current.fields.empty()) end_record();
  return records;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& raw, std::size_t line, std::size_t column) {
  const std::string_view cell = trim(raw);
  auto fail = [&](const std::string& why) -> double {
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + why, line,
                     column);
  };
  if (cell.empty()) return fail("missing value");
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return fail("non-numeric value '" + std::string(cell) + "'");
  if (!std::isfinite(value)) return fail("non-finite value '" + std::string(cell) + "'");
  return value;
}

}  // namespace

FeatureMatrix parse_csv(std::string_view text, const CsvOptions& options) {
  const auto records = split_records(text, options.delimiter);
  if (records.empty()) throw InsufficientDataError("input has no rows");

  std::size_t body_start = 0;
  std::vector<std::string> names;
  const std::size_t width = records.front().fields.size();
  if (options.has_header) {
    for (const auto& n : records.front().fields) names.emplace_back(trim(n));
    body_start = 1;
  } else {
    for (std::size_t j = 0; j < width; ++j) names.push_back("f" + std::to_string(j + 1));
  }

  const std::size_t n = records.size() - body_start;
  for (std::size_t r = body_start; r < records.size(); ++r)
    if (records[r].fields.size() != width)
      throw ParseError("line " + std::to_string(records[r].line) + ": expected " + std::to_string(width) +
                           " fields, found " + std::to_string(records[r].fields.size()),
                       records[r].line, 0);
  if (n < 3) throw InsufficientDataError("need at least 3 observations, found " + std::to_string(n));

  Eigen::MatrixXd data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& rec = records[body_start + r];
    for (std::size_t j = 0; j < width; ++j)
      data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = parse_cell(rec.fields[j], rec.line, j + 1);
  }
  return FeatureMatrix(std::move(names), std::move(data));
}

FeatureMatrix load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), options);
}

std::string to_csv(const FeatureMatrix& fm, char delimiter) {
  auto quote = [&](const std::string& s) {
    if (s.find_first_of(std::string("\"\r\n") + delimiter) == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int j = 0; j < fm.features(); ++j) out << (j ? std::string(1, delimiter) : "") << quote(fm.name(j));
  out << '\n';
  for (Eigen::Index r = 0; r < fm.observations(); ++r) {
    for (int j = 0; j < fm.features(); ++j) out << (j ? std::string(1, delimiter) : "") << fm.data()(r, j);
    out << '\n';
  }
  return out.str();
}

}  // namespace featred
