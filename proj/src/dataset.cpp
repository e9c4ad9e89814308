#include "nulleq/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "nulleq/errors.hpp"

namespace nulleq::report {

namespace {

using Record = std::vector<std::string>;

// Splits the text into records. A quoted field may contain the delimiter,
// doubled quotes and line breaks. Blank lines are skipped.
std::vector<Record> split_records(std::string_view text, char delim) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  auto end_field = [&] {
    current.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.size() == 1 && current.front().empty();
    if (!blank) records.push_back(std::move(current));
    current.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == delim) {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw DataError("unterminated quoted field at end of input");
  if (field_started || !field.empty() || !current.empty()) end_record();
  return records;
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

std::size_t Dataset::index_of(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DataError("no column named '" + std::string(name) + "' in " + source);
  return static_cast<std::size_t>(it - names.begin());
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Dataset parse_csv(std::string_view text, const CsvOptions& options, std::string source) {
  Dataset ds;
  ds.source = std::move(source);
  ds.digest = fnv1a64(text);
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<Record> records = split_records(text, options.delimiter);
  if (records.empty()) throw DataError(ds.source + ": no rows");

  Record header;
  std::size_t first_data = 0;
  if (options.header) {
    header = records.front();
    for (auto& h : header) h = std::string(trim(h));
    first_data = 1;
  } else {
    for (std::size_t j = 0; j < records.front().size(); ++j) header.push_back("c" + std::to_string(j + 1));
  }
  const std::size_t width = header.size();

  std::size_t label_index = width;
  if (!options.label_column.empty()) {
    const auto it = std::find(header.begin(), header.end(), options.label_column);
    if (it == header.end()) throw DataError(ds.source + ": no label column '" + options.label_column + "'");
    label_index = static_cast<std::size_t>(it - header.begin());
  }
  for (std::size_t j = 0; j < width; ++j) {
    if (j == label_index) continue;
    ds.names.push_back(header[j]);
  }
  ds.columns.resize(ds.names.size());
  for (const auto& name : options.log_columns) {
    if (std::find(ds.names.begin(), ds.names.end(), name) == ds.names.end()) {
      throw DataError(ds.source + ": no column named '" + name + "' to log-transform");
    }
  }

  std::vector<double> row(ds.names.size());
  for (std::size_t r = first_data; r < records.size(); ++r) {
    const Record& rec = records[r];
    bool ok = rec.size() == width;
    for (std::size_t j = 0, k = 0; ok && j < width; ++j) {
      if (j == label_index) continue;
      const auto v = parse_number(rec[j]);
      if (!v) ok = false;
      else row[k++] = *v;
    }
    if (!ok) {
      ++ds.dropped_rows;
      continue;
    }
    for (std::size_t k = 0; k < row.size(); ++k) ds.columns[k].push_back(row[k]);
    ds.labels.push_back(label_index < width ? std::string(trim(rec[label_index]))
                                            : std::to_string(ds.labels.size() + 1));
    // rows are reported by record number in the file, header included
    if (!options.log_columns.empty()) {
      for (const auto& name : options.log_columns) {
        const std::size_t k = ds.index_of(name);
        double& v = ds.columns[k].back();
        if (!(v > 0.0)) {
          std::ostringstream msg;
          msg << ds.source << ": row " << (r + 1) << ", column '" << name << "': cannot take log of " << v;
          throw DataError(msg.str());
        }
        v = std::log(v);
      }
    }
  }
  if (ds.labels.empty()) throw DataError(ds.source + ": no usable rows");
  return ds;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return buf.str();
}

Dataset ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
  return parse_csv(read_file(path), options, path.string());
}

}  // namespace nulleq::report
