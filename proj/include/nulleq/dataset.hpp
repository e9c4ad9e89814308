#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nulleq::report {

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  /// Columns replaced by their natural logarithm after parsing.
  std::vector<std::string> log_columns;
  /// Optional text column used as observation labels instead of data.
  std::string label_column;
};

/// Rectangular numeric table. Rows with a missing or non-numeric cell (or
/// the wrong number of fields) are dropped during ingestion and counted.
struct Dataset {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> labels;  ///< from label_column, else "1", "2", ...
  std::string source;
  std::uint64_t digest = 0;  ///< FNV-1a of the raw input bytes
  std::size_t dropped_rows = 0;

  std::size_t rows() const noexcept { return labels.size(); }
  /// Throws DataError naming the column when absent.
  std::size_t index_of(std::string_view name) const;
  const std::vector<double>& column(std::string_view name) const { return columns[index_of(name)]; }
};

/// Parses CSV text (RFC 4180 quoting, LF or CRLF line ends, optional
/// header). Without a header, columns are named c1, c2, ...
/// Throws DataError on zero usable rows, unknown log/label columns, or a
/// non-positive value under a log transform (naming row and column).
Dataset parse_csv(std::string_view text, const CsvOptions& options = {}, std::string source = "<memory>");

/// Reads and parses a file. Unreadable files raise IoError.
Dataset ingest_csv(const std::filesystem::path& path, const CsvOptions& options = {});

std::string read_file(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace nulleq::report
