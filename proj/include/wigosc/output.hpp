#pragma once

/// Deterministic tabular output.
///
/// Two mirrored serializations of the same table schema:
///   - CSV: `# key=value` metadata lines, one header row, comma-separated
///     data rows, "\n" line endings;
///   - JSON: {"meta": {...}, "data": {"columns": [...], "rows": [[...]]}}.
/// Floats are rendered in shortest round-trip form (never more than 17
/// significant digits), so identical inputs produce identical bytes and
/// parsing the file recovers the exact binary values.  Files are written to a
/// temporary sibling and renamed into place; readers never see partial data.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace wigosc::io {

/// Shortest decimal string that round-trips to exactly `v`.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;  // insertion-ordered
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(std::string key, std::string value) {
    meta.emplace_back(std::move(key), std::move(value));
  }
  void add_meta(std::string key, double value) { add_meta(std::move(key), format_double(value)); }
  void add_meta(std::string key, int value) { add_meta(std::move(key), std::to_string(value)); }
};

inline std::string to_csv(const Table& table) {
  std::string out;
  for (const auto& [key, value] : table.meta) out += "# " + key + "=" + value + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out += (c ? "," : "") + table.columns[c];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline void json_escape_into(std::string& out, std::string_view s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  out += '"';
}

}  // namespace detail

inline std::string to_json(const Table& table) {
  std::string out = "{\n  \"meta\": {";
  for (std::size_t i = 0; i < table.meta.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    detail::json_escape_into(out, table.meta[i].first);
    out += ": ";
    detail::json_escape_into(out, table.meta[i].second);
  }
  out += "\n  },\n  \"data\": {\n    \"columns\": [";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ", ";
    detail::json_escape_into(out, table.columns[c]);
  }
  out += "],\n    \"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += r ? ",\n      [" : "\n      [";
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      if (c) out += ", ";
      out += format_double(table.rows[r][c]);
    }
    out += ']';
  }
  out += "\n    ]\n  }\n}\n";
  return out;
}

/// Writes `content` to `path` through a temporary file plus atomic rename.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
    if (!stream) throw std::runtime_error("cannot open for writing: " + tmp.string());
    stream.write(content.data(), static_cast<std::streamsize>(content.size()));
    stream.flush();
    if (!stream) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
}

}  // namespace wigosc::io
