#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "speclab/types.hpp"

namespace speclab::io {

using Json = nlohmann::ordered_json;

// Shortest round-trip-safe decimal form; identical across runs and platforms
// that share IEEE-754 doubles.
[[nodiscard]] inline std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    if (header.empty()) throw Error("CsvWriter: header must name at least one column");
    append_row(header);
  }

  void add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
      throw ShapeError("CsvWriter: row width does not match header");
    append_row(cells);
    ++rows_;
  }

  void add_row(std::initializer_list<double> values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (const double v : values) cells.push_back(format_double(v));
    add_row(cells);
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] const std::string& str() const { return body_; }

 private:
  void append_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) body_.push_back(',');
      body_ += cells[i];
    }
    body_.push_back('\n');
  }

  std::string body_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("write_text_file: cannot open " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write_text_file: short write to " + path.string());
}

[[nodiscard]] inline std::string serialize_json(const Json& j) { return j.dump(2) + "\n"; }

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, serialize_json(j));
}

[[nodiscard]] inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_text_file: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace speclab::io
