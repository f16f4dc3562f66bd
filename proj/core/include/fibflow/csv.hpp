#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fibflow {

/// 17 significant digits, "%.17g" style.
std::string format_double(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& add(double value);
  CsvTable& add(std::int64_t value);
  CsvTable& add(std::uint64_t value);
  CsvTable& add(int value) { return add(static_cast<std::int64_t>(value)); }
  CsvTable& add(bool value);
  CsvTable& add(std::string_view text);
  CsvTable& add(const char* text) { return add(std::string_view(text)); }

  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<std::string>& header() const noexcept { return header_; }

  /// LF line endings, header first. Throws invalid_argument when a row's width
  /// differs from the header.
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes bytes exactly as given (binary mode).
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace fibflow
