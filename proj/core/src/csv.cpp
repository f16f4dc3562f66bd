#include "fibflow/csv.hpp"

#include <fmt/format.h>

#include <fstream>

#include "fibflow/error.hpp"

namespace fibflow {
namespace {

std::string csv_quote(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::add(double value) {
  rows_.back().push_back(format_double(value));
  return *this;
}

CsvTable& CsvTable::add(std::int64_t value) {
  rows_.back().push_back(fmt::format("{}", value));
  return *this;
}

CsvTable& CsvTable::add(std::uint64_t value) {
  rows_.back().push_back(fmt::format("{}", value));
  return *this;
}

CsvTable& CsvTable::add(bool value) {
  rows_.back().push_back(value ? "1" : "0");
  return *this;
}

CsvTable& CsvTable::add(std::string_view text) {
  rows_.back().push_back(csv_quote(text));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  std::vector<std::string> head;
  for (const auto& h : header_) head.push_back(csv_quote(h));
  emit(head);
  for (const auto& r : rows_) {
    if (r.size() != header_.size()) {
      throw Error(ErrorKind::invalid_argument,
                  fmt::format("csv row has {} cells, header has {}", r.size(), header_.size()));
    }
    emit(r);
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text_file(path, str()); }

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::invalid_argument, "cannot open " + path.string() + " for writing");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw Error(ErrorKind::invalid_argument, "write to " + path.string() + " failed");
}

}  // namespace fibflow
