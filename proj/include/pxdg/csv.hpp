#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace pxdg {

/// Floats with 17 significant digits, so values round-trip.
std::string format_double(double v);

/// Comma-separated rows; a header must be written before any data row.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void header(std::initializer_list<std::string> names);
  void header(const std::vector<std::string>& names);
  void row(std::initializer_list<Cell> cells);
  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& os_;
  std::size_t columns_ = 0;
};

/// Writes to `path` through a temporary file and a rename, so readers never
/// see a partial file. Parent directories are created.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace pxdg
