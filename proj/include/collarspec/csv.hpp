#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace collarspec::csv {

// 17 significant digits, '.' decimal separator, locale-independent.
std::string format_double(double x);

class Table {
  public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    Table& begin_row();
    Table& col(double v);
    Table& col(long long v);
    Table& col(int v) { return col(static_cast<long long>(v)); }
    Table& col(const std::string& v);

    // Comma-separated, header row, LF line endings.
    void write(const std::filesystem::path& file) const;
    std::string to_string() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace collarspec::csv
