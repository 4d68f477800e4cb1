#include "collarspec/csv.hpp"

#include "collarspec/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace collarspec::csv {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Table& Table::begin_row() {
    rows_.emplace_back();
    rows_.back().reserve(header_.size());
    return *this;
}

Table& Table::col(double v) {
    rows_.back().push_back(format_double(v));
    return *this;
}

Table& Table::col(long long v) {
    rows_.back().push_back(std::to_string(v));
    return *this;
}

Table& Table::col(const std::string& v) {
    rows_.back().push_back(v);
    return *this;
}

std::string Table::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header_.size(); ++i)
        os << (i ? "," : "") << header_[i];
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << row[i];
        os << '\n';
    }
    return os.str();
}

void Table::write(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw validation_error("cannot open " + file.string());
    out << to_string();
}

} // namespace collarspec::csv
