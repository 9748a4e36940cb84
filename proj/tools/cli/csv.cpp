#include "csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace sln::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
    for (const auto& h : header) field(std::string_view(h));
    end_row();
}

CsvWriter& CsvWriter::field(double v) { return field(std::string_view(format_number(v))); }

CsvWriter& CsvWriter::field(std::size_t v) { return field(std::string_view(std::to_string(v))); }

CsvWriter& CsvWriter::field(std::string_view text) {
    if (in_row_++ > 0) out_ << ',';
    if (text.find_first_of(",\"\n") != std::string_view::npos) {
        out_ << '"';
        for (char c : text) {
            if (c == '"') out_ << '"';
            out_ << c;
        }
        out_ << '"';
    } else {
        out_ << text;
    }
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_)
        throw std::logic_error("csv row has " + std::to_string(in_row_) + " fields, header has " +
                               std::to_string(columns_));
    out_ << '\n';
    in_row_ = 0;
}

} // namespace sln::cli
