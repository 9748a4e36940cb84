// csv.hpp: Locale-independent CSV emission

#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sln::cli {

// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_number(double v);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);

    CsvWriter& field(double v);
    CsvWriter& field(std::size_t v);
    CsvWriter& field(std::string_view text);
    void end_row(); // throws if the column count differs from the header

private:
    std::ostream& out_;
    std::size_t columns_;
    std::size_t in_row_{0};
};

} // namespace sln::cli
