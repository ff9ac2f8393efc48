#include "skewrec/csv.hpp"

#include <sstream>

#include "skewrec/error.hpp"

namespace skewrec {

static const char* kHeader = "m,n,measure_num,measure_den";

std::string profile_to_csv(const std::vector<ProfileRow>& rows) {
    std::ostringstream out;
    out << kHeader << "\n";
    for (const auto& row : rows)
        out << row.m << "," << row.n << "," << row.measure.num() << ","
            << row.measure.den() << "\n";
    return out.str();
}

std::vector<ProfileRow> profile_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<ProfileRow> rows;

    auto fail = [&](const std::string& why) -> void {
        throw parse_error("csv line " + std::to_string(lineno) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != kHeader)
                fail("expected header '" + std::string(kHeader) + "', got '" + line + "'");
            continue;
        }
        if (line.empty()) fail("empty row");

        std::vector<std::int64_t> fields;
        std::size_t start = 0;
        while (true) {
            auto comma = line.find(',', start);
            std::string cell = line.substr(start, comma == std::string::npos
                                                      ? std::string::npos
                                                      : comma - start);
            try {
                std::size_t used = 0;
                fields.push_back(std::stoll(cell, &used));
                if (used != cell.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                fail("'" + cell + "' is not an integer");
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 4) fail("expected 4 columns, got " + std::to_string(fields.size()));
        if (fields[0] < 1) fail("m must be positive");
        if (fields[1] < 1) fail("n must be positive");
        if (fields[3] < 1) fail("measure_den must be positive");
        rows.push_back(ProfileRow{fields[0], fields[1], Rational(fields[2], fields[3])});
    }
    if (lineno == 0) throw parse_error("csv line 1: missing header");
    return rows;
}

} // namespace skewrec
