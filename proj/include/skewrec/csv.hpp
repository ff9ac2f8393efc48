#pragma once

#include <string>
#include <vector>

#include "skewrec/skew.hpp"

namespace skewrec {

/// Header "m,n,measure_num,measure_den", one row per profile point, LF line
/// endings. Measures are exact rationals split across two integer columns.
std::string profile_to_csv(const std::vector<ProfileRow>& rows);

/// Inverse of profile_to_csv; malformed input raises parse_error naming the
/// line. Accepts CRLF and a missing final newline.
std::vector<ProfileRow> profile_from_csv(const std::string& text);

} // namespace skewrec
