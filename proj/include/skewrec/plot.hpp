#pragma once

#include <string>

namespace skewrec {

/// Renders a profile CSV document as a self-contained SVG line plot of
/// measure against n, one series and legend entry per m value (ascending).
/// Pure function of the CSV bytes; malformed CSV raises parse_error with
/// the offending line number. Zero rows give an empty-axes plot, a single
/// point gets a marker without a line.
std::string plot_profile_svg(const std::string& csv_text);

} // namespace skewrec
