#pragma once

#include <string>
#include <vector>

namespace rramtk {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

/// Strict double parse of an entire field. Throws std::invalid_argument on
/// trailing junk or empty input.
double parse_double(const std::string& field);

/// Splits one CSV line on commas (no quoting; the toolkit's formats never
/// need it).
std::vector<std::string> split_csv_line(const std::string& line);

/// Neumaier-compensated sum.
double compensated_sum(const std::vector<double>& xs);

}  // namespace rramtk
