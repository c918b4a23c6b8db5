#pragma once

#include <string>

namespace kdvtbc {

/// Shortest decimal form that round-trips to the same double (at most 17 digits).
std::string format_double(double v);
/// Strict parse of a full token; throws ParameterError.
double parse_double(const std::string& token);

} // namespace kdvtbc
