#pragma once
// Locale-independent numeric formatting shared by the registry and the
// experiment output writers.

#include <string>
#include <string_view>

namespace memtwin {

// Shortest decimal string that round-trips the exact double value.
// Non-finite values format as "inf", "-inf", "nan".
std::string fmt_double(double v);

// Inverse of fmt_double; throws std::invalid_argument on malformed input
// (including trailing characters).
double parse_double(std::string_view s);

}  // namespace memtwin
