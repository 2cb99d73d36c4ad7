#pragma once

// Small text helpers shared by the kernel, data and runner parsers.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kpcab {

using ParamList = std::vector<std::pair<std::string, std::string>>;

std::string_view trim(std::string_view s) noexcept;

/// Splits "family:key=value,key=value" into the family name and its
/// parameters. The parameter part is optional.
std::pair<std::string, ParamList> split_family(std::string_view text);

/// Strict decimal parse of the whole string; nullopt if anything is left over.
std::optional<double> try_parse_real(std::string_view s) noexcept;

double parse_real(std::string_view s, std::string_view what);
std::int64_t parse_integer(std::string_view s, std::string_view what);

/// Shortest form with 17 significant digits; round-trips every double.
std::string format_real(double v);

}  // namespace kpcab
