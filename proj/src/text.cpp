#include "text.hpp"

#include <charconv>
#include <cstdio>

#include "error.hpp"

namespace kpcab {

std::string_view trim(std::string_view s) noexcept {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::pair<std::string, ParamList> split_family(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  std::string name(trim(text.substr(0, colon)));
  if (name.empty()) throw ParseError("missing family name in '" + std::string(text) + "'");
  ParamList params;
  if (colon == std::string_view::npos) return {name, params};
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected key=value, got '" + std::string(item) + "'");
    params.emplace_back(std::string(trim(item.substr(0, eq))), std::string(trim(item.substr(eq + 1))));
  }
  return {name, params};
}

std::optional<double> try_parse_real(std::string_view s) noexcept {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

double parse_real(std::string_view s, std::string_view what) {
  const auto v = try_parse_real(s);
  if (!v) throw ParseError("invalid number for " + std::string(what) + ": '" + std::string(s) + "'");
  return *v;
}

std::int64_t parse_integer(std::string_view s, std::string_view what) {
  s = trim(s);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("invalid integer for " + std::string(what) + ": '" + std::string(s) + "'");
  return value;
}

std::string format_real(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace kpcab
