#pragma once

#include "emden_dq/cli/table.hpp"
#include "emden_dq/numerics/precision.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emden_dq::cli {

/// Raised when a file cannot be read or written; maps to exit code 5.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every setting a command reads. Empty optionals mean "catalog default".
struct RunConfig {
  std::optional<std::string> problem;
  std::optional<int> n;
  /// Decimal strings so they can be parsed at the run's precision.
  std::optional<std::string> domain;
  std::optional<std::string> kernel;
  std::optional<std::string> c;
  std::optional<unsigned> digits;
  std::optional<std::string> closure;
  std::optional<std::string> x0;
  std::optional<std::string> format;
  std::optional<std::string> out;
  /// Polytropic indices for `zeros`, comma separated.
  std::optional<std::string> m_list;
  /// Node counts for `converge`, comma separated.
  std::optional<std::string> n_list;

  /// Fields set in `over` replace those here.
  void merge(const RunConfig& over) {
    auto take = [](auto& dst, const auto& src) {
      if (src) dst = src;
    };
    take(problem, over.problem);
    take(n, over.n);
    take(domain, over.domain);
    take(kernel, over.kernel);
    take(c, over.c);
    take(digits, over.digits);
    take(closure, over.closure);
    take(x0, over.x0);
    take(format, over.format);
    take(out, over.out);
    take(m_list, over.m_list);
    take(n_list, over.n_list);
  }

  unsigned effective_digits() const { return digits.value_or(kDefaultDigits); }
  OutputFormat effective_format() const { return parse_format(format.value_or("csv")); }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class Int>
Int parse_int(std::string_view text, std::string_view what) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string(what) + " is not an integer: " + std::string(text));
  }
  return v;
}

inline double parse_double(std::string_view text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: " + std::string(text));
  }
  return v;
}

}  // namespace detail

/// Flat `key = value` lines; '#' starts a comment. Unknown keys are rejected.
inline RunConfig parse_config(std::istream& in, std::string_view origin = "config") {
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(std::string(origin) + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key == "problem") cfg.problem = value;
    else if (key == "n") cfg.n = detail::parse_int<int>(value, "n");
    else if (key == "domain") cfg.domain = value;
    else if (key == "kernel") cfg.kernel = value;
    else if (key == "c") cfg.c = value;
    else if (key == "digits") cfg.digits = detail::parse_int<unsigned>(value, "digits");
    else if (key == "closure") cfg.closure = value;
    else if (key == "x0") cfg.x0 = value;
    else if (key == "format") cfg.format = value;
    else if (key == "out") cfg.out = value;
    else if (key == "m") cfg.m_list = value;
    else if (key == "n_list") cfg.n_list = value;
    else {
      throw std::invalid_argument(std::string(origin) + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return parse_config(in, path);
}

/// Digits from EMDEN_DQ_DIGITS, if set.
inline RunConfig environment_config() {
  RunConfig cfg;
  if (const char* env = std::getenv("EMDEN_DQ_DIGITS"); env != nullptr && *env != '\0') {
    cfg.digits = detail::parse_int<unsigned>(env, "EMDEN_DQ_DIGITS");
  }
  return cfg;
}

/// defaults < environment < config file < flags.
inline RunConfig resolve_config(const RunConfig& flags, const std::optional<std::string>& config_path) {
  RunConfig cfg = environment_config();
  if (config_path) cfg.merge(load_config_file(*config_path));
  cfg.merge(flags);
  return cfg;
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    auto item = detail::trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace emden_dq::cli
