#ifndef D2D_CONFIG_HPP
#define D2D_CONFIG_HPP

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "d2d/scenario.hpp"

namespace d2d {

/// Malformed configuration text. `line()` is 1-based; 0 when the file itself is unreadable.
class ConfigParseError : public std::runtime_error {
public:
  ConfigParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    const auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_real(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw std::invalid_argument("expected a number, got '" + text + "'");
  return v;
}

inline std::uint64_t parse_count(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("expected a nonnegative integer, got '" + text + "'");
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
  if (errno == ERANGE) throw std::invalid_argument("integer out of range: '" + text + "'");
  return v;
}

inline bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + text + "'");
}

inline std::vector<Scheme> parse_schemes(std::string_view text) {
  std::vector<Scheme> out;
  for (const auto& item : split_list(text)) {
    Scheme s;
    if (item == "underlay") s = Scheme::underlay;
    else if (item == "orthogonal") s = Scheme::orthogonal;
    else throw std::invalid_argument("unknown scheme '" + item + "'");
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Topology parse_topology(const std::string& text) {
  if (text == "single_monitor") return Topology::single_monitor;
  if (text == "multi_monitor") return Topology::multi_monitor;
  if (text == "multi_channel") return Topology::multi_channel;
  throw std::invalid_argument("unknown topology '" + text + "'");
}

}  // namespace detail

/// Parses flat `key = value` text; '#' starts a comment. Keys absent from
/// the text keep their defaults. Unknown or repeated keys are errors.
inline ScenarioConfig parse_config(std::string_view text) {
  using Setter = std::function<void(ScenarioConfig&, const std::string&)>;
  const auto real = [](double ScenarioConfig::*field) {
    return Setter([field](ScenarioConfig& c, const std::string& v) { c.*field = detail::parse_real(v); });
  };
  const std::map<std::string, Setter, std::less<>> setters = {
      {"bandwidth_hz", real(&ScenarioConfig::bandwidth_hz)},
      {"announce_duration_s", real(&ScenarioConfig::announce_duration_s)},
      {"base_distance_m", real(&ScenarioConfig::base_distance_m)},
      {"announcer_distance_m", real(&ScenarioConfig::announcer_distance_m)},
      {"announcer_power_dbm", real(&ScenarioConfig::announcer_power_dbm)},
      {"noise_dbm", real(&ScenarioConfig::noise_dbm)},
      {"path_loss_exponent", real(&ScenarioConfig::path_loss_exponent)},
      {"mean_gain", real(&ScenarioConfig::mean_gain)},
      {"downlink_rate_bps_per_hz", real(&ScenarioConfig::downlink_rate_bps_per_hz)},
      {"downlink_success_target", real(&ScenarioConfig::downlink_success_target)},
      {"announcer_decode_prob", real(&ScenarioConfig::announcer_decode_prob)},
      {"monitors",
       [](ScenarioConfig& c, const std::string& v) {
         const auto n = detail::parse_count(v);
         if (n > 100000) throw std::invalid_argument("monitor count too large");
         c.monitors = static_cast<int>(n);
       }},
      {"topology", [](ScenarioConfig& c, const std::string& v) { c.topology = detail::parse_topology(v); }},
      {"announcer_decode_mode",
       [](ScenarioConfig& c, const std::string& v) {
         if (v == "fixed") c.announcer_decode_mode = DecodeMode::fixed;
         else if (v == "computed") c.announcer_decode_mode = DecodeMode::computed;
         else throw std::invalid_argument("expected fixed or computed, got '" + v + "'");
       }},
      {"payload_bytes",
       [](ScenarioConfig& c, const std::string& v) {
         c.payload_bytes.clear();
         for (const auto& item : detail::split_list(v)) c.payload_bytes.push_back(detail::parse_real(item));
       }},
      {"seed", [](ScenarioConfig& c, const std::string& v) { c.seed = detail::parse_count(v); }},
      {"trials", [](ScenarioConfig& c, const std::string& v) { c.trials = detail::parse_count(v); }},
      {"schemes", [](ScenarioConfig& c, const std::string& v) { c.schemes = detail::parse_schemes(v); }},
      {"analytic", [](ScenarioConfig& c, const std::string& v) { c.analytic = detail::parse_bool(v); }},
      {"monte_carlo", [](ScenarioConfig& c, const std::string& v) { c.monte_carlo = detail::parse_bool(v); }},
  };

  ScenarioConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigParseError(line_no, "expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const std::string value(detail::trim(line.substr(eq + 1)));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigParseError(line_no, "unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second)
      throw ConfigParseError(line_no, "duplicate key '" + std::string(key) + "'");
    try {
      it->second(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigParseError(line_no, std::string(key) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigParseError(0, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace d2d

#endif  // D2D_CONFIG_HPP
