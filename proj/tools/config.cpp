#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "robin/errors.hpp"

namespace robin::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "h", "h-min", "h-max", "pair", "k", "theta", "theta-samples", "resolution",
      "out", "svg", "tol-root", "seed"};
  return keys;
}

double parse_double(std::string_view s, const std::string& what) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(what + ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s, const std::string& what) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(what + ": not an integer: '" + std::string(s) + "'");
  }
  return v;
}

double parse_theta(std::string_view s) {
  s = trim(s);
  if (s == "pi/4") return 0.25 * kPi;
  if (s == "pi/2") return 0.5 * kPi;
  if (s == "3pi/4") return 0.75 * kPi;
  if (s == "pi") return kPi;
  return parse_double(s, "theta");
}

PairIndex parse_pair(std::string_view s) {
  s = trim(s);
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) {
    throw ConfigError("pair: expected p,q but got '" + std::string(s) + "'");
  }
  const int p = parse_int(s.substr(0, comma), "pair");
  const int q = parse_int(s.substr(comma + 1), "pair");
  if (p < 0 || q < 0) throw ConfigError("pair: indices must be non-negative");
  return PairIndex::canonical(p, q);
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "h") {
    cfg.h = parse_double(value, key);
  } else if (key == "h-min") {
    cfg.h_min = parse_double(value, key);
  } else if (key == "h-max") {
    cfg.h_max = parse_double(value, key);
  } else if (key == "pair") {
    std::string_view rest = value;
    while (true) {
      const auto semi = rest.find(';');
      cfg.pairs.push_back(parse_pair(rest.substr(0, semi)));
      if (semi == std::string_view::npos) break;
      rest = rest.substr(semi + 1);
    }
  } else if (key == "k") {
    cfg.k = parse_int(value, key);
  } else if (key == "theta") {
    cfg.theta = parse_theta(value);
  } else if (key == "theta-samples") {
    cfg.theta_samples = parse_int(value, key);
  } else if (key == "resolution") {
    cfg.resolution = parse_int(value, key);
  } else if (key == "out") {
    cfg.out = std::string(trim(value));
  } else if (key == "svg") {
    cfg.svg = std::string(trim(value));
  } else if (key == "tol-root") {
    cfg.tol_root = parse_double(value, key);
  } else if (key == "seed") {
    const int s = parse_int(value, key);
    if (s < 0) throw ConfigError("seed must be non-negative");
    cfg.seed = static_cast<unsigned>(s);
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  const auto& keys = config_keys();
  while (std::getline(in, line)) {
    ++n;
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(n) + ": expected key = value");
    }
    const std::string key(trim(v.substr(0, eq)));
    const std::string value(trim(v.substr(eq + 1)));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("line " + std::to_string(n) + ": unknown key '" + key + "'");
    }
    if (key == "pair" && out.count(key)) {
      out[key] += ";" + value;
    } else {
      out[key] = value;
    }
  }
  return out;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate(const RunConfig& cfg) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(std::isfinite(cfg.h) && cfg.h < 0.0, "h must be negative");
  need(cfg.h_min < cfg.h_max && cfg.h_max < 0.0, "need h-min < h-max < 0");
  need(cfg.k >= 1, "k must be at least 1");
  need(cfg.theta_samples >= 0, "theta-samples must be positive");
  need(cfg.resolution == 0 || (cfg.resolution >= 256 && power_of_two(cfg.resolution)),
       "resolution must be a power of two >= 256");
  need(!cfg.tol_root || (*cfg.tol_root > 0.0 && std::isfinite(*cfg.tol_root)),
       "tol-root must be positive");
  if (cfg.command == "nodal" || cfg.command == "sweep-theta") {
    need(cfg.pairs.size() == 1, cfg.command + " needs exactly one --pair");
  }
  if (cfg.command == "crossings") need(cfg.pairs.size() >= 2, "crossings needs at least two --pair");
}

}  // namespace robin::cli
