#include "nflab/config.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nflab::cli {

namespace {

std::string join_inputs(const std::vector<std::string>& in) {
  std::string out;
  for (std::size_t i = 0; i < in.size(); ++i) out += (i ? "," : "") + in[i];
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

}  // namespace

KeyMap read_config(std::istream& is) {
  KeyMap out;
  CLI::ConfigINI ini;
  std::vector<CLI::ConfigItem> items;
  try {
    items = ini.from_config(is);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    if (out.count(it.name)) throw ConfigError("config: duplicate key " + it.name);
    out[it.name] = join_inputs(it.inputs);
  }
  return out;
}

KeyMap read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  return read_config(is);
}

Settings::Settings(std::string subcommand, KeyMap values) : sub_(std::move(subcommand)), values_(std::move(values)) {}

std::string Settings::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key " + key);
  return it->second;
}

double Settings::num(const std::string& key) const {
  const std::string v = trim(str(key));
  if (v == "inf" || v == "infinity") return INFINITY;
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not a number: " + v);
  }
}

int Settings::integer(const std::string& key) const {
  const std::string v = trim(str(key));
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not an integer: " + v);
  }
}

long long Settings::count(const std::string& key) const {
  const double x = num(key);
  if (x < 0.0 || x != std::floor(x) || x > 9e15) throw ConfigError("key " + key + ": not a count");
  return static_cast<long long>(x);
}

std::uint64_t Settings::seed(const std::string& key) const {
  const std::string v = trim(str(key));
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not a seed: " + v);
  }
}

bool Settings::flag(const std::string& key) const {
  const std::string v = trim(str(key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key " + key + ": not a boolean: " + v);
}

std::vector<double> Settings::list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(str(key));
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("key " + key + ": bad list entry " + part);
    }
  }
  if (out.empty()) throw ConfigError("key " + key + ": empty list");
  return out;
}

std::string Settings::header() const {
  std::string h = "# nflab " + sub_;
  for (const auto& [k, v] : values_) h += " " + k + "=" + v;
  return h;
}

Settings resolve(const std::string& subcommand, const KeyMap& defaults, const KeyMap& file, const KeyMap& flags) {
  KeyMap v = defaults;
  for (const KeyMap* src : {&file, &flags})
    for (const auto& [k, x] : *src) {
      if (!defaults.count(k)) throw ConfigError("unknown key " + k + " for " + subcommand);
      v[k] = x;
    }
  return Settings(subcommand, std::move(v));
}

}  // namespace nflab::cli
