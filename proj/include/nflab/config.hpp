#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nflab::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyMap = std::map<std::string, std::string>;

// Flat `key = value` lines, optionally grouped under [section] headers.
// Sections only group; the key is the bare name. Lists are comma separated.
KeyMap read_config_file(const std::string& path);
KeyMap read_config(std::istream& is);

// Resolved settings of one subcommand.
class Settings {
 public:
  Settings(std::string subcommand, KeyMap values);

  const std::string& subcommand() const { return sub_; }
  const KeyMap& values() const { return values_; }

  std::string str(const std::string& key) const;
  double num(const std::string& key) const;  // accepts inf
  int integer(const std::string& key) const;
  long long count(const std::string& key) const;  // accepts 1e6
  std::uint64_t seed(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;

  // "# nflab <subcommand> k=v k=v ..." in key order.
  std::string header() const;

 private:
  std::string sub_;
  KeyMap values_;
};

// Defaults, then file values, then flag values; any key outside the
// defaults is rejected.
Settings resolve(const std::string& subcommand, const KeyMap& defaults, const KeyMap& file, const KeyMap& flags);

}  // namespace nflab::cli
