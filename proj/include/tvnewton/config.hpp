#pragma once

#include "tvnewton/common.hpp"

#include <boost/property_tree/ptree.hpp>

#include <optional>
#include <string>

namespace tvn {

/// Flat INI-style configuration: [section] headers and key = value lines,
/// addressed as "section.key".
///
/// Every lookup with a default writes the default back, so after a run the
/// tree holds each value that was actually used and can be saved as the
/// resolved configuration.
class Config {
public:
  Config() = default;
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  /// Applies "section.key=value"; later calls win.
  void set_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback);
  double require_double(const std::string& key) const;
  long get_long(const std::string& key, long fallback);
  std::optional<double> get_optional_double(const std::string& key) const;

  std::string to_string() const;
  void save(const std::string& path) const;

private:
  boost::property_tree::ptree tree_;
};

std::string format_double(double v);

}  // namespace tvn
