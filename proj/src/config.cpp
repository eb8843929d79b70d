#include "tvnewton/config.hpp"

#include <boost/property_tree/ini_parser.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace tvn {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (!trim(text.substr(used)).empty()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError(key + ": expected a number, got '" + text + "'");
  }
}

long to_long(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (!trim(text.substr(used)).empty()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError(key + ": expected an integer, got '" + text + "'");
  }
}

void check_key(const std::string& key) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() || key.find('.', dot + 1) != std::string::npos)
    throw ConfigurationError("config key '" + key + "' must have the form section.key");
}

}  // namespace

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(path + ": " + e.what());
  }
}

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  try {
    pt::read_ini(in, c.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigurationError(std::string("config parse error: ") + e.message() + " at line " +
                             std::to_string(e.line()));
  }
  return c;
}

void Config::set_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigurationError("override '" + assignment + "' must look like section.key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
  check_key(key);
  tree_.put(key, value);
}

bool Config::has(const std::string& key) const { return tree_.get_optional<std::string>(key).has_value(); }

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  if (auto v = tree_.get_optional<std::string>(key)) return trim(*v);
  set(key, fallback);
  return fallback;
}

std::string Config::require_string(const std::string& key) const {
  auto v = tree_.get_optional<std::string>(key);
  if (!v || trim(*v).empty()) throw ConfigurationError(key + ": required key is missing");
  return trim(*v);
}

double Config::get_double(const std::string& key, double fallback) {
  if (auto v = tree_.get_optional<std::string>(key)) return to_double(key, trim(*v));
  set(key, format_double(fallback));
  return fallback;
}

double Config::require_double(const std::string& key) const { return to_double(key, require_string(key)); }

long Config::get_long(const std::string& key, long fallback) {
  if (auto v = tree_.get_optional<std::string>(key)) return to_long(key, trim(*v));
  set(key, std::to_string(fallback));
  return fallback;
}

std::optional<double> Config::get_optional_double(const std::string& key) const {
  if (auto v = tree_.get_optional<std::string>(key)) return to_double(key, trim(*v));
  return std::nullopt;
}

std::string Config::to_string() const {
  std::ostringstream os;
  pt::write_ini(os, tree_);
  return os.str();
}

void Config::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot open '" + path + "' for writing");
  out << to_string();
}

}  // namespace tvn
