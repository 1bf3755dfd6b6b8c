#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "speclab/io.hpp"
#include "speclab/types.hpp"

namespace speclab::cli {

using io::Json;

[[nodiscard]] inline Json parse_config_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

// Typed accessor over one config object.  Every lookup failure names the
// offending key; unknown keys are rejected up front.
class ConfigView {
 public:
  ConfigView(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": config must be a JSON object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& item : j_.items()) {
      bool known = false;
      for (const char* k : keys)
        if (item.key() == k) {
          known = true;
          break;
        }
      if (!known) throw ConfigError(where_ + ": unknown config key '" + item.key() + "'");
    }
  }

  [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }

  [[nodiscard]] std::int64_t integer(const char* key,
                                     std::optional<std::int64_t> def = {}) const {
    if (!j_.contains(key)) return required(key, def);
    const Json& v = j_.at(key);
    if (!v.is_number_integer())
      throw ConfigError(where_ + ": key '" + std::string(key) + "' must be an integer");
    return v.get<std::int64_t>();
  }

  [[nodiscard]] std::uint64_t u64(const char* key,
                                  std::optional<std::uint64_t> def = {}) const {
    if (!j_.contains(key)) return required(key, def);
    const Json& v = j_.at(key);
    if (!v.is_number_integer() ||
        (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      throw ConfigError(where_ + ": key '" + std::string(key) +
                        "' must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  [[nodiscard]] double number(const char* key, std::optional<double> def = {}) const {
    if (!j_.contains(key)) return required(key, def);
    const Json& v = j_.at(key);
    if (!v.is_number())
      throw ConfigError(where_ + ": key '" + std::string(key) + "' must be a number");
    return v.get<double>();
  }

  [[nodiscard]] bool flag(const char* key, bool def) const {
    if (!j_.contains(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_boolean())
      throw ConfigError(where_ + ": key '" + std::string(key) + "' must be a boolean");
    return v.get<bool>();
  }

  [[nodiscard]] std::string text(const char* key,
                                 std::optional<std::string> def = {}) const {
    if (!j_.contains(key)) return required(key, def);
    const Json& v = j_.at(key);
    if (!v.is_string())
      throw ConfigError(where_ + ": key '" + std::string(key) + "' must be a string");
    return v.get<std::string>();
  }

  [[nodiscard]] std::vector<double> number_list(const char* key,
                                                std::vector<double> def) const {
    if (!j_.contains(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_array())
      throw ConfigError(where_ + ": key '" + std::string(key) + "' must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const Json& item : v) {
      if (!item.is_number())
        throw ConfigError(where_ + ": key '" + std::string(key) +
                          "' must contain only numbers");
      out.push_back(item.get<double>());
    }
    return out;
  }

  [[nodiscard]] std::vector<std::int64_t> integer_list(const char* key,
                                                       std::vector<std::int64_t> def) const {
    if (!j_.contains(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_array())
      throw ConfigError(where_ + ": key '" + std::string(key) + "' must be an array");
    std::vector<std::int64_t> out;
    out.reserve(v.size());
    for (const Json& item : v) {
      if (!item.is_number_integer())
        throw ConfigError(where_ + ": key '" + std::string(key) +
                          "' must contain only integers");
      out.push_back(item.get<std::int64_t>());
    }
    return out;
  }

  [[nodiscard]] const Json* object(const char* key) const {
    if (!j_.contains(key)) return nullptr;
    const Json& v = j_.at(key);
    if (!v.is_object())
      throw ConfigError(where_ + ": key '" + std::string(key) + "' must be an object");
    return &v;
  }

  [[nodiscard]] const Json& raw() const { return j_; }
  [[nodiscard]] const std::string& where() const { return where_; }

 private:
  template <class T>
  [[nodiscard]] T required(const char* key, const std::optional<T>& def) const {
    if (def) return *def;
    throw ConfigError(where_ + ": missing required config key '" + std::string(key) + "'");
  }

  const Json& j_;
  std::string where_;
};

}  // namespace speclab::cli
