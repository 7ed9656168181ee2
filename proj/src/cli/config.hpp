#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace nlse::cli {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Typed, path-tracking view of a JSON config object. Every accessor records
 * the key as consumed and echoes the effective value (defaults included)
 * into the resolved document; check_unknown() rejects anything untouched.
 */
class Config {
 public:
  static Config parse(const std::string& text, const std::string& source);

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::optional<double> optional_number(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::size_t count(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback,
                   const std::vector<std::string>& allowed) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  bool has(const std::string& key) const;
  Config object(const std::string& key) const;
  std::vector<Config> objects(const std::string& key) const;

  const std::string& path() const noexcept { return path_; }
  /// Throws SchemaError naming every key that no accessor consumed.
  void check_unknown() const;
  const nlohmann::json& resolved() const { return state_->resolved; }

 private:
  struct State {
    nlohmann::json root;
    nlohmann::json resolved = nlohmann::json::object();
    std::set<std::string> consumed;
    std::string source;
  };

  Config(std::shared_ptr<State> state, std::string path);
  const nlohmann::json& node() const;
  const nlohmann::json* find(const std::string& key) const;
  std::string child(const std::string& key) const { return path_ + "/" + key; }
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
  void record(const std::string& key, const nlohmann::json& value) const;
  void walk_unknown(const nlohmann::json& j, const std::string& path,
                    std::vector<std::string>& unknown) const;

  std::shared_ptr<State> state_;
  std::string path_;
};

}  // namespace nlse::cli
