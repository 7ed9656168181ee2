#include "config.hpp"

#include <cmath>
#include <sstream>

namespace nlse::cli {

using nlohmann::json;

Config::Config(std::shared_ptr<State> state, std::string path)
    : state_(std::move(state)), path_(std::move(path)) {}

Config Config::parse(const std::string& text, const std::string& source) {
  auto state = std::make_shared<State>();
  state->source = source;
  try {
    state->root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(source + ": not valid JSON: " + e.what());
  }
  if (!state->root.is_object()) {
    throw SchemaError(source + ": top level must be a JSON object");
  }
  return Config(std::move(state), "");
}

const json& Config::node() const {
  return path_.empty() ? state_->root : state_->root.at(json::json_pointer(path_));
}

const json* Config::find(const std::string& key) const {
  const json& n = node();
  const auto it = n.find(key);
  return it == n.end() ? nullptr : &*it;
}

void Config::fail(const std::string& key, const std::string& what) const {
  throw SchemaError(state_->source + ": " + child(key) + ": " + what);
}

void Config::record(const std::string& key, const json& value) const {
  state_->consumed.insert(child(key));
  state_->resolved[json::json_pointer(child(key))] = value;
}

bool Config::has(const std::string& key) const { return find(key) != nullptr; }

double Config::number(const std::string& key) const {
  const json* v = find(key);
  if (!v) {
    fail(key, "required number is missing");
  }
  if (!v->is_number()) {
    fail(key, "expected a number");
  }
  const double d = v->get<double>();
  if (!std::isfinite(d)) {
    fail(key, "number must be finite");
  }
  record(key, d);
  return d;
}

double Config::number(const std::string& key, double fallback) const {
  if (!has(key)) {
    record(key, fallback);
    return fallback;
  }
  return number(key);
}

std::optional<double> Config::optional_number(const std::string& key) const {
  const json* v = find(key);
  if (!v || v->is_null()) {
    state_->consumed.insert(child(key));
    return std::nullopt;
  }
  return number(key);
}

std::size_t Config::count(const std::string& key) const {
  const json* v = find(key);
  if (!v) {
    fail(key, "required integer is missing");
  }
  if (!v->is_number_integer() || v->get<long long>() < 0) {
    fail(key, "expected a non-negative integer");
  }
  const auto n = v->get<std::size_t>();
  record(key, n);
  return n;
}

std::size_t Config::count(const std::string& key, std::size_t fallback) const {
  if (!has(key)) {
    record(key, fallback);
    return fallback;
  }
  return count(key);
}

std::string Config::text(const std::string& key, const std::string& fallback,
                         const std::vector<std::string>& allowed) const {
  std::string value = fallback;
  if (const json* v = find(key)) {
    if (!v->is_string()) {
      fail(key, "expected a string");
    }
    value = v->get<std::string>();
  }
  bool ok = allowed.empty();
  for (const auto& a : allowed) {
    ok = ok || a == value;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "unsupported value '" << value << "' (allowed:";
    for (const auto& a : allowed) {
      msg << ' ' << a;
    }
    msg << ')';
    fail(key, msg.str());
  }
  record(key, value);
  return value;
}

std::vector<double> Config::numbers(const std::string& key) const {
  const json* v = find(key);
  if (!v) {
    fail(key, "required array is missing");
  }
  if (!v->is_array()) {
    fail(key, "expected an array of numbers");
  }
  std::vector<double> out;
  for (const auto& e : *v) {
    if (!e.is_number() || !std::isfinite(e.get<double>())) {
      fail(key, "expected an array of finite numbers");
    }
    out.push_back(e.get<double>());
  }
  record(key, out);
  return out;
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) {
    record(key, fallback);
    return fallback;
  }
  return numbers(key);
}

Config Config::object(const std::string& key) const {
  const json* v = find(key);
  if (!v) {
    fail(key, "required object is missing");
  }
  if (!v->is_object()) {
    fail(key, "expected an object");
  }
  state_->consumed.insert(child(key));
  return Config(state_, child(key));
}

std::vector<Config> Config::objects(const std::string& key) const {
  const json* v = find(key);
  if (!v) {
    fail(key, "required array of objects is missing");
  }
  if (!v->is_array()) {
    fail(key, "expected an array of objects");
  }
  state_->consumed.insert(child(key));
  std::vector<Config> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_object()) {
      fail(key, "element " + std::to_string(i) + " is not an object");
    }
    const std::string p = child(key) + "/" + std::to_string(i);
    state_->consumed.insert(p);
    out.push_back(Config(state_, p));
  }
  return out;
}

void Config::walk_unknown(const json& j, const std::string& path,
                          std::vector<std::string>& unknown) const {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string p = path + "/" + it.key();
      if (!state_->consumed.count(p)) {
        unknown.push_back(p);
        continue;
      }
      walk_unknown(it.value(), p, unknown);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = path + "/" + std::to_string(i);
      if (state_->consumed.count(p)) {
        walk_unknown(j[i], p, unknown);
      }
    }
  }
}

void Config::check_unknown() const {
  std::vector<std::string> unknown;
  walk_unknown(node(), path_, unknown);
  if (!unknown.empty()) {
    std::string msg = state_->source + ": unknown keys:";
    for (const auto& u : unknown) {
      msg += " " + u;
    }
    throw SchemaError(msg);
  }
}

}  // namespace nlse::cli
