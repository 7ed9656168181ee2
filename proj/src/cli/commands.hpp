#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "output.hpp"

namespace nlse::cli {

struct RunContext {
  const Config& config;
  OutputStage& out;
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json grid = nullptr;
  std::vector<std::string> warnings;
};

using Command = void (*)(RunContext&);

/// Pipeline for a subcommand name, or nullptr when unknown.
Command find_command(const std::string& name);
std::vector<std::string> command_names();

}  // namespace nlse::cli
