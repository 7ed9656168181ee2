#include "app.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "nlse/error.hpp"

#ifndef NLSE_VERSION
#define NLSE_VERSION "unknown"
#endif

namespace nlse::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum Exit : int { Ok = 0, Schema = 2, Numerical = 3, UnknownCommand = 4, Io = 5 };

struct Job {
  std::string subcommand;
  fs::path config_path;
  fs::path out_dir;
  std::uint64_t seed = 0;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read config " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void run_job(const Job& job, Command command) {
  const auto start = std::chrono::steady_clock::now();
  const Config config = Config::parse(read_file(job.config_path), job.config_path.string());
  OutputStage stage(job.out_dir);
  RunContext ctx{config, stage, json::object(), nullptr, {}};
  command(ctx);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest{{"subcommand", job.subcommand},
                {"config_file", job.config_path.string()},
                {"config", config.resolved()},
                {"grid", ctx.grid},
                {"version", NLSE_VERSION},
                {"seed", job.seed},
                {"warnings", ctx.warnings},
                {"results", ctx.results},
                {"wall_clock_seconds", wall}};
  stage.commit(std::move(manifest));
}

/// Runs one job and maps its failure to an exit code.
int guarded(const Job& job, Command command, std::mutex& log) {
  auto report = [&](const char* kind, const std::string& what) {
    std::lock_guard<std::mutex> lock(log);
    std::cerr << "nlse-lab: " << job.config_path.string() << ": " << kind << ": " << what << '\n';
  };
  try {
    run_job(job, command);
    return Ok;
  } catch (const SchemaError& e) {
    report("config error", e.what());
    return Schema;
  } catch (const DivergenceError& e) {
    report("diverged", e.what());
    return Numerical;
  } catch (const DomainError& e) {
    report("invalid parameters", e.what());
    return Schema;
  } catch (const IntegrationError& e) {
    report("integration failed", e.what());
    return Numerical;
  } catch (const StitchingError& e) {
    report("stitching failed", e.what());
    return Numerical;
  } catch (const IoError& e) {
    report("i/o error", e.what());
    return Io;
  } catch (const fs::filesystem_error& e) {
    report("i/o error", e.what());
    return Io;
  } catch (const std::exception& e) {
    report("numerical failure", e.what());
    return Numerical;
  }
}

}  // namespace

int run_app(int argc, char** argv) {
  CLI::App app{"Traveling-wave, stitching and lattice experiments for the NLSE"};
  std::string subcommand;
  std::vector<std::string> configs;
  std::string out = "out";
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::string names;
  for (const auto& n : command_names()) {
    names += (names.empty() ? "" : ", ") + n;
  }
  app.add_option("subcommand", subcommand, "One of: " + names)->required();
  app.add_option("--config", configs, "JSON config file (repeatable)")->required();
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--jobs", jobs, "Configs processed concurrently")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Recorded in the manifest; all pipelines are deterministic");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : Schema;
  }

  const Command command = find_command(subcommand);
  if (!command) {
    std::cerr << "nlse-lab: unknown subcommand '" << subcommand << "' (expected one of: " << names
              << ")\n";
    return UnknownCommand;
  }

  std::vector<Job> queue;
  for (const auto& c : configs) {
    fs::path dir = out;
    if (configs.size() > 1) {
      dir /= fs::path(c).stem();
    }
    queue.push_back(Job{subcommand, c, dir, seed});
  }
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (queue[i].out_dir == queue[j].out_dir) {
        std::cerr << "nlse-lab: configs " << queue[j].config_path << " and " << queue[i].config_path
                  << " share the output directory " << queue[i].out_dir << '\n';
        return Schema;
      }
    }
  }

  std::vector<int> codes(queue.size(), Ok);
  std::mutex log;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < queue.size(); i = next++) {
      codes[i] = guarded(queue[i], command, log);
    }
  };
  const unsigned threads = std::min<std::size_t>(jobs, queue.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }
  for (int code : codes) {
    if (code != Ok) {
      return code;
    }
  }
  return Ok;
}

}  // namespace nlse::cli
