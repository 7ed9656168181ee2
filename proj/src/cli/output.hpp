#pragma once

#include <cstdio>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace nlse::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// RFC 4180 style CSV with '.' decimals and 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);
  void close();

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
  std::size_t columns_;
};

/**
 * Collects a run's files in a hidden staging directory and moves them into
 * the output directory only on commit(), so failed runs leave nothing behind.
 */
class OutputStage {
 public:
  explicit OutputStage(std::filesystem::path out_dir);
  ~OutputStage();
  OutputStage(const OutputStage&) = delete;
  OutputStage& operator=(const OutputStage&) = delete;

  /// Reserves a file name and returns its staging path.
  std::filesystem::path file(const std::string& name);
  void write_json(const std::string& name, const nlohmann::json& doc);
  const std::vector<std::string>& files() const noexcept { return files_; }
  /// Writes manifest.json (listing every file, itself included) and publishes.
  void commit(nlohmann::json manifest);

 private:
  std::filesystem::path out_dir_;
  std::filesystem::path staging_;
  std::vector<std::string> files_;
  bool committed_ = false;
};

}  // namespace nlse::cli
