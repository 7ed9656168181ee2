#include "output.hpp"

#include <fstream>
#include <system_error>

namespace nlse::cli {

namespace fs = std::filesystem;

CsvWriter::CsvWriter(const fs::path& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::fprintf(file_, i ? ",%s" : "%s", header[i].c_str());
  }
  std::fputs("\r\n", file_);
}

CsvWriter::~CsvWriter() {
  if (file_) {
    std::fclose(file_);
  }
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) {
    throw std::logic_error("CSV row width does not match the header");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::fprintf(file_, i ? ",%.17g" : "%.17g", values[i]);
  }
  if (std::fputs("\r\n", file_) < 0) {
    throw IoError("write failed for " + path_.string());
  }
}

void CsvWriter::close() {
  if (file_) {
    const bool bad = std::ferror(file_) != 0;
    const bool closed = std::fclose(file_) == 0;
    file_ = nullptr;
    if (bad || !closed) {
      throw IoError("write failed for " + path_.string());
    }
  }
}

OutputStage::OutputStage(fs::path out_dir) : out_dir_(std::move(out_dir)) {
  std::error_code ec;
  const fs::path parent = out_dir_.has_parent_path() ? out_dir_.parent_path() : fs::path(".");
  fs::create_directories(parent, ec);
  staging_ = parent / ("." + out_dir_.filename().string() + ".staging");
  fs::remove_all(staging_, ec);
  if (!fs::create_directories(staging_, ec) || ec) {
    throw IoError("cannot create staging directory " + staging_.string());
  }
}

OutputStage::~OutputStage() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

fs::path OutputStage::file(const std::string& name) {
  files_.push_back(name);
  return staging_ / name;
}

void OutputStage::write_json(const std::string& name, const nlohmann::json& doc) {
  std::ofstream out(file(name), std::ios::binary);
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("write failed for " + name);
  }
}

void OutputStage::commit(nlohmann::json manifest) {
  std::vector<std::string> listed = files_;
  listed.push_back("manifest.json");
  manifest["outputs"] = listed;
  write_json("manifest.json", manifest);

  std::error_code ec;
  fs::create_directories(out_dir_, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir_.string());
  }
  // Clear files of a previous run recorded in its manifest; refuse to mix
  // with anything else.
  const fs::path old_manifest = out_dir_ / "manifest.json";
  if (fs::exists(old_manifest)) {
    try {
      std::ifstream in(old_manifest);
      const auto old = nlohmann::json::parse(in);
      for (const auto& name : old.at("outputs")) {
        fs::remove(out_dir_ / name.get<std::string>(), ec);
      }
    } catch (const std::exception&) {
      throw IoError("output directory holds an unreadable manifest.json");
    }
  }
  for (const auto& entry : fs::directory_iterator(out_dir_)) {
    if (!entry.is_directory()) {
      throw IoError("output directory " + out_dir_.string() +
                    " contains files from elsewhere: " + entry.path().filename().string());
    }
  }
  for (const auto& name : files_) {
    fs::rename(staging_ / name, out_dir_ / name, ec);
    if (ec) {
      throw IoError("cannot move " + name + " into " + out_dir_.string());
    }
  }
  committed_ = true;
  fs::remove_all(staging_, ec);
}

}  // namespace nlse::cli
