#include "fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>

#include "iwf/io.hpp"
#include "json.hpp"

#ifndef IWF_TEST_DATA_DIR
#error "IWF_TEST_DATA_DIR must be defined"
#endif

namespace iwf::testing {

std::filesystem::path data_dir() { return IWF_TEST_DATA_DIR; }

std::vector<DetectorFixture> load_detector_fixtures() {
  std::vector<DetectorFixture> out;
  std::istringstream in(read_text(data_dir() / "detector_fixtures.jsonl"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto doc = nlohmann::json::parse(line);
    DetectorFixture f;
    const auto c = criterion_from_name(doc.at("criterion").get<std::string>());
    if (!c) throw std::runtime_error("fixture names unknown criterion");
    f.criterion = *c;
    f.expect = doc.at("expect").get<bool>();
    f.note = doc.at("note").get<std::string>();
    auto questions = io::parse_corpus(doc.at("question").dump());
    f.question = std::move(questions.at(0));
    out.push_back(std::move(f));
  }
  return out;
}

Question golden_question() { return io::load_corpus(data_dir() / "golden" / "question.json").at(0); }

TempDir::TempDir(std::string_view tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("iwf-" + std::string(tag) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_text(const std::filesystem::path& p) { return io::read_file(p); }

}  // namespace iwf::testing
