#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "iwf/core.hpp"

namespace iwf::testing {

/// Source-tree test data directory.
std::filesystem::path data_dir();

/// One handcrafted detector case: `question` should (expect = true) or
/// should not trip `criterion`.
struct DetectorFixture {
  CriterionId criterion{};
  bool expect = false;
  std::string note;
  Question question;
};

std::vector<DetectorFixture> load_detector_fixtures();

/// The question used for the stored prompt files.
Question golden_question();

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& p, std::string_view content);
std::string read_text(const std::filesystem::path& p);

}  // namespace iwf::testing
