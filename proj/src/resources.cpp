#include "iwf/resources.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "iwf/core.hpp"

namespace iwf::resources {

std::optional<std::filesystem::path> override_dir() {
  const char* dir = std::getenv("IWF_LEXICON_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

std::string load(std::string_view name, const std::optional<std::filesystem::path>& override) {
  if (override) {
    const auto path = *override / std::string(name);
    if (std::filesystem::exists(path)) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw InputError("cannot read " + path.string());
      std::ostringstream buf;
      buf << in.rdbuf();
      return buf.str();
    }
  }
  for (const auto& r : embedded())
    if (r.name == name) return std::string(r.content);
  throw InputError("no resource named " + std::string(name));
}

}  // namespace iwf::resources
