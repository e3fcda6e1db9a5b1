#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace iwf::resources {

struct Resource {
  std::string_view name;
  std::string_view content;
};

/// Resource files compiled into the library, sorted by name.
std::span<const Resource> embedded();

/// Directory named by IWF_LEXICON_DIR, when set and non-empty.
std::optional<std::filesystem::path> override_dir();

/// Contents of the named resource. A file of the same name under
/// `override` replaces the embedded copy. Throws InputError if neither
/// exists or the override file cannot be read.
std::string load(std::string_view name,
                 const std::optional<std::filesystem::path>& override = override_dir());

}  // namespace iwf::resources
