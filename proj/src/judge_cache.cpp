#include <openssl/evp.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "iwf/judge.hpp"

namespace iwf::judge {
namespace {

std::string sanitize(std::string_view model) {
  std::string out;
  for (const char c : model) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

std::atomic<std::uint64_t> g_temp_counter{0};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw InputError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path ResponseCache::path_for(std::string_view prompt, std::string_view model) const {
  return dir_ / (sha256_hex(prompt) + "__" + sanitize(model) + ".json");
}

std::optional<std::string> ResponseCache::get(std::string_view prompt, std::string_view model) const {
  std::ifstream in(path_for(prompt, model), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto doc = nlohmann::json::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
  // Unreadable or mismatched entries count as misses and get overwritten.
  if (!doc.is_object() || !doc.contains("response") || !doc["response"].is_string()) return std::nullopt;
  if (doc.value("prompt", std::string()) != prompt || doc.value("model", std::string()) != model)
    return std::nullopt;
  return doc["response"].get<std::string>();
}

void ResponseCache::put(std::string_view prompt, std::string_view model, std::string_view raw) const {
  nlohmann::ordered_json doc;
  doc["model"] = model;
  doc["prompt_sha256"] = sha256_hex(prompt);
  doc["prompt"] = prompt;
  doc["response"] = raw;

  const auto target = path_for(prompt, model);
  auto temp = target;
  temp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "." +
          std::to_string(g_temp_counter++);
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write cache entry " + temp.string());
    out << doc.dump(2) << '\n';
    if (!out) throw InputError("cannot write cache entry " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw InputError("cannot store cache entry " + target.string());
  }
}

std::size_t ResponseCache::size() const {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_))
    if (entry.is_regular_file() && entry.path().extension() == ".json") ++n;
  return n;
}

}  // namespace iwf::judge
