#include "httplib.h"

#include "json.hpp"

#include "iwf/judge.hpp"

namespace iwf::judge {

HttpBackend::HttpBackend(BackendConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
  config_.validate();
  const auto& url = config_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InputError("endpoint must start with http:// or https://");
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw InputError("unsupported endpoint scheme \"" + scheme + "\"");
  const auto path_start = url.find('/', scheme_end + 3);
  base_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (base_.size() == scheme_end + 3) throw InputError("endpoint has no host");
}

std::string HttpBackend::request_body(std::string_view model, std::string_view prompt) {
  nlohmann::ordered_json body;
  body["model"] = model;
  body["messages"] = nlohmann::ordered_json::array({{{"role", "user"}, {"content", prompt}}});
  return body.dump();
}

std::string HttpBackend::extract_content(std::string_view response_body) {
  const auto doc = nlohmann::json::parse(response_body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw TransportError("response is not JSON");
  const auto ptr = nlohmann::json::json_pointer("/choices/0/message/content");
  if (!doc.contains(ptr) || !doc[ptr].is_string()) throw TransportError("response has no choices[0].message.content");
  return doc[ptr].get<std::string>();
}

std::string HttpBackend::complete(const std::string& prompt) {
  // One client per request: httplib clients are not safe to share across threads.
  httplib::Client client(base_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  const auto res = client.Post(path_, headers, request_body(config_.model, prompt), "application/json");
  if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw TransportError("HTTP status " + std::to_string(res->status));
  return extract_content(res->body);
}

}  // namespace iwf::judge
