#include "navmem/eqa.hpp"

#include <httplib.h>
#include <json.hpp>

namespace navmem {

HttpClient::HttpClient(std::string url, std::chrono::seconds timeout) : timeout_(timeout) {
  constexpr std::string_view kScheme = "http://";
  if (!std::string_view(url).starts_with(kScheme)) {
    throw Error("EQA endpoint must be an http:// URL: " + url);
  }
  const auto slash = url.find('/', kScheme.size());
  host_port_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
  if (host_port_.size() == kScheme.size()) {
    throw Error("EQA endpoint has no host: " + url);
  }
}

std::string HttpClient::send(const std::string& request_json) {
  httplib::Client client(host_port_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);

  auto res = client.Post(path_, request_json, "application/json");
  if (!res) {
    throw TransientError("POST " + host_port_ + path_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status >= 500 || res->status == 429) {
    throw TransientError("POST " + host_port_ + path_ + ": HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw TransportError("POST " + host_port_ + path_ + ": HTTP " + std::to_string(res->status));
  }
  try {
    return nlohmann::json::parse(res->body).at("text").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw ResponseParseError("response body is not {\"text\": string}");
  }
}

}  // namespace navmem
