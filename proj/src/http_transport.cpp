#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <regex>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mmvrp/error.hpp"
#include "mmvrp/hash.hpp"
#include "mmvrp/llm.hpp"

namespace mmvrp {

using nlohmann::json;

std::string chat_completion_body(const SessionConfig& config,
                                 std::span<const ChatMessage> messages) {
  json msgs = json::array();
  for (const auto& m : messages) {
    json content = json::array();
    for (const auto& part : m.parts) {
      if (const auto* t = std::get_if<TextPart>(&part)) {
        content.push_back({{"type", "text"}, {"text", t->text}});
      } else {
        const auto& img = std::get<ImagePart>(part).image;
        const std::string url = "data:" + img.media_type + ";base64," + base64_encode(img.bytes);
        content.push_back({{"type", "image_url"}, {"image_url", {{"url", url}}}});
      }
    }
    // Assistant turns go back as plain strings; some endpoints reject arrays there.
    if (m.role == Role::kAssistant) {
      msgs.push_back({{"role", "assistant"}, {"content", m.text()}});
    } else {
      msgs.push_back({{"role", to_string(m.role)}, {"content", std::move(content)}});
    }
  }
  const json body = {{"model", config.model},
                     {"temperature", config.temperature},
                     {"max_tokens", config.max_output_tokens},
                     {"messages", std::move(msgs)}};
  return body.dump();
}

HttpEndpoint endpoint_from_env() {
  HttpEndpoint ep;
  const char* key = std::getenv("MMVRP_API_KEY");
  if (!key || !*key) key = std::getenv("OPENAI_API_KEY");
  if (!key || !*key) {
    throw Error("no API key: set MMVRP_API_KEY (or OPENAI_API_KEY) in the environment");
  }
  ep.api_key = key;
  if (const char* url = std::getenv("MMVRP_API_URL"); url && *url) ep.url = url;
  return ep;
}

HttpTransport::HttpTransport(HttpEndpoint endpoint, RateLimiter* limiter)
    : endpoint_(std::move(endpoint)), limiter_(limiter) {}

ChatReply HttpTransport::complete(const ChatRequest& request) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint_.url, m, url_re)) {
    throw Error("malformed endpoint url: " + endpoint_.url);
  }
  const std::string origin = m[1];
  const std::string path = m[2].matched ? std::string(m[2]) : "/";

  if (limiter_) limiter_->acquire();

  httplib::Client client(origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.config.request_timeout);
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(
      request.config.request_timeout - secs);
  client.set_connection_timeout(secs.count(), usec.count());
  client.set_read_timeout(secs.count(), usec.count());
  client.set_write_timeout(secs.count(), usec.count());
  client.enable_server_certificate_verification(true);

  const httplib::Headers headers = {{"Authorization", "Bearer " + endpoint_.api_key}};
  ChatReply reply;
  reply.sent_at = utc_timestamp();
  auto res = client.Post(path, headers, chat_completion_body(request.config, request.messages),
                         "application/json");
  reply.received_at = utc_timestamp();
  if (!res) {
    throw TransportError("request failed: " + httplib::to_string(res.error()));
  }
  if (res->status == 429) {
    double after = 0;
    if (res->has_header("Retry-After")) after = std::atof(res->get_header_value("Retry-After").c_str());
    throw RateLimited("rate limited (HTTP 429)", after);
  }
  if (res->status >= 500) throw TransportError(fmt::format("server error HTTP {}", res->status));
  if (res->status != 200) {
    // 4xx will not improve on retry.
    throw Error(fmt::format("HTTP {}: {}", res->status, res->body.substr(0, 500)));
  }

  try {
    const json j = json::parse(res->body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    reply.text = content.is_string() ? content.get<std::string>() : content.dump();
    if (j.contains("usage")) {
      reply.usage.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
      reply.usage.completion_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
    }
  } catch (const json::exception& e) {
    throw TransportError(std::string("unexpected response body: ") + e.what());
  }
  return reply;
}

}  // namespace mmvrp
