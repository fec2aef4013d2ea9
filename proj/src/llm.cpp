#include "mmvrp/llm.hpp"

#include <cstdlib>
#include <ctime>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mmvrp/error.hpp"
#include "mmvrp/hash.hpp"

namespace mmvrp {

using nlohmann::json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

std::optional<Role> parse_role(std::string_view text) {
  if (text == "system") return Role::kSystem;
  if (text == "user") return Role::kUser;
  if (text == "assistant") return Role::kAssistant;
  return std::nullopt;
}

std::string_view to_string(TransportMode mode) {
  switch (mode) {
    case TransportMode::kLive: return "live";
    case TransportMode::kRecord: return "record";
    case TransportMode::kReplay: return "replay";
  }
  return "replay";
}

std::optional<TransportMode> parse_transport_mode(std::string_view text) {
  if (text == "live") return TransportMode::kLive;
  if (text == "record") return TransportMode::kRecord;
  if (text == "replay") return TransportMode::kReplay;
  return std::nullopt;
}

ChatMessage ChatMessage::user(std::string text) {
  return {Role::kUser, {TextPart{std::move(text)}}};
}

ChatMessage ChatMessage::assistant(std::string text) {
  return {Role::kAssistant, {TextPart{std::move(text)}}};
}

std::string ChatMessage::text() const {
  std::string out;
  for (const auto& p : parts) {
    if (const auto* t = std::get_if<TextPart>(&p)) out += t->text;
  }
  return out;
}

std::size_t ChatMessage::image_count() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += std::holds_alternative<ImagePart>(p) ? 1 : 0;
  return n;
}

std::size_t Transcript::image_count() const {
  std::size_t n = 0;
  for (const auto& r : records) {
    for (const auto& m : r.request) n += m.image_count();
  }
  return n;
}

void check_session_config(const SessionConfig& config) {
  if (config.temperature < 0) throw Error("temperature must be >= 0");
  if (config.max_retries < 0) throw Error("max retries must be >= 0");
  if (config.max_output_tokens <= 0) throw Error("max output tokens must be positive");
}

std::string request_hash(std::span<const ChatMessage> messages) {
  json canon = json::array();
  for (const auto& m : messages) {
    json content = json::array();
    for (const auto& part : m.parts) {
      if (const auto* t = std::get_if<TextPart>(&part)) {
        content.push_back({{"type", "text"}, {"text", t->text}});
      } else {
        const auto& img = std::get<ImagePart>(part).image;
        content.push_back(
            {{"type", "image"}, {"media_type", img.media_type}, {"sha256", sha256_hex(img.bytes)}});
      }
    }
    canon.push_back({{"role", to_string(m.role)}, {"content", std::move(content)}});
  }
  return sha256_hex(canon.dump());
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// --- replay -----------------------------------------------------------------

ReplayTransport::ReplayTransport(Transcript transcript) : transcript_(std::move(transcript)) {}

namespace {

std::string joined_text(std::span<const ChatMessage> messages) {
  std::string out;
  for (const auto& m : messages) {
    out += fmt::format("[{}] ", to_string(m.role));
    out += m.text();
    if (m.image_count()) out += fmt::format(" <{} image(s)>", m.image_count());
    out += '\n';
  }
  return out;
}

std::string first_difference(const std::string& expected, const std::string& actual) {
  std::size_t i = 0;
  while (i < expected.size() && i < actual.size() && expected[i] == actual[i]) ++i;
  auto excerpt = [&](const std::string& s) {
    const std::size_t from = i > 40 ? i - 40 : 0;
    return json(s.substr(from, 80)).dump();
  };
  return fmt::format("first difference at byte {}: recorded {} vs constructed {}", i,
                     excerpt(expected), excerpt(actual));
}

}  // namespace

ChatReply ReplayTransport::complete(const ChatRequest& request) {
  if (next_ >= transcript_.records.size()) {
    throw ReplayExhausted(fmt::format("transcript has {} record(s); request {} has no recording",
                                      transcript_.records.size(), next_ + 1));
  }
  const TranscriptRecord& rec = transcript_.records[next_];
  if (rec.request_hash != request.hash) {
    const std::string detail =
        first_difference(joined_text(rec.request), joined_text(request.new_messages));
    throw ReplayMismatch(fmt::format("request {}: hash {} does not match recorded {}; {}",
                                     next_ + 1, request.hash, rec.request_hash, detail));
  }
  ++next_;
  return {rec.response, rec.usage, rec.sent_at, rec.received_at};
}

// --- scripted ---------------------------------------------------------------

ScriptedTransport::ScriptedTransport(std::vector<std::string> replies)
    : replies_(std::move(replies)) {}

ChatReply ScriptedTransport::complete(const ChatRequest& request) {
  seen_.push_back({{request.new_messages.begin(), request.new_messages.end()},
                   request.messages.size(),
                   request.hash});
  if (next_ >= replies_.size()) {
    throw ReplayExhausted(fmt::format("script has only {} replies", replies_.size()));
  }
  ChatReply reply;
  reply.text = replies_[next_++];
  reply.usage.completion_tokens = static_cast<std::int64_t>(reply.text.size() / 4);
  // Fixed stamps keep scripted transcripts byte-stable.
  reply.sent_at = "1970-01-01T00:00:00Z";
  reply.received_at = "1970-01-01T00:00:00Z";
  return reply;
}

// --- rate limiter -----------------------------------------------------------

RateLimiter::RateLimiter(int requests_per_minute) : per_minute_(requests_per_minute) {}

void RateLimiter::set_limit(int requests_per_minute) {
  std::lock_guard lock(mu_);
  per_minute_ = requests_per_minute;
}

int RateLimiter::limit() const {
  std::lock_guard lock(mu_);
  return per_minute_;
}

void RateLimiter::acquire() {
  using clock = std::chrono::steady_clock;
  std::unique_lock lock(mu_);
  while (true) {
    if (per_minute_ <= 0) return;  // unlimited
    const auto now = clock::now();
    while (!window_.empty() && now - window_.front() >= std::chrono::minutes(1)) {
      window_.pop_front();
    }
    if (static_cast<int>(window_.size()) < per_minute_) {
      window_.push_back(now);
      return;
    }
    const auto wake = window_.front() + std::chrono::minutes(1);
    lock.unlock();
    std::this_thread::sleep_until(wake);
    lock.lock();
  }
}

RateLimiter& process_rate_limiter() {
  static RateLimiter limiter([] {
    const char* env = std::getenv("MMVRP_RATE_LIMIT_RPM");
    return env ? std::atoi(env) : 20;
  }());
  return limiter;
}

// --- session ----------------------------------------------------------------

ChatSession::ChatSession(SessionConfig config, ChatTransport& transport, Sleeper sleeper)
    : config_(std::move(config)), transport_(transport), sleeper_(std::move(sleeper)) {
  check_session_config(config_);
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  transcript_.model = config_.model;
  transcript_.temperature = config_.temperature;
}

void ChatSession::set_transcript_tags(std::string fingerprint, std::string mode) {
  transcript_.fingerprint = std::move(fingerprint);
  transcript_.mode = std::move(mode);
}

ChatMessage ChatSession::send(std::vector<ChatMessage> messages) {
  const std::size_t first_new = history_.size();
  history_.insert(history_.end(), messages.begin(), messages.end());
  const std::span<const ChatMessage> all(history_);
  const ChatRequest request{config_, all, all.subspan(first_new), request_hash(all)};

  const std::string sent_at = utc_timestamp();
  ChatReply reply;
  for (int attempt = 0;; ++attempt) {
    ++attempts_;
    try {
      reply = transport_.complete(request);
      break;
    } catch (const TransportError& e) {
      if (attempt >= config_.max_retries) {
        history_.resize(first_new);
        throw;
      }
      std::chrono::milliseconds wait = config_.backoff_base * (1LL << std::min(attempt, 16));
      if (const auto* rl = dynamic_cast<const RateLimited*>(&e); rl && rl->retry_after_seconds() > 0) {
        wait = std::max(wait, std::chrono::milliseconds(
                                  static_cast<std::int64_t>(rl->retry_after_seconds() * 1000)));
      }
      sleeper_(std::chrono::duration_cast<std::chrono::milliseconds>(wait));
    } catch (...) {
      history_.resize(first_new);
      throw;
    }
  }

  TranscriptRecord record;
  record.request_hash = request.hash;
  record.request = std::move(messages);
  record.response = reply.text;
  record.sent_at = reply.sent_at.value_or(sent_at);
  record.received_at = reply.received_at.value_or(utc_timestamp());
  record.usage = reply.usage;
  transcript_.records.push_back(std::move(record));

  ChatMessage answer = ChatMessage::assistant(std::move(reply.text));
  history_.push_back(answer);
  if (config_.transport == TransportMode::kRecord && record_path_) {
    persist_transcript(transcript_, *record_path_);
  }
  return answer;
}

}  // namespace mmvrp
