#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mmvrp/image.hpp"

namespace mmvrp {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct TextPart {
  std::string text;
  friend bool operator==(const TextPart&, const TextPart&) = default;
};

struct ImagePart {
  EncodedImage image;
  friend bool operator==(const ImagePart&, const ImagePart&) = default;
};

using ContentPart = std::variant<TextPart, ImagePart>;

struct ChatMessage {
  Role role = Role::kUser;
  std::vector<ContentPart> parts;

  static ChatMessage user(std::string text);
  static ChatMessage assistant(std::string text);

  // Concatenated text parts.
  std::string text() const;
  std::size_t image_count() const;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

enum class TransportMode { kLive, kRecord, kReplay };

std::string_view to_string(TransportMode mode);
std::optional<TransportMode> parse_transport_mode(std::string_view text);

struct SessionConfig {
  std::string model = "gpt-4-vision-preview";
  double temperature = 1.0;
  int max_output_tokens = 4096;
  std::chrono::milliseconds request_timeout{120000};
  // Extra attempts after the first failed one.
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{1000};
  TransportMode transport = TransportMode::kReplay;
};

// Throws Error on negative temperature / retries or non-positive token budget.
void check_session_config(const SessionConfig& config);

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct TranscriptRecord {
  std::string request_hash;           // over the full message history sent
  std::vector<ChatMessage> request;   // messages added by this turn
  std::string response;
  std::string sent_at;                // ISO-8601 UTC
  std::string received_at;
  TokenUsage usage;
  friend bool operator==(const TranscriptRecord&, const TranscriptRecord&) = default;
};

struct Transcript {
  static constexpr int kSchemaVersion = 1;

  std::string fingerprint;
  std::string mode;  // "MLLM-T" / "MLLM-V"
  std::string model;
  double temperature = 1.0;
  std::vector<TranscriptRecord> records;

  std::size_t image_count() const;
  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// One JSON object per line (header first); images are written to
// <dir>/images/<sha256>.<ext> next to the .jsonl file and referenced by hash.
// Throws SerializationError.
void persist_transcript(const Transcript& transcript, const std::filesystem::path& path);
// Throws SerializationError, CorruptTranscript (sidecar missing or hash mismatch).
Transcript load_transcript(const std::filesystem::path& path);

// SHA-256 of the canonical JSON form of `messages`; images enter by hash.
std::string request_hash(std::span<const ChatMessage> messages);

struct ChatRequest {
  const SessionConfig& config;
  std::span<const ChatMessage> messages;      // full history including this turn
  std::span<const ChatMessage> new_messages;  // this turn only
  std::string hash;
};

struct ChatReply {
  std::string text;
  TokenUsage usage;
  std::optional<std::string> sent_at;  // replay keeps the recorded timestamps
  std::optional<std::string> received_at;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  // Throws TransportError (retried by the session) or any other Error.
  virtual ChatReply complete(const ChatRequest& request) = 0;
};

// Serves stored responses in order; fails on exhausted transcript or on a
// request hash that differs from the recorded one.
class ReplayTransport : public ChatTransport {
 public:
  explicit ReplayTransport(Transcript transcript);
  ChatReply complete(const ChatRequest& request) override;
  std::size_t consumed() const { return next_; }
  const Transcript& transcript() const { return transcript_; }

 private:
  Transcript transcript_;
  std::size_t next_ = 0;
};

// Canned replies for fixtures and dry runs; keeps every request it receives.
class ScriptedTransport : public ChatTransport {
 public:
  explicit ScriptedTransport(std::vector<std::string> replies);
  ChatReply complete(const ChatRequest& request) override;

  struct Seen {
    std::vector<ChatMessage> new_messages;
    std::size_t history_size = 0;
    std::string hash;
  };
  const std::vector<Seen>& requests() const { return seen_; }

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
  std::vector<Seen> seen_;
};

// Sliding one-minute window shared by all live transports in the process.
class RateLimiter {
 public:
  explicit RateLimiter(int requests_per_minute);
  void acquire();
  void set_limit(int requests_per_minute);
  int limit() const;

 private:
  mutable std::mutex mu_;
  int per_minute_;
  std::deque<std::chrono::steady_clock::time_point> window_;
};

RateLimiter& process_rate_limiter();

struct HttpEndpoint {
  std::string url = "https://api.openai.com/v1/chat/completions";
  std::string api_key;
};

// Reads MMVRP_API_KEY (or OPENAI_API_KEY) and MMVRP_API_URL. Throws Error
// when no key is set.
HttpEndpoint endpoint_from_env();

// OpenAI-style chat-completions over HTTP(S); images go inline as base64
// data URLs.
class HttpTransport : public ChatTransport {
 public:
  explicit HttpTransport(HttpEndpoint endpoint, RateLimiter* limiter = &process_rate_limiter());
  ChatReply complete(const ChatRequest& request) override;

 private:
  HttpEndpoint endpoint_;
  RateLimiter* limiter_;
};

// JSON body sent by HttpTransport; exposed for tests.
std::string chat_completion_body(const SessionConfig& config,
                                 std::span<const ChatMessage> messages);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Single-owner conversation. Every send carries the whole history, so earlier
// turns stay visible to the model. In record mode the transcript is written
// to the record path after each exchange.
class ChatSession {
 public:
  ChatSession(SessionConfig config, ChatTransport& transport, Sleeper sleeper = {});

  ChatMessage send(std::vector<ChatMessage> messages);

  void set_record_path(std::filesystem::path path) { record_path_ = std::move(path); }
  void set_transcript_tags(std::string fingerprint, std::string mode);

  const SessionConfig& config() const { return config_; }
  const std::vector<ChatMessage>& history() const { return history_; }
  const Transcript& transcript() const { return transcript_; }
  std::size_t attempts() const { return attempts_; }

 private:
  SessionConfig config_;
  ChatTransport& transport_;
  Sleeper sleeper_;
  std::vector<ChatMessage> history_;
  Transcript transcript_;
  std::optional<std::filesystem::path> record_path_;
  std::size_t attempts_ = 0;
};

std::string utc_timestamp();

}  // namespace mmvrp
