#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mmvrp/error.hpp"
#include "mmvrp/hash.hpp"
#include "mmvrp/llm.hpp"

namespace fs = std::filesystem;

namespace mmvrp {

using nlohmann::json;

namespace {

std::string extension_for(const std::string& media_type) {
  if (media_type == "image/png") return "png";
  if (media_type == "image/jpeg") return "jpg";
  if (media_type == "image/webp") return "webp";
  return "bin";
}

std::string media_type_for(const std::string& ext) {
  if (ext == "png") return "image/png";
  if (ext == "jpg") return "image/jpeg";
  if (ext == "webp") return "image/webp";
  return "application/octet-stream";
}

json message_to_json(const ChatMessage& m, const fs::path& image_dir) {
  json content = json::array();
  for (const auto& part : m.parts) {
    if (const auto* t = std::get_if<TextPart>(&part)) {
      content.push_back({{"type", "text"}, {"text", t->text}});
      continue;
    }
    const auto& img = std::get<ImagePart>(part).image;
    const std::string sha = sha256_hex(img.bytes);
    const std::string file = sha + "." + extension_for(img.media_type);
    const fs::path target = image_dir / file;
    std::error_code ec;
    if (!fs::exists(target, ec)) {
      fs::create_directories(image_dir, ec);
      // Parallel recorders may share one images/ directory.
      const fs::path tmp = target.string() + fmt::format(
          ".{}.tmp", std::hash<std::thread::id>{}(std::this_thread::get_id()));
      {
        std::ofstream out(tmp, std::ios::binary);
        out.write(reinterpret_cast<const char*>(img.bytes.data()),
                  static_cast<std::streamsize>(img.bytes.size()));
        if (!out) throw SerializationError("cannot write image sidecar " + target.string());
      }
      fs::rename(tmp, target, ec);
      if (ec) throw SerializationError("cannot write image sidecar " + target.string());
    }
    content.push_back({{"type", "image"},
                       {"media_type", img.media_type},
                       {"sha256", sha},
                       {"file", "images/" + file}});
  }
  return {{"role", to_string(m.role)}, {"content", std::move(content)}};
}

ChatMessage message_from_json(const json& j, const fs::path& base, int line) {
  ChatMessage m;
  const auto role = parse_role(j.at("role").get<std::string>());
  if (!role) throw CorruptTranscript(fmt::format("line {}: unknown role", line));
  m.role = *role;
  for (const auto& c : j.at("content")) {
    const std::string type = c.at("type").get<std::string>();
    if (type == "text") {
      m.parts.emplace_back(TextPart{c.at("text").get<std::string>()});
      continue;
    }
    if (type != "image") throw CorruptTranscript(fmt::format("line {}: unknown part {}", line, type));
    const std::string sha = c.at("sha256").get<std::string>();
    const std::string rel = c.at("file").get<std::string>();
    const fs::path file = base / rel;
    std::ifstream in(file, std::ios::binary);
    if (!in) throw CorruptTranscript(fmt::format("line {}: missing image {}", line, file.string()));
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (sha256_hex(bytes) != sha) {
      throw CorruptTranscript(fmt::format("line {}: image {} does not match its hash", line, rel));
    }
    EncodedImage img;
    img.media_type = c.value("media_type", media_type_for(fs::path(rel).extension().string().substr(1)));
    img.bytes = std::move(bytes);
    m.parts.emplace_back(ImagePart{std::move(img)});
  }
  return m;
}

}  // namespace

void persist_transcript(const Transcript& transcript, const fs::path& path) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(base, ec);
  const fs::path image_dir = base / "images";

  std::ostringstream buf;
  const json header = {{"type", "header"},
                       {"schema_version", Transcript::kSchemaVersion},
                       {"fingerprint", transcript.fingerprint},
                       {"mode", transcript.mode},
                       {"model", transcript.model},
                       {"temperature", transcript.temperature}};
  buf << header.dump() << '\n';
  for (const auto& r : transcript.records) {
    json request = json::array();
    for (const auto& m : r.request) request.push_back(message_to_json(m, image_dir));
    const json line = {{"type", "exchange"},
                       {"request_hash", r.request_hash},
                       {"request", std::move(request)},
                       {"response", r.response},
                       {"sent_at", r.sent_at},
                       {"received_at", r.received_at},
                       {"usage",
                        {{"prompt_tokens", r.usage.prompt_tokens},
                         {"completion_tokens", r.usage.completion_tokens}}}};
    buf << line.dump() << '\n';
  }

  // Write-then-rename so a crash never leaves a half transcript behind.
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << buf.str();
    if (!out) throw SerializationError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw SerializationError("cannot move transcript into place: " + ec.message());
}

Transcript load_transcript(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SerializationError("cannot open transcript " + path.string());
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");

  Transcript t;
  std::string text;
  int line_no = 0;
  bool seen_header = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw CorruptTranscript(fmt::format("line {}: {}", line_no, e.what()));
    }
    try {
      const std::string type = j.value("type", "");
      if (type == "header") {
        const int schema = j.at("schema_version").get<int>();
        if (schema != Transcript::kSchemaVersion) {
          throw CorruptTranscript(fmt::format("unsupported schema version {}", schema));
        }
        t.fingerprint = j.value("fingerprint", "");
        t.mode = j.value("mode", "");
        t.model = j.value("model", "");
        t.temperature = j.value("temperature", 1.0);
        seen_header = true;
      } else if (type == "exchange") {
        if (!seen_header) throw CorruptTranscript(fmt::format("line {}: exchange before header", line_no));
        TranscriptRecord r;
        r.request_hash = j.at("request_hash").get<std::string>();
        for (const auto& m : j.at("request")) r.request.push_back(message_from_json(m, base, line_no));
        r.response = j.at("response").get<std::string>();
        r.sent_at = j.value("sent_at", "");
        r.received_at = j.value("received_at", "");
        if (j.contains("usage")) {
          r.usage.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
          r.usage.completion_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
        }
        t.records.push_back(std::move(r));
      } else {
        throw CorruptTranscript(fmt::format("line {}: unknown record type '{}'", line_no, type));
      }
    } catch (const json::exception& e) {
      throw CorruptTranscript(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return t;
}

}  // namespace mmvrp
