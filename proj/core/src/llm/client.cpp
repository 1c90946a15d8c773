#include "psd2code/llm/client.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <thread>

#include "psd2code/codecheck/jsx.hpp"
#include "psd2code/io.hpp"
#include "psd2code/text.hpp"

namespace psd2code::llm {

using nlohmann::json;

std::string BackendKind::label() const {
  switch (type) {
    case BackendType::http_chat: return "http:" + model;
    case BackendType::replay: return "replay";
    case BackendType::template_gen: return "template";
  }
  return "template";
}

// ---------------------------------------------------------------------------
// Request gate

RequestGate::RequestGate(int max_inflight, double requests_per_second)
    : max_inflight_(std::max(1, max_inflight)),
      min_interval_(requests_per_second > 0.0
                        ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(1.0 / requests_per_second))
                        : std::chrono::steady_clock::duration::zero()),
      next_start_(std::chrono::steady_clock::now()) {}

void RequestGate::acquire() {
  std::unique_lock lock(mu_);
  for (;;) {
    const auto now = std::chrono::steady_clock::now();
    if (inflight_ < max_inflight_ && now >= next_start_) {
      ++inflight_;
      next_start_ = std::max(now, next_start_) + min_interval_;
      return;
    }
    if (inflight_ >= max_inflight_) {
      cv_.wait(lock);
    } else {
      cv_.wait_until(lock, next_start_);
    }
  }
}

void RequestGate::release() {
  {
    std::lock_guard lock(mu_);
    --inflight_;
  }
  cv_.notify_one();
}

// ---------------------------------------------------------------------------
// Template backend

namespace {

std::string css_url_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string indent_px(const char* prop, std::int64_t v) {
  return std::string("    ") + prop + ": " + std::to_string(v) + "px;\n";
}

}  // namespace

std::string template_generate(const prompt::ConstraintEcho& echo) {
  std::string jsx = "<div className=\"page\">\n";
  std::string scss = ".page {\n";
  scss += "  position: absolute;\n";
  scss += "  top: 0px;\n  left: 0px;\n";
  scss += "  width: " + std::to_string(echo.page_width) + "px;\n";
  scss += "  height: " + std::to_string(echo.page_height) + "px;\n";

  for (const auto& e : echo.elements) {
    const bool is_text = e.type == pipeline::ElementType::text;
    if (is_text) {
      jsx += "  <p className=\"" + e.cls + "\">" + codecheck::encode_jsx_text(e.text) + "</p>\n";
    } else {
      jsx += "  <div className=\"" + e.cls + "\"></div>\n";
    }
    scss += "\n  ." + e.cls + " {\n";
    scss += "    position: absolute;\n";
    scss += indent_px("top", e.y);
    scss += indent_px("left", e.x);
    scss += indent_px("width", e.width);
    scss += indent_px("height", e.height);
    scss += "    z-index: " + std::to_string(e.z) + ";\n";
    if (is_text) {
      scss += "    font-size: 16px;\n";
      scss += "    color: #000000;\n";
    } else if (!e.asset.empty()) {
      scss += "    background-image: url(\"" + css_url_escape(e.asset) + "\");\n";
    } else {
      scss += "    background-color: #cccccc;\n";
    }
    scss += "  }\n";
  }
  jsx += "</div>\n";
  scss += "}\n";
  return "```jsx\n" + jsx + "```\n```scss\n" + scss + "```\n";
}

// ---------------------------------------------------------------------------
// Replay fixtures

namespace {

std::filesystem::path fixture_path(const std::filesystem::path& dir, const std::string& digest) {
  return dir / (digest + ".txt");
}

}  // namespace

void record_fixture(const prompt::PromptBundle& bundle, const std::string& response,
                    const std::filesystem::path& dir) {
  try {
    std::filesystem::create_directories(dir);
    write_file_text(fixture_path(dir, prompt::hash_prompt(bundle)), response);
  } catch (const std::exception& e) {
    throw LlmError(LlmErrorCode::io_error, std::string("cannot record fixture: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// HTTP chat backend

namespace {

std::string base64_encode(const std::uint8_t* data, std::size_t size) {
  static const char* alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((size + 2) / 3 * 4);
  for (std::size_t i = 0; i < size; i += 3) {
    std::uint32_t chunk = std::uint32_t(data[i]) << 16;
    if (i + 1 < size) chunk |= std::uint32_t(data[i + 1]) << 8;
    if (i + 2 < size) chunk |= data[i + 2];
    out.push_back(alphabet[(chunk >> 18) & 0x3F]);
    out.push_back(alphabet[(chunk >> 12) & 0x3F]);
    out.push_back(i + 1 < size ? alphabet[(chunk >> 6) & 0x3F] : '=');
    out.push_back(i + 2 < size ? alphabet[chunk & 0x3F] : '=');
  }
  return out;
}

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos)
    throw LlmError(LlmErrorCode::bad_response, "endpoint URL must include a scheme: " + url);
  const std::size_t path_at = url.find('/', scheme + 3);
  if (path_at == std::string::npos) return {url, "/"};
  return {url.substr(0, path_at), url.substr(path_at)};
}

std::string mime_for(const std::string& name) {
  const std::string ext = file_extension_lower(name);
  if (ext == "jpg" || ext == "jpeg") return "image/jpeg";
  return "image/png";
}

json build_request(const prompt::PromptBundle& bundle, const std::string& model,
                   const GenerationParams& params) {
  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", bundle.system}});
  if (!bundle.example.empty()) messages.push_back({{"role", "user"}, {"content", bundle.example}});

  if (bundle.attachments.empty()) {
    messages.push_back({{"role", "user"}, {"content", bundle.user}});
  } else {
    json content = json::array();
    content.push_back({{"type", "text"}, {"text", bundle.user}});
    for (const auto& a : bundle.attachments) {
      const std::string data_url = "data:" + mime_for(a.name) + ";base64," +
                                   base64_encode(a.bytes.data(), a.bytes.size());
      content.push_back({{"type", "image_url"}, {"image_url", {{"url", data_url}}}});
    }
    messages.push_back({{"role", "user"}, {"content", std::move(content)}});
  }

  return json{{"model", model},
              {"messages", std::move(messages)},
              {"temperature", params.temperature},
              {"max_tokens", params.max_tokens},
              {"top_p", params.top_p}};
}

std::string extract_choice_text(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception&) {
    throw LlmError(LlmErrorCode::bad_response, "response is not valid JSON");
  }
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
    throw LlmError(LlmErrorCode::bad_response, "response has no choices");
  const auto& msg = j["choices"][0].contains("message") ? j["choices"][0]["message"]
                                                        : j["choices"][0];
  if (msg.contains("content")) {
    const auto& content = msg["content"];
    if (content.is_string()) return content.get<std::string>();
    if (content.is_array()) {
      std::string out;
      for (const auto& part : content)
        if (part.contains("text")) out += part["text"].get<std::string>();
      return out;
    }
  }
  throw LlmError(LlmErrorCode::bad_response, "first choice has no content");
}

}  // namespace

LlmClient::LlmClient(BackendKind backend, GenerationParams params)
    : backend_(std::move(backend)),
      params_(params),
      gate_(backend_.max_inflight, backend_.requests_per_second) {}

std::string LlmClient::generate_http(const prompt::PromptBundle& bundle) {
  const char* key = std::getenv(backend_.api_key_env.c_str());
  if (key == nullptr || key[0] == '\0')
    throw LlmError(LlmErrorCode::auth_missing,
                   "no API key in environment variable " + backend_.api_key_env);

  const SplitUrl url = split_url(backend_.endpoint);
  const std::string body = build_request(bundle, backend_.model, params_).dump();

  int last_status = 0;
  std::string last_error = "transport failure";
  for (int attempt = 0; attempt <= params_.retries; ++attempt) {
    if (attempt > 0) {
      const int backoff_ms = backend_.backoff_base_ms << (attempt - 1);
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
    }
    httplib::Client cli(url.base);
    cli.set_connection_timeout(params_.timeout_sec, 0);
    cli.set_read_timeout(params_.timeout_sec, 0);
    cli.set_write_timeout(params_.timeout_sec, 0);
    cli.set_default_headers({{"Authorization", std::string("Bearer ") + key}});

    gate_.acquire();
    auto res = cli.Post(url.path, body, "application/json");
    gate_.release();

    if (!res) {
      const auto err = res.error();
      if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
          err == httplib::Error::Write) {
        last_status = -1;
        last_error = "request timed out";
        continue;
      }
      last_status = -2;
      last_error = "transport error: " + httplib::to_string(err);
      continue;
    }
    if (res->status == 200) return extract_choice_text(res->body);
    last_status = res->status;
    last_error = "http status " + std::to_string(res->status);
    if (res->status == 429 || res->status >= 500) continue;  // retryable
    throw LlmError(LlmErrorCode::http_status, last_error + ": " + res->body);
  }
  if (last_status == 429) throw LlmError(LlmErrorCode::rate_limited, "rate limited after retries");
  if (last_status == -1) throw LlmError(LlmErrorCode::timeout, last_error);
  throw LlmError(LlmErrorCode::http_status, last_error);
}

std::string LlmClient::generate(const prompt::PromptBundle& bundle) {
  switch (backend_.type) {
    case BackendType::template_gen:
      return template_generate(bundle.constraint_echo);
    case BackendType::replay: {
      const std::string digest = prompt::hash_prompt(bundle);
      const auto path = fixture_path(backend_.fixture_dir, digest);
      if (!std::filesystem::exists(path))
        throw LlmError(LlmErrorCode::missing_fixture, "no recorded response for digest " + digest);
      return read_file_text(path);
    }
    case BackendType::http_chat:
      return generate_http(bundle);
  }
  throw LlmError(LlmErrorCode::bad_response, "unknown backend");
}

std::string generate(const prompt::PromptBundle& bundle, const BackendKind& backend,
                     const GenerationParams& params) {
  LlmClient client(backend, params);
  return client.generate(bundle);
}

}  // namespace psd2code::llm
