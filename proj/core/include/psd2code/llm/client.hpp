#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <string>

#include "psd2code/prompt/prompt.hpp"

namespace psd2code::llm {

struct GenerationParams {
  double temperature = 0.7;
  int max_tokens = 4000;
  double top_p = 1.0;
  int retries = 2;        // retry attempts after the first request
  int timeout_sec = 120;
};

enum class BackendType { http_chat, replay, template_gen };

struct BackendKind {
  BackendType type = BackendType::template_gen;

  // http_chat
  std::string endpoint;  // full chat-completions URL
  std::string model;
  std::string api_key_env = "PSD2CODE_API_KEY";
  int max_inflight = 2;
  double requests_per_second = 2.0;
  int backoff_base_ms = 1000;  // 1s/2s/4s exponential backoff

  // replay
  std::filesystem::path fixture_dir;

  std::string label() const;
};

enum class LlmErrorCode {
  rate_limited,
  timeout,
  missing_fixture,
  auth_missing,
  http_status,
  bad_response,
  io_error,
};

class LlmError : public std::runtime_error {
 public:
  LlmError(LlmErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  LlmErrorCode code() const { return code_; }

 private:
  LlmErrorCode code_;
};

// Serializes http traffic through a shared gate: at most max_inflight requests
// at once, started no faster than requests_per_second.
class RequestGate {
 public:
  RequestGate(int max_inflight, double requests_per_second);
  void acquire();
  void release();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int max_inflight_;
  std::chrono::steady_clock::duration min_interval_;
  int inflight_ = 0;
  std::chrono::steady_clock::time_point next_start_;
};

class LlmClient {
 public:
  LlmClient(BackendKind backend, GenerationParams params);

  // http_chat posts the bundle as a chat-completion request (attachments as
  // base64 data URLs); replay returns the recorded response for the bundle's
  // digest; template_gen emits correct-by-construction code from the
  // constraint echo. Safe to call concurrently.
  std::string generate(const prompt::PromptBundle& bundle);

  const BackendKind& backend() const { return backend_; }

 private:
  std::string generate_http(const prompt::PromptBundle& bundle);
  BackendKind backend_;
  GenerationParams params_;
  RequestGate gate_;
};

std::string generate(const prompt::PromptBundle& bundle, const BackendKind& backend,
                     const GenerationParams& params);

// Stores response under the bundle's prompt digest so replay can return it.
void record_fixture(const prompt::PromptBundle& bundle, const std::string& response,
                    const std::filesystem::path& dir);

// The deterministic generator behind the template backend: absolute-positioned
// divs per leaf element under a single page wrapper, one class per element.
std::string template_generate(const prompt::ConstraintEcho& echo);

}  // namespace psd2code::llm
