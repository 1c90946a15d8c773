#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <thread>

#include "psd2code/codecheck/validate.hpp"
#include "psd2code/llm/client.hpp"
#include "psd2code/prompt/prompt.hpp"
#include "support/test_support.hpp"

using namespace psd2code;
using llm::BackendKind;
using llm::BackendType;
using llm::GenerationParams;
using llm::LlmError;
using llm::LlmErrorCode;
using test_support::TempDir;

namespace {

pipeline::DesignDocument small_doc() {
  pipeline::DesignDocument doc;
  doc.page_width = 200;
  doc.page_height = 100;
  pipeline::ElementNode img;
  img.id = "e1";
  img.name = "icon";
  img.type = pipeline::ElementType::image;
  img.x = 5;
  img.y = 10;
  img.width = 32;
  img.height = 32;
  img.asset_ref = "icon.png";
  pipeline::ElementNode label;
  label.id = "e2";
  label.name = "label";
  label.type = pipeline::ElementType::text;
  label.x = 50;
  label.y = 10;
  label.width = 120;
  label.height = 20;
  label.text_content = "Play now";
  label.z_hint = 1;
  doc.elements = {img, label};
  doc.assets = {{"icon.png", "", 32, 32, assets::AssetFormat::png}};
  return doc;
}

}  // namespace

TEST_CASE("template backend output validates cleanly against its document") {
  const auto doc = small_doc();
  const auto bundle = prompt::build_prompt(doc, {});
  const std::string response = llm::generate(bundle, BackendKind{}, GenerationParams{});

  const auto extraction = codecheck::extract_blocks(response);
  CHECK(extraction.violations.empty());
  const auto report = codecheck::validate(extraction.code, doc);
  CHECK(report.syntax_ok);
  CHECK(report.error_count() == 0);
}

TEST_CASE("replay backend records and returns responses by digest") {
  TempDir dir("replay");
  const auto doc = small_doc();
  const auto bundle = prompt::build_prompt(doc, {});

  BackendKind replay;
  replay.type = BackendType::replay;
  replay.fixture_dir = dir.path();

  SUBCASE("missing digest is a typed error") {
    try {
      llm::generate(bundle, replay, {});
      FAIL("expected LlmError");
    } catch (const LlmError& e) {
      CHECK(e.code() == LlmErrorCode::missing_fixture);
    }
  }

  SUBCASE("record then replay returns the exact bytes") {
    llm::record_fixture(bundle, "recorded \xF0\x9F\x8C\x9F bytes", dir.path());
    CHECK(llm::generate(bundle, replay, {}) == "recorded \xF0\x9F\x8C\x9F bytes");
  }

  SUBCASE("distinct bundles store distinct files; re-record overwrites") {
    llm::record_fixture(bundle, "one", dir.path());
    auto moved = doc;
    moved.elements[0].x = 7;
    const auto other = prompt::build_prompt(moved, {});
    llm::record_fixture(other, "two", dir.path());

    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path()))
      files += e.is_regular_file() ? 1 : 0;
    CHECK(files == 2);

    llm::record_fixture(bundle, "one-rewritten", dir.path());
    files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path()))
      files += e.is_regular_file() ? 1 : 0;
    CHECK(files == 2);
    CHECK(llm::generate(bundle, replay, {}) == "one-rewritten");
  }
}

TEST_CASE("http backend posts a chat-completion request and honors retry/auth rules") {
  httplib::Server server;
  std::atomic<int> calls{0};
  std::atomic<int> rate_limited_first{0};
  nlohmann::json last_request;
  std::string last_auth;

  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    last_auth = req.get_header_value("Authorization");
    last_request = nlohmann::json::parse(req.body);
    if (rate_limited_first.exchange(0) == 1) {
      res.status = 429;
      res.set_content("slow down", "text/plain");
      return;
    }
    const nlohmann::json reply = {
        {"choices", {{{"message", {{"role", "assistant"}, {"content", "```jsx\nx\n```"}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });

  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server_thread([&] { server.listen_after_bind(); });
  while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(1));

  const auto doc = small_doc();
  const auto bundle = prompt::build_prompt(doc, {});

  BackendKind http;
  http.type = BackendType::http_chat;
  http.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  http.model = "test-model";
  http.backoff_base_ms = 10;  // keep test retries fast

  GenerationParams params;
  params.retries = 2;

  SUBCASE("missing key is an auth error before any request") {
    ::unsetenv("PSD2CODE_API_KEY");
    try {
      llm::generate(bundle, http, params);
      FAIL("expected LlmError");
    } catch (const LlmError& e) {
      CHECK(e.code() == LlmErrorCode::auth_missing);
    }
    CHECK(calls.load() == 0);
  }

  SUBCASE("request carries model, params, messages and the bearer token") {
    ::setenv("PSD2CODE_API_KEY", "sk-test-123", 1);
    const std::string text = llm::generate(bundle, http, params);
    CHECK(text == "```jsx\nx\n```");
    CHECK(calls.load() == 1);
    CHECK(last_auth == "Bearer sk-test-123");
    CHECK(last_request["model"] == "test-model");
    CHECK(last_request["temperature"] == doctest::Approx(0.7));
    CHECK(last_request["max_tokens"] == 4000);
    REQUIRE(last_request["messages"].is_array());
    CHECK(last_request["messages"][0]["role"] == "system");
    // example + user messages follow
    CHECK(last_request["messages"].size() == 3);
  }

  SUBCASE("a 429 is retried with backoff until success") {
    ::setenv("PSD2CODE_API_KEY", "sk-test-123", 1);
    rate_limited_first = 1;
    const std::string text = llm::generate(bundle, http, params);
    CHECK(text == "```jsx\nx\n```");
    CHECK(calls.load() == 2);
  }

  server.stop();
  server_thread.join();
}

TEST_CASE("request gate caps in-flight requests") {
  llm::RequestGate gate(2, 0.0);  // no rate limit, concurrency cap only
  std::atomic<int> inflight{0};
  std::atomic<int> peak{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      gate.acquire();
      const int now = ++inflight;
      int expected = peak.load();
      while (now > expected && !peak.compare_exchange_weak(expected, now)) {
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
      --inflight;
      gate.release();
    });
  }
  for (auto& t : threads) t.join();
  CHECK(peak.load() <= 2);
  CHECK(peak.load() >= 1);
}

TEST_CASE("http backend sends attachments as base64 data URLs") {
  httplib::Server server;
  nlohmann::json last_request;
  server.Post("/chat", [&](const httplib::Request& req, httplib::Response& res) {
    last_request = nlohmann::json::parse(req.body);
    const nlohmann::json reply = {{"choices", {{{"message", {{"content", "ok"}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&] { server.listen_after_bind(); });
  while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(1));

  TempDir dir("attach");
  raster::write_png(raster::RasterImage::solid(2, 2, 1, 2, 3), dir / "screenshot.png");
  prompt::PromptOptions options;
  options.screenshot = dir / "screenshot.png";
  const auto bundle = prompt::build_prompt(small_doc(), options);

  BackendKind http;
  http.type = BackendType::http_chat;
  http.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/chat";
  http.model = "m";
  ::setenv("PSD2CODE_API_KEY", "k", 1);
  CHECK(llm::generate(bundle, http, {}) == "ok");

  const auto& user_msg = last_request["messages"].back();
  REQUIRE(user_msg["content"].is_array());
  bool has_image = false;
  for (const auto& part : user_msg["content"]) {
    if (part["type"] == "image_url") {
      has_image = true;
      const std::string url = part["image_url"]["url"];
      CHECK(url.rfind("data:image/png;base64,", 0) == 0);
    }
  }
  CHECK(has_image);

  server.stop();
  server_thread.join();
}
