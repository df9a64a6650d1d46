#include "textaug/translate.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <thread>

#include "testutil.hpp"
#include "textaug/error.hpp"

using namespace textaug;
using nlohmann::json;
using testutil::TempDir;

namespace {

// In-process /translate endpoint that tags text with the language pair.
class MockServer {
 public:
  MockServer() {
    server_.Post("/translate", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      if (fail_first_ && requests_ == 1) {
        res.status = 500;
        return;
      }
      json body = json::parse(req.body);
      json reply = {{"text", "[" + body["src"].get<std::string>() + ">" +
                                 body["tgt"].get<std::string>() + "] " +
                                 body["text"].get<std::string>()}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int requests() const { return requests_; }
  void set_fail_first(bool value) { fail_first_ = value; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_ = 0;
  bool fail_first_ = false;
};

}  // namespace

TEST_CASE("HttpTranslationClient posts to /translate and parses the reply") {
  MockServer server;
  aug::HttpTranslationClient client(server.endpoint());
  CHECK(client.translate("hola", "es", "en") == "[es>en] hola");
}

TEST_CASE("HttpTranslationClient retries transient failures") {
  MockServer server;
  server.set_fail_first(true);
  aug::HttpTranslationClient client(server.endpoint(), 3);
  CHECK(client.translate("text", "en", "fr") == "[en>fr] text");
  CHECK(server.requests() == 2);
}

TEST_CASE("HttpTranslationClient reports failure after exhausting retries") {
  aug::HttpTranslationClient client("http://127.0.0.1:1", 2);
  CHECK_THROWS_WITH_AS(client.translate("text", "en", "fr"), doctest::Contains("2 attempts"),
                       Error);
}

TEST_CASE("TranslationCache persists entries across instances") {
  TempDir tmp;
  std::string path = tmp.file("cache.json");
  {
    aug::TranslationCache cache(path);
    CHECK(cache.size() == 0);
    CHECK_FALSE(cache.lookup("hello", "en", "es"));
    cache.insert("hello", "en", "es", "hola");
    CHECK(cache.lookup("hello", "en", "es") == std::optional<std::string>{"hola"});
  }
  aug::TranslationCache reloaded(path);
  CHECK(reloaded.size() == 1);
  CHECK(reloaded.lookup("hello", "en", "es") == std::optional<std::string>{"hola"});
  CHECK_FALSE(reloaded.lookup("hello", "es", "en"));
}

TEST_CASE("CachingTranslationClient serves hits without touching the upstream") {
  TempDir tmp;
  MockServer server;
  auto cache = std::make_shared<aug::TranslationCache>(tmp.file("cache.json"));
  auto upstream = std::make_shared<aug::HttpTranslationClient>(server.endpoint());
  aug::CachingTranslationClient client(cache, upstream);

  CHECK(client.translate("hi", "en", "it") == "[en>it] hi");
  CHECK(server.requests() == 1);
  CHECK(client.translate("hi", "en", "it") == "[en>it] hi");
  CHECK(server.requests() == 1);  // second call is a cache hit
  CHECK(cache->size() == 1);
}

TEST_CASE("cache-only client is the file-backed mock: a miss is an error") {
  TempDir tmp;
  std::string path = tmp.file("cache.json");
  {
    aug::TranslationCache seed_cache(path);
    seed_cache.insert("known text", "en", "es", "texto conocido");
  }
  auto cache = std::make_shared<aug::TranslationCache>(path);
  aug::CachingTranslationClient client(cache, nullptr);
  CHECK(client.translate("known text", "en", "es") == "texto conocido");
  CHECK_THROWS_WITH_AS(client.translate("unknown text", "en", "es"),
                       doctest::Contains("cache miss"), Error);
}
