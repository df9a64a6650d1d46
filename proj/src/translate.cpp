#include "textaug/translate.hpp"

#include <filesystem>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "textaug/error.hpp"

namespace textaug::aug {

using nlohmann::json;

namespace {

// \x1f never occurs in language codes and keeps keys unambiguous.
std::string cache_key(const std::string& text, const std::string& src, const std::string& tgt) {
  return src + '\x1f' + tgt + '\x1f' + text;
}

}  // namespace

HttpTranslationClient::HttpTranslationClient(std::string endpoint, int retries)
    : endpoint_(std::move(endpoint)), retries_(retries < 1 ? 1 : retries) {}

std::string HttpTranslationClient::translate(const std::string& text, const std::string& src,
                                             const std::string& tgt) {
  json body = {{"text", text}, {"src", src}, {"tgt", tgt}};
  std::string payload = body.dump();
  std::string last_error;
  for (int attempt = 0; attempt < retries_; ++attempt) {
    httplib::Client client(endpoint_);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    httplib::Result res = client.Post("/translate", payload, "application/json");
    if (!res) {
      last_error = "connection failed (" + httplib::to_string(res.error()) + ")";
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("text") || !reply["text"].is_string()) {
      last_error = "malformed reply body";
      continue;
    }
    return reply["text"].get<std::string>();
  }
  throw Error(ErrorKind::runtime,
              "translation " + src + "->" + tgt + " failed after " + std::to_string(retries_) +
                  " attempts: " + last_error);
}

TranslationCache::TranslationCache(std::string path) : path_(std::move(path)) {
  if (!std::filesystem::exists(path_)) return;
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open translation cache " + path_);
  json obj = json::parse(in, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw Error(ErrorKind::parse, "translation cache " + path_ + " is not a JSON object");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!it.value().is_string()) {
      throw Error(ErrorKind::parse, "translation cache " + path_ + " has a non-string entry");
    }
    entries_[it.key()] = it.value().get<std::string>();
  }
}

std::optional<std::string> TranslationCache::lookup(const std::string& text, const std::string& src,
                                                    const std::string& tgt) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(cache_key(text, src, tgt));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void TranslationCache::insert(const std::string& text, const std::string& src,
                              const std::string& tgt, const std::string& translated) {
  std::unique_lock lock(mutex_);
  entries_[cache_key(text, src, tgt)] = translated;
  save_locked();
}

std::size_t TranslationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void TranslationCache::save_locked() const {
  json obj = json::object();
  for (const auto& [key, value] : entries_) obj[key] = value;
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write translation cache " + path_);
  out << obj.dump(2) << '\n';
}

CachingTranslationClient::CachingTranslationClient(std::shared_ptr<TranslationCache> cache,
                                                   std::shared_ptr<TranslationClient> upstream)
    : cache_(std::move(cache)), upstream_(std::move(upstream)) {
  if (!cache_) throw Error(ErrorKind::invalid_argument, "translation cache is required");
}

std::string CachingTranslationClient::translate(const std::string& text, const std::string& src,
                                                const std::string& tgt) {
  if (auto hit = cache_->lookup(text, src, tgt)) return *hit;
  if (!upstream_) {
    throw Error(ErrorKind::not_found,
                "translation cache miss for " + src + "->" + tgt + " and no endpoint configured");
  }
  std::string translated = upstream_->translate(text, src, tgt);
  cache_->insert(text, src, tgt, translated);
  return translated;
}

}  // namespace textaug::aug
