#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

namespace textaug::aug {

// Round-trip translation backend. Implementations throw textaug::Error on
// failure; they never return partial results.
class TranslationClient {
 public:
  virtual ~TranslationClient() = default;
  virtual std::string translate(const std::string& text, const std::string& src,
                                const std::string& tgt) = 0;
};

// POST {endpoint}/translate with {"text","src","tgt"}, expects {"text"}.
class HttpTranslationClient : public TranslationClient {
 public:
  explicit HttpTranslationClient(std::string endpoint, int retries = 3);
  std::string translate(const std::string& text, const std::string& src,
                        const std::string& tgt) override;

 private:
  std::string endpoint_;
  int retries_;
};

// Persistent (text, src, tgt) -> text map in a JSON file. Reads are shared,
// writes serialized; every insert is written through to disk.
class TranslationCache {
 public:
  explicit TranslationCache(std::string path);

  std::optional<std::string> lookup(const std::string& text, const std::string& src,
                                    const std::string& tgt) const;
  void insert(const std::string& text, const std::string& src, const std::string& tgt,
              const std::string& translated);
  std::size_t size() const;

 private:
  void save_locked() const;

  std::string path_;
  std::map<std::string, std::string> entries_;
  mutable std::shared_mutex mutex_;
};

// Serves from the cache; on a miss, forwards to `upstream` and stores the
// result. With no upstream this is the file-backed mock: a miss is an error.
class CachingTranslationClient : public TranslationClient {
 public:
  CachingTranslationClient(std::shared_ptr<TranslationCache> cache,
                           std::shared_ptr<TranslationClient> upstream);
  std::string translate(const std::string& text, const std::string& src,
                        const std::string& tgt) override;

 private:
  std::shared_ptr<TranslationCache> cache_;
  std::shared_ptr<TranslationClient> upstream_;
};

}  // namespace textaug::aug
