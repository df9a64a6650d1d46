#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace textaug::text {

// A token is a maximal run of alphanumeric characters; bytes >= 0x80 are
// treated as word characters so UTF-8 words survive intact. Everything else
// separates tokens.
bool is_word_byte(unsigned char c);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Lowercased tokens with punctuation stripped.
std::vector<std::string> tokenize_lower(std::string_view s);

// Byte ranges [begin, end) of the tokens in the original surface string.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};
std::vector<TokenSpan> token_spans(std::string_view s);

std::string join_tokens(const std::vector<std::string>& tokens);

bool valid_utf8(std::string_view s);

}  // namespace textaug::text
