#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nevl::text {

// Decodes the UTF-8 code point starting at `pos`. Invalid bytes decode as
// U+FFFD with length 1 so that malformed input never crashes callers.
struct Decoded {
    uint32_t cp;
    size_t len;
};
Decoded decode_utf8(std::string_view s, size_t pos);

std::vector<std::string> split_whitespace(std::string_view s);
std::string trim(std::string_view s);

// ASCII + Latin-1 lowercasing (covers Italian accented vowels).
std::string lowercase(std::string_view s);

bool is_word_codepoint(uint32_t cp);
bool is_punct_codepoint(uint32_t cp);

// True when every code point of the token is punctuation.
bool is_punct_only(std::string_view token);

// Whitespace tokens that are not punctuation-only. This is the token count
// used for corpus length statistics.
size_t count_content_tokens(std::string_view s);

// Finds `phrase` in `s` starting at `from`, requiring non-word characters
// (or string edges) on both sides. Returns npos when absent.
size_t find_word_bounded(std::string_view s, std::string_view phrase, size_t from = 0);

// Case-insensitive variant of find_word_bounded over lowercased copies.
bool contains_word_bounded_ci(std::string_view s, std::string_view phrase);

uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(uint64_t v);

// Half-up rounding to two decimals, used only at serialization time.
double round_half_up2(double v);

}  // namespace nevl::text
