#include "nevl/text.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace nevl::text {

Decoded decode_utf8(std::string_view s, size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};
    auto cont = [&](size_t i) {
        return i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80;
    };
    if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
        uint32_t cp = (b0 & 0x1Fu) << 6 | (static_cast<unsigned char>(s[pos + 1]) & 0x3Fu);
        return {cp, 2};
    }
    if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
        uint32_t cp = (b0 & 0x0Fu) << 12 | (static_cast<unsigned char>(s[pos + 1]) & 0x3Fu) << 6 |
                      (static_cast<unsigned char>(s[pos + 2]) & 0x3Fu);
        return {cp, 3};
    }
    if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
        uint32_t cp = (b0 & 0x07u) << 18 | (static_cast<unsigned char>(s[pos + 1]) & 0x3Fu) << 12 |
                      (static_cast<unsigned char>(s[pos + 2]) & 0x3Fu) << 6 |
                      (static_cast<unsigned char>(s[pos + 3]) & 0x3Fu);
        return {cp, 4};
    }
    return {0xFFFDu, 1};
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lowercase(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        auto [cp, len] = decode_utf8(s, i);
        uint32_t lo = cp;
        if (cp >= 'A' && cp <= 'Z') {
            lo = cp + 0x20;
        } else if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {  // Latin-1 capitals, not MULTIPLICATION SIGN
            lo = cp + 0x20;
        }
        if (lo < 0x80) {
            out.push_back(static_cast<char>(lo));
        } else if (lo < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (lo >> 6)));
            out.push_back(static_cast<char>(0x80 | (lo & 0x3F)));
        } else {
            out.append(s.substr(i, len));  // untouched beyond Latin-1
        }
        i += len;
    }
    return out;
}

bool is_word_codepoint(uint32_t cp) {
    if (cp >= '0' && cp <= '9') return true;
    if (cp >= 'A' && cp <= 'Z') return true;
    if (cp >= 'a' && cp <= 'z') return true;
    if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) return true;  // Latin-1 letters
    if (cp >= 0x100 && cp <= 0x17F) return true;                            // Latin Extended-A
    return false;
}

bool is_punct_codepoint(uint32_t cp) {
    if ((cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
        (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E))
        return true;
    switch (cp) {  // Latin-1 punctuation
        case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
            return true;
        default:
            break;
    }
    if (cp >= 0x2010 && cp <= 0x2027) return true;  // dashes, quotes, daggers, ellipsis
    if (cp >= 0x2030 && cp <= 0x205E) return true;  // per-mille .. general punctuation tail
    return false;
}

bool is_punct_only(std::string_view token) {
    if (token.empty()) return false;
    size_t i = 0;
    while (i < token.size()) {
        auto [cp, len] = decode_utf8(token, i);
        if (!is_punct_codepoint(cp)) return false;
        i += len;
    }
    return true;
}

size_t count_content_tokens(std::string_view s) {
    size_t n = 0;
    for (const auto& tok : split_whitespace(s))
        if (!is_punct_only(tok)) ++n;
    return n;
}

namespace {

// Code point immediately before byte offset `pos` (npos-safe via pos==0).
uint32_t codepoint_before(std::string_view s, size_t pos) {
    size_t start = pos;
    do {
        --start;
    } while (start > 0 && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80);
    return decode_utf8(s, start).cp;
}

}  // namespace

size_t find_word_bounded(std::string_view s, std::string_view phrase, size_t from) {
    if (phrase.empty()) return std::string_view::npos;
    size_t pos = from;
    while ((pos = s.find(phrase, pos)) != std::string_view::npos) {
        const bool left_ok = pos == 0 || !is_word_codepoint(codepoint_before(s, pos));
        const size_t end = pos + phrase.size();
        const bool right_ok = end >= s.size() || !is_word_codepoint(decode_utf8(s, end).cp);
        if (left_ok && right_ok) return pos;
        ++pos;
    }
    return std::string_view::npos;
}

bool contains_word_bounded_ci(std::string_view s, std::string_view phrase) {
    const std::string ls = lowercase(s);
    const std::string lp = lowercase(phrase);
    return find_word_bounded(ls, lp) != std::string_view::npos;
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

double round_half_up2(double v) {
    return std::floor(v * 100.0 + 0.5) / 100.0;
}

}  // namespace nevl::text
