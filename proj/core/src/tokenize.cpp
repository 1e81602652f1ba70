#include "nevl/tokenize.hpp"

#include "nevl/text.hpp"

#include <array>

namespace nevl::metrics {

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
    size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

// The symbol set that gets padded unconditionally: printable ASCII minus
// letters, digits, apostrophe, comma, dash and period (the latter four have
// their own rules).
constexpr std::array<bool, 128> make_symbol_table() {
    std::array<bool, 128> t{};
    for (int c = 0x20; c <= 0x26; ++c) t[c] = true;  // space ! " # $ % &
    for (int c = 0x28; c <= 0x2B; ++c) t[c] = true;  // ( ) * +
    t[0x2F] = true;                                  // /
    for (int c = 0x3A; c <= 0x40; ++c) t[c] = true;  // : ; < = > ? @
    for (int c = 0x5B; c <= 0x60; ++c) t[c] = true;  // [ \ ] ^ _ `
    for (int c = 0x7B; c <= 0x7E; ++c) t[c] = true;  // { | } ~
    return t;
}
constexpr auto kSymbols = make_symbol_table();

bool is_symbol(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 128 && kSymbols[u];
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_period_comma(char c) { return c == '.' || c == ','; }

// Each pass below reproduces one leftmost non-overlapping substitution of the
// 13a pipeline; passes run in order over the whole string, as sequential
// regex substitutions would.

std::string pad_symbols(const std::string& s) {
    std::string out;
    out.reserve(s.size() * 2);
    for (const char c : s) {
        if (is_symbol(c)) {
            out += ' ';
            out += c;
            out += ' ';
        } else {
            out += c;
        }
    }
    return out;
}

// ([^0-9])([.,]) -> "$1 $2 "
std::string split_period_comma_after(const std::string& s) {
    std::string out;
    out.reserve(s.size() * 2);
    size_t i = 0;
    while (i < s.size()) {
        if (i + 1 < s.size() && !is_digit(s[i]) && is_period_comma(s[i + 1])) {
            out += s[i];
            out += ' ';
            out += s[i + 1];
            out += ' ';
            i += 2;
        } else {
            out += s[i];
            ++i;
        }
    }
    return out;
}

// ([.,])([^0-9]) -> " $1 $2"
std::string split_period_comma_before(const std::string& s) {
    std::string out;
    out.reserve(s.size() * 2);
    size_t i = 0;
    while (i < s.size()) {
        if (i + 1 < s.size() && is_period_comma(s[i]) && !is_digit(s[i + 1])) {
            out += ' ';
            out += s[i];
            out += ' ';
            out += s[i + 1];
            i += 2;
        } else {
            out += s[i];
            ++i;
        }
    }
    return out;
}

// ([0-9])(-) -> "$1 $2 "
std::string split_dash_after_digit(const std::string& s) {
    std::string out;
    out.reserve(s.size() * 2);
    size_t i = 0;
    while (i < s.size()) {
        if (i + 1 < s.size() && is_digit(s[i]) && s[i + 1] == '-') {
            out += s[i];
            out += " - ";
            i += 2;
        } else {
            out += s[i];
            ++i;
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> tokenize_13a(std::string_view text) {
    std::string s(text);
    replace_all(s, "<skipped>", "");
    replace_all(s, "-\n", "");
    replace_all(s, "\n", " ");
    if (s.find('&') != std::string::npos) {
        replace_all(s, "&quot;", "\"");
        replace_all(s, "&amp;", "&");
        replace_all(s, "&lt;", "<");
        replace_all(s, "&gt;", ">");
    }
    s = " " + s + " ";
    s = pad_symbols(s);
    s = split_period_comma_after(s);
    s = split_period_comma_before(s);
    s = split_dash_after_digit(s);
    return text::split_whitespace(s);
}

}  // namespace nevl::metrics
