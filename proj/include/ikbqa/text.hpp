#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ikbqa {

std::string ascii_lower(std::string_view text);
std::string trim(std::string_view text);

/// Lowercased tokens split on ASCII non-alphanumerics. Bytes >= 0x80 are
/// kept inside tokens so non-Latin names still tokenize.
std::vector<std::string> tokenize(std::string_view text);

/// Sorted, deduplicated token set.
std::vector<std::string> token_set(std::string_view text);

/// Tokens joined by single spaces.
std::string normalize_name(std::string_view text);

/// Overlapping 3-byte windows of the normalized text padded with one space
/// on each side. "ab" yields {" ab", "ab "}.
std::vector<std::string> char_trigrams(std::string_view text);

/// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view text);

/// Appends the UTF-8 encoding of a code point.
void append_utf8(std::string& out, char32_t cp);

}  // namespace ikbqa
