#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mailgen::text {

/// Decodes one UTF-8 code point starting at `pos` and advances `pos`.
/// Invalid bytes decode as U+FFFD and consume a single byte.
char32_t next_code_point(std::string_view s, std::size_t& pos);
void append_utf8(std::string& out, char32_t cp);

bool is_letter(char32_t cp);
bool is_alnum(char32_t cp);
bool is_lower(char32_t cp);
bool is_punct(char32_t cp);
bool is_space(char32_t cp);
char32_t to_upper(char32_t cp);

std::string nfc(std::string_view s);
std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);

// NFC, lowercase, punctuation to spaces (intra-word hyphens kept),
// whitespace collapsed and trimmed.
std::string normalize(std::string_view s);
std::vector<std::string> tokens(std::string_view normalized);

// Lowercase + collapsed whitespace; used for company names.
std::string normalize_company(std::string_view s);

}  // namespace mailgen::text
