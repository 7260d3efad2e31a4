#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by every stage. ASCII-only case handling;
// non-ASCII bytes pass through untouched.
namespace conceptmap::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
/// Collapses runs of ASCII whitespace to a single space and trims.
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split_words(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_space(char c);
bool is_upper(char c);
bool is_alpha(char c);
bool is_digit(char c);
bool starts_with_upper(std::string_view s);

bool valid_utf8(std::string_view s);

/// True if `needle` occurs in `haystack` as a contiguous run of whole tokens.
bool contains_token_sequence(const std::vector<std::string>& haystack,
                             const std::vector<std::string>& needle);

/// Light suffix stemmer used for relation matching: strips -ing, -ed, -ies,
/// -s, repairs doubled final consonants and drops a trailing "e", so that
/// "traveled", "travels" and "travel" share a stem.
std::string stem(std::string_view word);

}  // namespace conceptmap::text
