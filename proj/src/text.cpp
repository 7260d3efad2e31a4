#include "conceptmap/text.hpp"

#include <algorithm>
#include <cstdint>

#include "conceptmap/types.hpp"

namespace conceptmap {

std::string_view to_string(EntityClass c) {
  switch (c) {
    case EntityClass::Person:
      return "PERSON";
    case EntityClass::Organization:
      return "ORGANIZATION";
    case EntityClass::Location:
      return "LOCATION";
    case EntityClass::Unknown:
      break;
  }
  return "UNKNOWN";
}

std::optional<EntityClass> parse_entity_class(std::string_view s) {
  const std::string lower = text::to_lower(s);
  if (lower == "person") return EntityClass::Person;
  if (lower == "organization") return EntityClass::Organization;
  if (lower == "location") return EntityClass::Location;
  if (lower == "unknown") return EntityClass::Unknown;
  return std::nullopt;
}

std::string_view to_string(GrammaticalNumber n) {
  switch (n) {
    case GrammaticalNumber::Singular:
      return "SINGULAR";
    case GrammaticalNumber::Plural:
      return "PLURAL";
    case GrammaticalNumber::Ambiguous:
      break;
  }
  return "AMBIGUOUS";
}

std::string to_string(const ProvenanceKey& key) {
  return key.doc_id + "#" + std::to_string(key.sentence_index) + "." +
         std::to_string(key.triple_index);
}

}  // namespace conceptmap

namespace conceptmap::text {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || is_upper(c); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool starts_with_upper(std::string_view s) { return !s.empty() && is_upper(s.front()); }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong encodings, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

bool contains_token_sequence(const std::vector<std::string>& haystack,
                             const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

}  // namespace

std::string stem(std::string_view word) {
  std::string w = to_lower(word);
  bool stripped = false;
  if (ends_with(w, "ing") && w.size() - 3 >= 3) {
    w.resize(w.size() - 3);
    stripped = true;
  } else if (ends_with(w, "ied") && w.size() - 3 >= 2) {
    w.resize(w.size() - 3);
    w += 'y';
  } else if (ends_with(w, "ies") && w.size() - 3 >= 2) {
    w.resize(w.size() - 3);
    w += 'y';
  } else if (ends_with(w, "ed") && w.size() - 2 >= 3) {
    w.resize(w.size() - 2);
    stripped = true;
  } else if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
             !ends_with(w, "is") && w.size() - 1 >= 3) {
    w.resize(w.size() - 1);
  }
  if (stripped && w.size() >= 3) {
    const char last = w.back();
    const char prev = w[w.size() - 2];
    // l, s, z and f doublings are usually part of the root (call, pass, buzz, staff)
    if (last == prev && !is_vowel(last) && last != 'l' && last != 's' && last != 'z' &&
        last != 'f') {
      w.pop_back();
    }
  }
  if (w.size() > 3 && w.back() == 'e') w.pop_back();
  return w;
}

}  // namespace conceptmap::text
