#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conceptmap/types.hpp"

namespace conceptmap {

nlohmann::json triple_to_json(const Triple& t);
/// Throws Error("schema_violation") describing the first bad field.
Triple triple_from_json(const nlohmann::json& j);

/// Reads the triple-interchange format: one JSON object per line. Errors
/// carry the 1-based line number; duplicate ordering keys are rejected.
std::vector<Triple> parse_triples(std::string_view content, std::string_view origin);
std::vector<Triple> import_triples(const std::filesystem::path& path);

std::string triples_to_jsonl(const std::vector<Triple>& triples);
void write_triples(const std::filesystem::path& path, const std::vector<Triple>& triples);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace conceptmap
