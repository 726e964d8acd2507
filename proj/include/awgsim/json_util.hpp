#pragma once

// Field access helpers for the JSON config files. Failures raise FormatError
// with a JSON-pointer style location so the CLI can report the offending field.

#include <filesystem>
#include <string>

#include "json.hpp"

namespace awgsim::jsonutil {

using nlohmann::json;

/// Parses text; syntax errors report line and column.
json parse(const std::string& text, const std::string& source);
json load(const std::filesystem::path& path);

double number(const json& obj, const std::string& key, const std::string& where);
double number_or(const json& obj, const std::string& key, double fallback, const std::string& where);
std::string string(const json& obj, const std::string& key, const std::string& where);
const json& object(const json& j, const std::string& where);
const json& array(const json& j, const std::string& where);

}  // namespace awgsim::jsonutil
