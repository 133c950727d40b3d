#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace twvort {

// Raised on malformed config text; carries the offending line number.
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_) + ": " + message),
          line(line_) {}
};

// Minimal INI reader: [section] headers, key = value pairs, '#' and ';'
// comments, blank lines. Values keep their verbatim text (trimmed) so they
// can be echoed back untouched. Duplicate keys take the last value.
struct IniFile {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
};

IniFile parse_ini(const std::string& text);
IniFile load_ini(const std::string& path);

double parse_double(const std::string& text, const std::string& what);
long parse_long(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

} // namespace twvort
