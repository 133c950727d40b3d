#include "twvort/ini.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace twvort {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& s) {
    const auto pos = s.find_first_of("#;");
    return pos == std::string::npos ? s : s.substr(0, pos);
}

} // namespace

bool IniFile::has(const std::string& section, const std::string& key) const {
    const auto sit = sections.find(section);
    return sit != sections.end() && sit->second.count(key) > 0;
}

std::string IniFile::get(const std::string& section, const std::string& key) const {
    const auto sit = sections.find(section);
    if (sit == sections.end() || !sit->second.count(key))
        throw std::runtime_error("missing config key [" + section + "] " + key);
    return sit->second.at(key);
}

std::string IniFile::get_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

IniFile parse_ini(const std::string& text) {
    IniFile ini;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string stripped = trim(strip_comment(raw));
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ConfigError(line, "unterminated section header: " + stripped);
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (section.empty())
                throw ConfigError(line, "empty section name");
            ini.sections[section];  // register even if empty
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "expected key = value, got: " + stripped);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError(line, "empty key");
        if (section.empty())
            throw ConfigError(line, "key outside any [section]: " + key);
        ini.sections[section][key] = value;
    }
    return ini;
}

IniFile load_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_ini(buffer.str());
}

double parse_double(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw std::runtime_error("cannot parse " + what + " as a real number: '" +
                                 text + "'");
    return v;
}

long parse_long(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0')
        throw std::runtime_error("cannot parse " + what + " as an integer: '" +
                                 text + "'");
    return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw std::runtime_error("cannot parse " + what + " as a boolean: '" + text + "'");
}

} // namespace twvort
