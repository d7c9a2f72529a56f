#include "hadamard/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hadamard {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

RunConfig RunConfig::parse_string(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error(origin + ":" + std::to_string(lineno) +
                                   ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw config_error(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value' or '[section]'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
        auto [it, fresh] = cfg.sections_[section].emplace(key, Entry{value, lineno});
        if (!fresh)
            throw config_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                               "' (first defined on line " + std::to_string(it->second.line) + ")");
    }
    return cfg;
}

const RunConfig::Entry* RunConfig::find(const std::string& section, const std::string& key) const {
    auto sec = sections_.find(section);
    if (sec == sections_.end()) return nullptr;
    auto it = sec->second.find(key);
    return it == sec->second.end() ? nullptr : &it->second;
}

const RunConfig::Entry& RunConfig::require(const std::string& section,
                                           const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e)
        throw config_error(origin_ + ": missing required key '" + key + "' in section [" +
                           section + "]");
    return *e;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

bool RunConfig::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key) const {
    const Entry& e = require(section, key);
    e.consumed = true;
    return e.value;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    return e->value;
}

double RunConfig::get_number(const std::string& section, const std::string& key) const {
    const Entry& e = require(section, key);
    e.consumed = true;
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0')
        throw config_error(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                           "' is not a number: '" + e.value + "'");
    return v;
}

double RunConfig::get_number(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_number(section, key) : fallback;
}

long RunConfig::get_integer(const std::string& section, const std::string& key,
                            long fallback) const {
    if (!has(section, key)) return fallback;
    const double v = get_number(section, key);
    const long n = static_cast<long>(v);
    if (static_cast<double>(n) != v) {
        const Entry& e = require(section, key);
        throw config_error(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                           "' must be an integer");
    }
    return n;
}

bool RunConfig::get_flag(const std::string& section, const std::string& key, bool fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    const std::string& v = e->value;
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw config_error(origin_ + ":" + std::to_string(e->line) + ": key '" + key +
                       "' must be a boolean, got '" + v + "'");
}

std::vector<double> RunConfig::get_list(const std::string& section, const std::string& key) const {
    const Entry& e = require(section, key);
    e.consumed = true;
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw config_error(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                               "' has a non-numeric list entry '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw config_error(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                           "' is an empty list");
    return out;
}

std::map<std::string, std::map<std::string, std::string>> RunConfig::snapshot() const {
    std::map<std::string, std::map<std::string, std::string>> out;
    for (const auto& [section, entries] : sections_)
        for (const auto& [key, entry] : entries) out[section][key] = entry.value;
    return out;
}

std::vector<std::string> RunConfig::unconsumed() const {
    std::vector<std::string> out;
    for (const auto& [section, entries] : sections_) {
        for (const auto& [key, entry] : entries) {
            if (!entry.consumed)
                out.push_back("[" + (section.empty() ? "" : section) + "] " + key + " (line " +
                              std::to_string(entry.line) + ")");
        }
    }
    return out;
}

} // namespace hadamard
