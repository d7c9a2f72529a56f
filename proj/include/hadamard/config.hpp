#ifndef HADAMARD_CONFIG_HPP
#define HADAMARD_CONFIG_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadamard {

/// Raised for malformed config text or invalid values; the message carries
/// the file line it is anchored to.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Flat sectioned key-value config:
///     command = spread
///     [curvature]
///     kind = power
///     k = 2
/// '#' and ';' start comments.  Keys outside any section land in the ""
/// section.  Every key records its line number; keys never read by the
/// executing command are reported as unknown (no silent ignoring).
class RunConfig {
public:
    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_number(const std::string& section, const std::string& key) const;
    double get_number(const std::string& section, const std::string& key, double fallback) const;
    long get_integer(const std::string& section, const std::string& key, long fallback) const;
    bool get_flag(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;

    /// Entries never consumed by any getter: "[section] key (line N)".
    std::vector<std::string> unconsumed() const;

    /// All entries as section -> key -> value (for the report's input echo).
    std::map<std::string, std::map<std::string, std::string>> snapshot() const;

    const std::string& origin() const { return origin_; }

private:
    struct Entry {
        std::string value;
        int line;
        mutable bool consumed = false;
    };
    const Entry* find(const std::string& section, const std::string& key) const;
    const Entry& require(const std::string& section, const std::string& key) const;

    std::string origin_;
    std::map<std::string, std::map<std::string, Entry>> sections_;
};

} // namespace hadamard

#endif
