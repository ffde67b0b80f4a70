#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace rdmac {

// Flat "key = value" text config. '#' starts a comment; keys are validated by
// the consumer, which must touch every key (leftovers are errors).
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::filesystem::path& file);
    static KeyValueConfig parse_string(const std::string& text, const std::string& origin = "");

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    // Typed getters; each marks the key as consumed. Throws config_error when
    // the key is missing (no fallback given) or malformed.
    std::string get_string(const std::string& key);
    std::string get_string(const std::string& key, const std::string& fallback);
    double get_double(const std::string& key);
    double get_double(const std::string& key, double fallback);
    long get_long(const std::string& key);
    long get_long(const std::string& key, long fallback);
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
    std::vector<double> get_double_list(const std::string& key);

    // Error out if any key was never consumed (catches typos).
    void finish() const;

    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> consumed_;

    const std::string& fetch(const std::string& key);
};

} // namespace rdmac
