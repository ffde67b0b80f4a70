#include "rdmac/config.hpp"

#include <fstream>
#include <sstream>

#include "rdmac/csvfmt.hpp"
#include "rdmac/errors.hpp"

namespace rdmac {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open config file: " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), file.string());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text, const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw parse_error(line_no, "expected 'key = value' in " +
                                           (origin.empty() ? "config" : origin) + ", got '" +
                                           line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw parse_error(line_no, "empty key");
        if (cfg.values_.count(key)) throw parse_error(line_no, "duplicate key '" + key + "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
    consumed_[key] = false;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& KeyValueConfig::fetch(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) throw config_error("missing config key '" + key + "'");
    consumed_[key] = true;
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) { return fetch(key); }

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) {
    return has(key) ? fetch(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) { return parse_double(fetch(key)); }

double KeyValueConfig::get_double(const std::string& key, double fallback) {
    return has(key) ? get_double(key) : fallback;
}

long KeyValueConfig::get_long(const std::string& key) { return parse_long(fetch(key)); }

long KeyValueConfig::get_long(const std::string& key, long fallback) {
    return has(key) ? get_long(key) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) {
    return has(key) ? parse_u64(fetch(key)) : fallback;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) {
    std::string raw = fetch(key);
    for (char& c : raw) {
        if (c == ',') c = ' ';
    }
    std::istringstream in(raw);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_double(tok));
    if (out.empty()) throw config_error("config key '" + key + "' holds no numbers");
    return out;
}

void KeyValueConfig::finish() const {
    for (const auto& [key, value] : values_) {
        auto it = consumed_.find(key);
        if (it == consumed_.end() || !it->second) {
            throw config_error("unknown config key '" + key + "'" +
                               (origin_.empty() ? "" : " in " + origin_));
        }
    }
}

} // namespace rdmac
