#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace aerots::cfg {

// TOML-like key/value documents:
//   # comment
//   [section]            -> keys below are "section.key"
//   key = "string"       | 3 | 2.5 | true | [1, 2, 3] | ["a", "b"]
// Arrays hold scalars of one kind. Anything fancier (nested tables, dates,
// multi-line strings) is out of contract. CLI flags override parsed keys.

using Scalar = std::variant<bool, std::int64_t, double, std::string>;

struct Value {
    bool is_list = false;
    std::vector<Scalar> items;  // single element unless is_list
};

class Config {
public:
    static Config parse_file(const std::filesystem::path& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    // Typed getters throw ConfigError naming the key on type mismatch;
    // the defaulted forms return the fallback when the key is absent.
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_string_list(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key,
                                             const std::vector<std::string>& fallback) const;
    std::vector<std::int64_t> get_int_list(const std::string& key) const;
    std::vector<std::int64_t> get_int_list(const std::string& key,
                                           const std::vector<std::int64_t>& fallback) const;

    void set_string(const std::string& key, const std::string& value);
    void set_int(const std::string& key, std::int64_t value);
    void set_int_list(const std::string& key, const std::vector<std::int64_t>& value);
    void set_string_list(const std::string& key, const std::vector<std::string>& value);

    // Canonical text form (sorted keys, one per line, no sections); written
    // to the run directory so every result can be regenerated.
    std::string serialize() const;

private:
    const Value& require(const std::string& key) const;
    std::map<std::string, Value> values_;
};

}  // namespace aerots::cfg
