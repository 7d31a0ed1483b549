#include "aerots/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "aerots/errors.hpp"

namespace aerots::cfg {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

Scalar parse_scalar(const std::string& token, const std::string& where) {
    if (token.size() >= 2 && token.front() == '"' && token.back() == '"') {
        return token.substr(1, token.size() - 2);
    }
    if (token == "true") return true;
    if (token == "false") return false;
    // Integer first, then float.
    {
        std::int64_t v = 0;
        auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (res.ec == std::errc{} && res.ptr == token.data() + token.size()) return v;
    }
    {
        double v = 0.0;
        auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (res.ec == std::errc{} && res.ptr == token.data() + token.size()) return v;
    }
    throw ConfigError(where + ": cannot parse value '" + token + "'");
}

std::vector<std::string> split_list_items(const std::string& body, const std::string& where) {
    std::vector<std::string> items;
    std::string current;
    bool in_string = false;
    for (const char ch : body) {
        if (ch == '"') in_string = !in_string;
        if (ch == ',' && !in_string) {
            items.push_back(trim(current));
            current.clear();
        } else {
            current += ch;
        }
    }
    const std::string last = trim(current);
    if (!last.empty()) items.push_back(last);
    for (const auto& item : items) {
        if (item.empty()) throw ConfigError(where + ": empty list element");
    }
    return items;
}

void scalar_to_text(std::string& out, const Scalar& s) {
    if (std::holds_alternative<bool>(s)) {
        out += std::get<bool>(s) ? "true" : "false";
    } else if (std::holds_alternative<std::int64_t>(s)) {
        out += std::to_string(std::get<std::int64_t>(s));
    } else if (std::holds_alternative<double>(s)) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof(buf), std::get<double>(s));
        out.append(buf, res.ptr);
    } else {
        out += '"';
        out += std::get<std::string>(s);
        out += '"';
    }
}

}  // namespace

Config Config::parse_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_string(buf.str(), path.string());
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config config;
    std::istringstream in(text);
    std::string raw_line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        std::ostringstream where_os;
        where_os << origin << ":" << line_no;
        const std::string where = where_os.str();

        const std::string line = trim(strip_comment(raw_line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(where + ": empty section name");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (!section.empty()) key = section + "." + key;
        const std::string value_text = trim(std::string_view(line).substr(eq + 1));
        if (value_text.empty()) throw ConfigError(where + ": empty value for '" + key + "'");

        Value value;
        if (value_text.front() == '[') {
            if (value_text.back() != ']') throw ConfigError(where + ": unterminated list");
            value.is_list = true;
            const std::string body = value_text.substr(1, value_text.size() - 2);
            for (const auto& item : split_list_items(body, where)) {
                value.items.push_back(parse_scalar(item, where));
            }
        } else {
            value.items.push_back(parse_scalar(value_text, where));
        }
        config.values_[key] = std::move(value);
    }
    return config;
}

const Value& Config::require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key) const {
    const Value& v = require(key);
    if (v.is_list || !std::holds_alternative<std::string>(v.items[0])) {
        throw ConfigError("config key '" + key + "' must be a string");
    }
    return std::get<std::string>(v.items[0]);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const {
    const Value& v = require(key);
    if (v.is_list || !std::holds_alternative<std::int64_t>(v.items[0])) {
        throw ConfigError("config key '" + key + "' must be an integer");
    }
    return std::get<std::int64_t>(v.items[0]);
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    const Value& v = require(key);
    if (!v.is_list && std::holds_alternative<double>(v.items[0])) {
        return std::get<double>(v.items[0]);
    }
    if (!v.is_list && std::holds_alternative<std::int64_t>(v.items[0])) {
        return static_cast<double>(std::get<std::int64_t>(v.items[0]));
    }
    throw ConfigError("config key '" + key + "' must be a number");
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool Config::get_bool(const std::string& key) const {
    const Value& v = require(key);
    if (v.is_list || !std::holds_alternative<bool>(v.items[0])) {
        throw ConfigError("config key '" + key + "' must be a boolean");
    }
    return std::get<bool>(v.items[0]);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

std::vector<std::string> Config::get_string_list(const std::string& key) const {
    const Value& v = require(key);
    std::vector<std::string> out;
    for (const auto& item : v.items) {
        if (!std::holds_alternative<std::string>(item)) {
            throw ConfigError("config key '" + key + "' must be a list of strings");
        }
        out.push_back(std::get<std::string>(item));
    }
    return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key,
                                                 const std::vector<std::string>& fallback) const {
    return has(key) ? get_string_list(key) : fallback;
}

std::vector<std::int64_t> Config::get_int_list(const std::string& key) const {
    const Value& v = require(key);
    std::vector<std::int64_t> out;
    for (const auto& item : v.items) {
        if (!std::holds_alternative<std::int64_t>(item)) {
            throw ConfigError("config key '" + key + "' must be a list of integers");
        }
        out.push_back(std::get<std::int64_t>(item));
    }
    return out;
}

std::vector<std::int64_t> Config::get_int_list(
    const std::string& key, const std::vector<std::int64_t>& fallback) const {
    return has(key) ? get_int_list(key) : fallback;
}

void Config::set_string(const std::string& key, const std::string& value) {
    Value v;
    v.items.push_back(value);
    values_[key] = std::move(v);
}

void Config::set_int(const std::string& key, std::int64_t value) {
    Value v;
    v.items.push_back(value);
    values_[key] = std::move(v);
}

void Config::set_int_list(const std::string& key, const std::vector<std::int64_t>& value) {
    Value v;
    v.is_list = true;
    for (const auto i : value) v.items.push_back(i);
    values_[key] = std::move(v);
}

void Config::set_string_list(const std::string& key, const std::vector<std::string>& value) {
    Value v;
    v.is_list = true;
    for (const auto& s : value) v.items.push_back(s);
    values_[key] = std::move(v);
}

std::string Config::serialize() const {
    std::string out;
    for (const auto& [key, value] : values_) {
        out += key;
        out += " = ";
        if (value.is_list) {
            out += '[';
            for (std::size_t i = 0; i < value.items.size(); ++i) {
                if (i) out += ", ";
                scalar_to_text(out, value.items[i]);
            }
            out += ']';
        } else {
            scalar_to_text(out, value.items[0]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace aerots::cfg
