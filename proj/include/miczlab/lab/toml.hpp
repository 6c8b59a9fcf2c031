#pragma once

// Minimal TOML subset reader for experiment configs: [table] headers, key =
// value lines, strings, numbers, booleans, homogeneous arrays of numbers or
// strings, and # comments. Keys are flattened to dotted paths. Errors carry
// line numbers and field names.

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "miczlab/core/errors.hpp"

namespace micz::toml {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

using Value = std::variant<bool, double, std::string, std::vector<double>,
                           std::vector<std::string>>;

class Table {
  public:
    void set(const std::string& key, Value v) { values_[key] = std::move(v); }
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    template <class T>
    std::optional<T> get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        if (const T* p = std::get_if<T>(&it->second)) return *p;
        // integers written without a dot parse as double; allow lossless reuse
        throw ConfigError("field '" + key + "' has the wrong type");
    }

    template <class T>
    T require(const std::string& key) const {
        if (!has(key)) throw ConfigError("missing required field '" + key + "'");
        auto v = get<T>(key);
        if (!v) throw ConfigError("field '" + key + "' has the wrong type");
        return *v;
    }

    template <class T>
    T get_or(const std::string& key, T fallback) const {
        if (!has(key)) return fallback;
        auto v = get<T>(key);
        if (!v) throw ConfigError("field '" + key + "' has the wrong type");
        return *v;
    }

    const std::map<std::string, Value>& items() const { return values_; }

  private:
    std::map<std::string, Value> values_;
};

namespace detail {

inline std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// removes a trailing comment that is not inside a string literal
inline std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

inline Value parse_scalar(const std::string& tok, int line) {
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
        return tok.substr(1, tok.size() - 2);
    if (tok == "true") return true;
    if (tok == "false") return false;
    try {
        size_t used = 0;
        double d = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": cannot parse value '" + tok + "'");
    }
}

inline std::vector<std::string> split_array(const std::string& body, int line) {
    std::vector<std::string> toks;
    std::string cur;
    bool in_str = false;
    for (char c : body) {
        if (c == '"') in_str = !in_str;
        if (c == ',' && !in_str) {
            toks.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!strip(cur).empty()) toks.push_back(strip(cur));
    for (const auto& t : toks)
        if (t.empty()) throw ConfigError("line " + std::to_string(line) + ": empty array element");
    return toks;
}

}  // namespace detail

inline Table parse(std::istream& in) {
    Table t;
    std::string prefix;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = detail::strip(detail::strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated table header");
            prefix = detail::strip(s.substr(1, s.size() - 2));
            if (prefix.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty table name");
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::strip(s.substr(0, eq));
        std::string val = detail::strip(s.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (val.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        if (val.front() == '[') {
            if (val.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated array for '" +
                                  key + "'");
            const auto toks = detail::split_array(val.substr(1, val.size() - 2), lineno);
            if (toks.empty()) {
                t.set(full, std::vector<double>{});
                continue;
            }
            if (toks.front().front() == '"') {
                std::vector<std::string> vs;
                for (const auto& tok : toks)
                    vs.push_back(std::get<std::string>(detail::parse_scalar(tok, lineno)));
                t.set(full, vs);
            } else {
                std::vector<double> vd;
                for (const auto& tok : toks)
                    vd.push_back(std::get<double>(detail::parse_scalar(tok, lineno)));
                t.set(full, vd);
            }
        } else {
            t.set(full, detail::parse_scalar(val, lineno));
        }
    }
    return t;
}

inline Table parse_string(const std::string& text) {
    std::istringstream ss(text);
    return parse(ss);
}

}  // namespace micz::toml
