#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "minmetric/vec.hpp"

namespace minmetric {

/// Floats render with 17 significant digits so that equal values produce
/// byte-identical report files across runs.
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string format_vec(const Vec& v) {
    std::string s;
    for (int i = 0; i < v.dim(); ++i) {
        if (i) s += ' ';
        s += format_double(v[i]);
    }
    return s;
}

/// Comma-separated emission with '#' header lines; cells containing commas,
/// spaces or quotes are quoted.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : f_(path, std::ios::binary) {
        if (!f_) throw std::runtime_error("CsvWriter: cannot open '" + path + "'");
    }

    void comment(const std::string& line) { f_ << "# " << line << "\n"; }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) f_ << ",";
            f_ << escape(cells[i]);
        }
        f_ << "\n";
    }

    static std::string cell(double x) { return format_double(x); }
    static std::string cell(const Vec& v) { return format_vec(v); }

private:
    static std::string escape(const std::string& s) {
        if (s.find_first_of(", \"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += "\"\"";
            else out += c;
        }
        out += "\"";
        return out;
    }

    std::ofstream f_;
};

using JsonValue = std::variant<bool, long long, double, std::string>;
using JsonObject = std::map<std::string, JsonValue>;  // keys iterate sorted

inline std::string to_json_line(const JsonObject& obj) {
    std::string out = "{";
    bool first = true;
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            switch (c) {
                case '"': q += "\\\""; break;
                case '\\': q += "\\\\"; break;
                case '\n': q += "\\n"; break;
                case '\t': q += "\\t"; break;
                default: q += c;
            }
        }
        return q + "\"";
    };
    for (const auto& [k, v] : obj) {
        if (!first) out += ",";
        first = false;
        out += quote(k) + ":";
        if (std::holds_alternative<bool>(v)) out += std::get<bool>(v) ? "true" : "false";
        else if (std::holds_alternative<long long>(v)) out += std::to_string(std::get<long long>(v));
        else if (std::holds_alternative<double>(v)) out += format_double(std::get<double>(v));
        else out += quote(std::get<std::string>(v));
    }
    return out + "}";
}

class JsonLinesWriter {
public:
    explicit JsonLinesWriter(const std::string& path) : f_(path, std::ios::binary) {
        if (!f_) throw std::runtime_error("JsonLinesWriter: cannot open '" + path + "'");
    }
    void object(const JsonObject& obj) { f_ << to_json_line(obj) << "\n"; }

private:
    std::ofstream f_;
};

}  // namespace minmetric
