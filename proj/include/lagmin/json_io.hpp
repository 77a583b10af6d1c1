#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include <stdexcept>

namespace lagmin {

using Json = nlohmann::ordered_json;

inline void dump_json(const Json& j, std::string& out, int indent, int depth) {
    auto nl = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<size_t>(d * indent), ' ');
    };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) { out += "{}"; return; }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            nl(depth + 1);
            out += Json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            dump_json(it.value(), out, indent, depth + 1);
        }
        nl(depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) { out += "[]"; return; }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            nl(depth + 1);
            dump_json(v, out, indent, depth + 1);
        }
        nl(depth);
        out += ']';
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        if (!std::isfinite(x)) { out += "null"; return; }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
        return;
    }
    default:
        out += j.dump();
    }
}

// floats with 17 significant digits, non-finite as null, insertion key order
inline std::string to_json_text(const Json& j, int indent = 2) {
    std::string s;
    dump_json(j, s, indent, 0);
    return s;
}

// temp file + rename
inline void write_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp);
        f << text;
        if (!f) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

} // namespace lagmin
