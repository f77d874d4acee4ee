#include "gl3d/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gl3d {

namespace {

void fmt_number(std::string& out, const json& j) {
    if (j.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
        out += buf;
    } else {
        out += j.dump();
    }
}

void dump_rec(std::string& out, const json& j, int indent, int depth) {
    std::string pad(size_t(indent) * depth, ' ');
    std::string padIn(size_t(indent) * (depth + 1), ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann objects iterate sorted
            if (!first) out += ",\n";
            first = false;
            out += padIn + json(it.key()).dump() + ": ";
            dump_rec(out, it.value(), indent, depth + 1);
        }
        out += "\n" + pad + "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += padIn;
            dump_rec(out, j[i], indent, depth + 1);
        }
        out += "\n" + pad + "]";
    } else if (j.is_number()) {
        fmt_number(out, j);
    } else {
        out += j.dump();
    }
}

}  // namespace

std::string canonical_dump(const json& j, int indent) {
    std::string out;
    dump_rec(out, j, indent, 0);
    out += "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace gl3d
