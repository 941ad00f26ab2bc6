#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "minmetric/convex_body.hpp"

namespace minmetric {

class BodyParseError : public std::runtime_error {
public:
    explicit BodyParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Line-oriented `key = value` domain-spec format (UTF-8). Keys:
///   kind      = ball | halfspace | ellipsoid | cylinder | polytope | product
///   dim       = d (>= 3)
///   radius    = r                        (ball, cylinder)
///   center    = c1 .. cd                 (ball, ellipsoid)
///   semi_axes = a1 .. ad                 (ellipsoid)
///   halfspace = n1 .. nd ; offset        (halfspace once, polytope repeated;
///                                         interior satisfies <n,x> < offset)
///   height    = z_lo z_hi                (cylinder)
///   factors   = space K | ball K R | interval LO HI   (product, repeated,
///                                         in coordinate-block order)
/// Blank lines and lines starting with '#' are skipped; unknown keys are
/// rejected.
inline ConvexBody parse_body(std::istream& in) {
    std::string kind;
    int dim = 0;
    double radius = 1.0;
    bool have_radius = false;
    std::vector<double> center, semi_axes, height;
    std::vector<std::pair<Vec, double>> faces_raw;
    std::vector<std::string> face_lines;
    std::vector<Factor> factors;

    auto fail = [](int line_no, const std::string& msg) {
        throw BodyParseError("line " + std::to_string(line_no) + ": " + msg);
    };

    auto parse_doubles = [&](const std::string& s, int line_no) {
        std::vector<double> out;
        std::istringstream ss(s);
        std::string tok;
        while (ss >> tok) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(tok, &pos));
                if (pos != tok.size()) fail(line_no, "bad number '" + tok + "'");
            } catch (const std::logic_error&) {
                fail(line_no, "bad number '" + tok + "'");
            }
        }
        return out;
    };

    std::string line;
    int line_no = 0;
    std::vector<std::pair<std::string, int>> pending_faces;  // parsed after dim is known
    std::vector<std::pair<std::string, int>> pending_factors;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        auto a = trimmed.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        auto b = trimmed.find_last_not_of(" \t\r");
        trimmed = trimmed.substr(a, b - a + 1);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        std::string key = trimmed.substr(0, eq);
        std::string value = trimmed.substr(eq + 1);
        auto strip = [](std::string s) {
            auto i = s.find_first_not_of(" \t");
            auto j = s.find_last_not_of(" \t");
            return i == std::string::npos ? std::string() : s.substr(i, j - i + 1);
        };
        key = strip(key);
        value = strip(value);
        if (value.empty()) fail(line_no, "empty value for key '" + key + "'");

        if (key == "kind") {
            kind = value;
        } else if (key == "dim") {
            auto v = parse_doubles(value, line_no);
            if (v.size() != 1 || v[0] != static_cast<int>(v[0])) fail(line_no, "dim must be an integer");
            dim = static_cast<int>(v[0]);
        } else if (key == "radius") {
            auto v = parse_doubles(value, line_no);
            if (v.size() != 1) fail(line_no, "radius takes one number");
            radius = v[0];
            have_radius = true;
        } else if (key == "center") {
            center = parse_doubles(value, line_no);
        } else if (key == "semi_axes") {
            semi_axes = parse_doubles(value, line_no);
        } else if (key == "height") {
            height = parse_doubles(value, line_no);
            if (height.size() != 2) fail(line_no, "height takes 'z_lo z_hi'");
        } else if (key == "halfspace") {
            pending_faces.emplace_back(value, line_no);
        } else if (key == "factors") {
            pending_factors.emplace_back(value, line_no);
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
    }

    if (kind.empty()) throw BodyParseError("missing 'kind'");
    if (dim == 0 && kind != "product") throw BodyParseError("missing 'dim'");

    auto to_vec = [&](const std::vector<double>& xs, const char* what) {
        if (static_cast<int>(xs.size()) != dim)
            throw BodyParseError(std::string(what) + ": expected " + std::to_string(dim) +
                                 " numbers, got " + std::to_string(xs.size()));
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = xs[i];
        return v;
    };

    for (const auto& [value, ln] : pending_faces) {
        auto semi = value.find(';');
        if (semi == std::string::npos) fail(ln, "halfspace needs 'n1 .. nd ; offset'");
        auto ns = parse_doubles(value.substr(0, semi), ln);
        auto off = parse_doubles(value.substr(semi + 1), ln);
        if (off.size() != 1) fail(ln, "halfspace needs a single offset after ';'");
        faces_raw.emplace_back(to_vec(ns, "halfspace normal"), off[0]);
    }

    for (const auto& [value, ln] : pending_factors) {
        std::istringstream ss(value);
        std::string fk;
        ss >> fk;
        Factor f;
        if (fk == "space") {
            f.kind = Factor::Kind::real_space;
            if (!(ss >> f.dim)) fail(ln, "factors = space K");
        } else if (fk == "ball") {
            f.kind = Factor::Kind::ball;
            if (!(ss >> f.dim >> f.radius)) fail(ln, "factors = ball K R");
        } else if (fk == "interval") {
            f.kind = Factor::Kind::interval;
            f.dim = 1;
            if (!(ss >> f.lo >> f.hi)) fail(ln, "factors = interval LO HI");
        } else {
            fail(ln, "unknown factor kind '" + fk + "'");
        }
        std::string rest;
        if (ss >> rest) fail(ln, "trailing tokens in factor");
        factors.push_back(f);
    }

    try {
        if (kind == "ball") {
            std::optional<Vec> c;
            if (!center.empty()) c = to_vec(center, "center");
            return ConvexBody::ball(dim, have_radius ? radius : 1.0, c);
        }
        if (kind == "halfspace") {
            if (faces_raw.size() != 1) throw BodyParseError("halfspace kind needs exactly one halfspace line");
            return ConvexBody::halfspace(faces_raw[0].first, faces_raw[0].second);
        }
        if (kind == "ellipsoid") {
            if (semi_axes.empty()) throw BodyParseError("ellipsoid needs semi_axes");
            std::optional<Vec> c;
            if (!center.empty()) c = to_vec(center, "center");
            return ConvexBody::ellipsoid(to_vec(semi_axes, "semi_axes"), c);
        }
        if (kind == "cylinder") {
            if (height.size() != 2) throw BodyParseError("cylinder needs height = z_lo z_hi");
            return ConvexBody::cylinder(dim, have_radius ? radius : 1.0, height[0], height[1]);
        }
        if (kind == "polytope") {
            if (faces_raw.empty()) throw BodyParseError("polytope needs halfspace lines");
            return ConvexBody::polytope(faces_raw);
        }
        if (kind == "product") {
            if (factors.empty()) throw BodyParseError("product needs factors lines");
            ConvexBody b = ConvexBody::product(factors);
            if (dim != 0 && b.dim() != dim)
                throw BodyParseError("product: dim does not match the factor blocks");
            return b;
        }
    } catch (const std::invalid_argument& e) {
        throw BodyParseError(e.what());
    }
    throw BodyParseError("unknown kind '" + kind + "'");
}

inline ConvexBody parse_body_string(const std::string& text) {
    std::istringstream ss(text);
    return parse_body(ss);
}

inline ConvexBody load_body_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw BodyParseError("cannot open body spec '" + path + "'");
    return parse_body(f);
}

}  // namespace minmetric
