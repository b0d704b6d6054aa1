#include "covario/body_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "covario/error.hpp"

namespace covario {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw Error(ErrorKind::ParseError, "unknown key \"" + key + "\"");
    }
}

const json& require(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing key \"") + key + "\"");
    return j.at(key);
}

double number(const json& j, const char* what) {
    if (!j.is_number()) throw Error(ErrorKind::ParseError, std::string(what) + " must be a number");
    return j.get<double>();
}

Vec2 point(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::ParseError, std::string(what) + " must be [x, y]");
    return {number(j[0], what), number(j[1], what)};
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

Body body_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "body specification must be a JSON object");
    const auto& kind_node = require(j, "kind");
    if (!kind_node.is_string()) throw Error(ErrorKind::ParseError, "\"kind\" must be a string");
    const auto kind = kind_node.get<std::string>();
    const Vec2 offset = j.contains("offset") ? point(j.at("offset"), "offset") : Vec2{};

    if (kind == "polygon") {
        reject_unknown_keys(j, {"kind", "vertices", "offset"});
        const auto& vs = require(j, "vertices");
        if (!vs.is_array()) throw Error(ErrorKind::ParseError, "\"vertices\" must be an array");
        std::vector<Vec2> v;
        for (const auto& p : vs) v.push_back(point(p, "vertex"));
        return Body(Polygon(std::move(v)), offset);
    }
    if (kind == "support2d") {
        reject_unknown_keys(j, {"kind", "a0", "coeffs", "offset"});
        const double a0 = number(require(j, "a0"), "a0");
        std::vector<std::pair<double, double>> c;
        if (j.contains("coeffs")) {
            for (const auto& ab : j.at("coeffs")) {
                const Vec2 p = point(ab, "coefficient pair");
                c.emplace_back(p.x, p.y);
            }
        }
        return Body(SupportBody(a0, std::move(c)), offset);
    }
    if (kind == "disk") {
        reject_unknown_keys(j, {"kind", "center", "radius", "offset"});
        return Body(Disk(point(require(j, "center"), "center"), number(require(j, "radius"), "radius")), offset);
    }
    if (kind == "zonogon") {
        reject_unknown_keys(j, {"kind", "center", "generators", "offset"});
        const Vec2 c = j.contains("center") ? point(j.at("center"), "center") : Vec2{};
        const auto& gens = require(j, "generators");
        if (!gens.is_array()) throw Error(ErrorKind::ParseError, "\"generators\" must be an array");
        std::vector<Segment> segs;
        for (const auto& g : gens) {
            if (!g.is_array() || g.size() != 2) throw Error(ErrorKind::ParseError, "generator must be [[px,py],[qx,qy]]");
            segs.emplace_back(point(g[0], "generator endpoint"), point(g[1], "generator endpoint"));
        }
        return Body(zonogon(c, segs), offset);
    }
    throw Error(ErrorKind::ParseError, "unknown body kind \"" + kind + "\"");
}

Body parse_body(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw Error(ErrorKind::ParseError, "malformed JSON at line " + std::to_string(line) + ", column " +
                                               std::to_string(col) + ": " + e.what());
    }
    return body_from_json(j);
}

Body load_body(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_body(ss.str());
    } catch (const Error& e) {
        std::string msg = e.what();
        const std::string prefix = std::string(to_string(e.kind())) + ": ";
        if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
        throw Error(e.kind(), path.string() + ": " + msg);
    }
}

json body_to_json(const Body& body) {
    json j = std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Polygon>) {
                json v = json::array();
                for (const auto& p : s.vertices()) v.push_back({p.x, p.y});
                return {{"kind", "polygon"}, {"vertices", v}};
            } else if constexpr (std::is_same_v<T, SupportBody>) {
                json c = json::array();
                for (const auto& [a, b] : s.coeffs()) c.push_back({a, b});
                return {{"kind", "support2d"}, {"a0", s.a0()}, {"coeffs", c}};
            } else {
                return {{"kind", "disk"}, {"center", {s.center.x, s.center.y}}, {"radius", s.radius}};
            }
        },
        body.shape());
    if (body.offset() != Vec2{}) j["offset"] = {body.offset().x, body.offset().y};
    return j;
}

std::string body_hash(const Body& body) {
    const std::string text = body_to_json(body).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace covario
