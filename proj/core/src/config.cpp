#include "ccs/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ccs {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double to_number(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw ConfigError("config key '" + key + "' has a non-numeric value '" + value + "'");
    return v;
}

int to_int(const std::string& key, const std::string& value) {
    const double v = to_number(key, value);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("config key '" + key + "' must be an integer");
    return i;
}

} // namespace

std::vector<double> parse_alpha_list(const std::string& text) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t next;
        if (text.compare(pos, 9, "logspace(") == 0) {
            const size_t close = text.find(')', pos);
            if (close == std::string::npos)
                throw ConfigError("alpha_list: unterminated logspace(...)");
            const std::string body = text.substr(pos + 9, close - pos - 9);
            std::stringstream ss(body);
            std::string t;
            std::vector<double> args;
            while (std::getline(ss, t, ','))
                args.push_back(to_number("alpha_list", trim(t)));
            if (args.size() != 3 || args[0] <= 0.0 || args[1] <= args[0] || args[2] < 2)
                throw ConfigError("alpha_list: logspace needs (lo, hi, count) with "
                                  "0 < lo < hi, count >= 2");
            const int count = static_cast<int>(args[2]);
            for (int k = 0; k < count; ++k)
                out.push_back(args[0] * std::pow(args[1] / args[0],
                                                 static_cast<double>(k) / (count - 1)));
            next = close + 1;
            if (next < text.size() && text[next] == ',') ++next;
        } else {
            const size_t comma = text.find(',', pos);
            const std::string tok =
                trim(text.substr(pos, comma == std::string::npos ? comma : comma - pos));
            if (!tok.empty()) out.push_back(to_number("alpha_list", tok));
            next = comma == std::string::npos ? text.size() : comma + 1;
        }
        pos = next;
    }
    return out;
}

RunConfig parse_config_text(std::string_view text) {
    std::map<std::string, std::string> kv;
    size_t line_no = 0;
    std::stringstream stream{std::string(text)};
    std::string line;
    while (std::getline(stream, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              " is not of the form key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              " has an empty key or value");
        if (kv.count(key)) throw ConfigError("config key '" + key + "' given twice");
        kv[key] = value;
    }

    RunConfig cfg;
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto require = [&](const char* key) {
        auto v = take(key);
        if (!v) throw ConfigError(std::string("missing required config key '") + key + "'");
        return *v;
    };

    const std::string domain = require("domain");
    if (domain == "interval") {
        cfg.geometry = GeometrySpec::make_interval(to_number("a", require("a")),
                                                   to_number("b", require("b")));
    } else if (domain == "rectangle") {
        cfg.geometry = GeometrySpec::make_rectangle(to_number("Lx", require("Lx")),
                                                    to_number("Ly", require("Ly")));
    } else if (domain == "radial") {
        const int d = to_int("d", require("d"));
        const double R = to_number("R", require("R"));
        double r0 = 0.0;
        if (auto v = take("r0")) r0 = to_number("r0", *v);
        cfg.geometry = GeometrySpec::make_radial(d, R, r0);
    } else {
        throw ConfigError("domain must be interval, rectangle, or radial");
    }

    cfg.n = to_int("n", require("n"));
    if (cfg.n < 3) throw ConfigError("n must be at least 3");
    cfg.chi = to_number("chi", require("chi"));
    if (!(cfg.chi > 0.0)) throw ConfigError("chi must be positive");

    if (auto v = take("vstar")) cfg.vstar = to_number("vstar", *v);
    if (auto v = take("vstar_left")) cfg.vstar_left = to_number("vstar_left", *v);
    if (auto v = take("vstar_right")) cfg.vstar_right = to_number("vstar_right", *v);
    if (auto v = take("vstar_bottom")) cfg.vstar_bottom = to_number("vstar_bottom", *v);
    if (auto v = take("vstar_top")) cfg.vstar_top = to_number("vstar_top", *v);

    if (auto v = take("mass")) cfg.mass_target = to_number("mass", *v);
    if (auto v = take("alpha")) cfg.alpha = to_number("alpha", *v);
    if (auto v = take("alpha_list")) cfg.alpha_list = parse_alpha_list(*v);

    if (auto v = take("tol")) cfg.solver.update_tol = to_number("tol", *v);
    if (auto v = take("residual_tol")) cfg.solver.residual_scale = to_number("residual_tol", *v);
    if (auto v = take("mass_tol")) cfg.mass_params.mass_tol = to_number("mass_tol", *v);
    if (auto v = take("alpha_cap")) cfg.mass_params.alpha_cap = to_number("alpha_cap", *v);
    if (auto v = take("dt")) cfg.dt = to_number("dt", *v);
    if (auto v = take("T")) cfg.T = to_number("T", *v);
    if (auto v = take("out_dir")) cfg.out_dir = *v;
    if (auto v = take("fields_in")) cfg.fields_in = *v;
    if (auto v = take("validate_init")) cfg.validate_init = *v;
    if (auto v = take("stall_tol")) cfg.stall_tol = to_number("stall_tol", *v);
    if (auto v = take("record_stride")) cfg.record_stride = to_int("record_stride", *v);

    if (!kv.empty()) throw ConfigError("unknown config key '" + kv.begin()->first + "'");

    if (!(cfg.solver.update_tol > 0.0) || !(cfg.solver.residual_scale > 0.0))
        throw ConfigError("tolerances must be positive");
    if (!(cfg.mass_params.mass_tol > 0.0) || !(cfg.mass_params.alpha_cap > 0.0))
        throw ConfigError("mass_tol and alpha_cap must be positive");
    if (cfg.dt < 0.0) throw ConfigError("dt must be nonnegative");
    if (!(cfg.T > 0.0)) throw ConfigError("T must be positive");
    if (cfg.record_stride < 1) throw ConfigError("record_stride must be >= 1");
    if (cfg.validate_init != "constant" && cfg.validate_init != "steady")
        throw ConfigError("validate_init must be 'constant' or 'steady'");

    // trace completeness per geometry
    const bool per_side = cfg.vstar_left || cfg.vstar_right || cfg.vstar_bottom || cfg.vstar_top;
    switch (cfg.geometry.kind) {
    case GeometryKind::interval:
        if (cfg.vstar_bottom || cfg.vstar_top)
            throw ConfigError("interval trace uses vstar or vstar_left/vstar_right");
        if (!cfg.vstar && !(cfg.vstar_left && cfg.vstar_right))
            throw ConfigError("interval needs vstar or both vstar_left and vstar_right");
        break;
    case GeometryKind::rectangle:
        if (!cfg.vstar && !(cfg.vstar_left && cfg.vstar_right && cfg.vstar_bottom && cfg.vstar_top))
            throw ConfigError("rectangle needs vstar or all four side traces");
        break;
    case GeometryKind::radial:
        if (per_side) throw ConfigError("radial geometry requires a single constant vstar");
        if (!cfg.vstar) throw ConfigError("radial geometry needs vstar");
        break;
    }
    if (cfg.vstar && per_side)
        throw ConfigError("give either a constant vstar or per-side values, not both");
    auto positive = [](const std::optional<double>& v) { return !v || *v > 0.0; };
    if (!positive(cfg.vstar) || !positive(cfg.vstar_left) || !positive(cfg.vstar_right) ||
        !positive(cfg.vstar_bottom) || !positive(cfg.vstar_top))
        throw ConfigError("boundary trace values must be positive");
    if (cfg.mass_target && !(*cfg.mass_target > 0.0))
        throw ConfigError("mass must be positive");
    if (cfg.alpha && !(*cfg.alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void RunConfig::validate_solve() const {
    if (mass_target.has_value() == alpha.has_value())
        throw ConfigError("ambiguous parameterization: give exactly one of mass or alpha");
}

void RunConfig::validate_sweep() const {
    if (alpha_list.empty()) throw ConfigError("sweep needs a nonempty alpha_list");
    for (size_t i = 1; i < alpha_list.size(); ++i)
        if (!(alpha_list[i] > alpha_list[i - 1]))
            throw ConfigError("alpha_list must be strictly increasing");
    if (alpha_list.front() < 0.0) throw ConfigError("alpha_list values must be >= 0");
}

void RunConfig::validate_validate() const {
    if (fields_in.empty() && !mass_target && !alpha)
        throw ConfigError("validate needs fields_in or an in-run solve via mass or alpha");
    if (mass_target && alpha)
        throw ConfigError("ambiguous parameterization: give exactly one of mass or alpha");
}

BoundaryValues RunConfig::boundary_trace(const Grid& grid) const {
    switch (geometry.kind) {
    case GeometryKind::interval:
        if (vstar) return BoundaryValues::constant(grid, *vstar);
        return BoundaryValues::interval_ends(grid, *vstar_left, *vstar_right);
    case GeometryKind::rectangle:
        if (vstar) return BoundaryValues::constant(grid, *vstar);
        return BoundaryValues::rectangle_sides(grid, *vstar_left, *vstar_right,
                                               *vstar_bottom, *vstar_top);
    case GeometryKind::radial:
        return BoundaryValues::constant(grid, *vstar);
    }
    throw ConfigError("unreachable geometry kind");
}

} // namespace ccs
