#include "vtrack/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <set>
#include <sstream>
#include <type_traits>
#include <utility>

#include <json.hpp>

#include "vtrack/error.hpp"

namespace vtrack {

using nlohmann::json;

void write_atomic(const std::filesystem::path& path, std::string_view bytes) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(ErrorKind::IoFailure, "write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::IoFailure, "cannot move " + tmp.string() + " to " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MissingFile, path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(e.what());
    }
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) parse_fail(where + ": expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
        if (!allowed.contains(k)) parse_fail(where + ": unknown key '" + k + "'");
}

template <class T>
void read_opt(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (!obj.at(key).is_number_unsigned()) parse_fail(where + "." + key + ": expected a non-negative integer");
    }
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        parse_fail(where + "." + key + ": wrong type");
    }
}

template <class T>
T read_req(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) parse_fail(where + ": missing '" + key + "'");
    T out{};
    read_opt(obj, key, out, where);
    return out;
}

Vec2 read_vec(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        parse_fail(where + ": expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

json vec_json(const Vec2& v) { return json::array({v.x, v.y}); }

NoiseConfig parse_noise(const json& j) {
    allow_keys(j, "noise", {"sigma_theta", "sigma_a", "sigma_w", "step"});
    NoiseConfig n;
    read_opt(j, "sigma_theta", n.sigma_theta, "noise");
    read_opt(j, "sigma_a", n.sigma_a, "noise");
    read_opt(j, "sigma_w", n.sigma_w, "noise");
    read_opt(j, "step", n.step, "noise");
    return n;
}

TensorConfig parse_tensor(const json& j) {
    allow_keys(j, "tensor", {"grad_sigma", "window_sigma", "aniso_eps"});
    TensorConfig t;
    read_opt(j, "grad_sigma", t.grad_sigma, "tensor");
    read_opt(j, "window_sigma", t.window_sigma, "tensor");
    read_opt(j, "aniso_eps", t.aniso_eps, "tensor");
    return t;
}

WidthProfile parse_width(const json& j, const std::string& where) {
    WidthProfile w;
    if (j.is_number()) {
        w.start = w.end = w.peak = j.get<double>();
        return w;
    }
    allow_keys(j, where, {"type", "value", "start", "end", "base", "peak", "centre", "spread"});
    const auto type = read_req<std::string>(j, "type", where);
    if (type == "constant") {
        w.start = read_req<double>(j, "value", where);
    } else if (type == "taper") {
        w.kind = WidthProfile::Kind::taper;
        w.start = read_req<double>(j, "start", where);
        w.end = read_req<double>(j, "end", where);
    } else if (type == "bump") {
        w.kind = WidthProfile::Kind::bump;
        w.start = read_req<double>(j, "base", where);
        w.peak = read_req<double>(j, "peak", where);
        read_opt(j, "centre", w.centre, where);
        read_opt(j, "spread", w.spread, where);
    } else {
        parse_fail(where + ": unknown width type '" + type + "'");
    }
    return w;
}

json width_json(const WidthProfile& w) {
    switch (w.kind) {
        case WidthProfile::Kind::constant: return {{"type", "constant"}, {"value", w.start}};
        case WidthProfile::Kind::taper: return {{"type", "taper"}, {"start", w.start}, {"end", w.end}};
        case WidthProfile::Kind::bump:
            return {{"type", "bump"}, {"base", w.start}, {"peak", w.peak}, {"centre", w.centre}, {"spread", w.spread}};
    }
    return {};
}

CenterlineSpec parse_centerline(const json& j, const std::string& where) {
    allow_keys(j, where, {"type", "points", "start", "axis", "length", "amplitude", "period", "phase"});
    const auto type = read_req<std::string>(j, "type", where);
    if (type == "polyline") {
        Polyline line;
        if (!j.contains("points") || !j["points"].is_array()) parse_fail(where + ": polyline needs 'points'");
        for (const auto& p : j["points"]) line.points.push_back(read_vec(p, where + ".points"));
        return line;
    }
    if (type == "sine") {
        SineCurve c;
        if (!j.contains("start")) parse_fail(where + ": sine needs 'start'");
        c.start = read_vec(j["start"], where + ".start");
        if (j.contains("axis")) c.axis = read_vec(j["axis"], where + ".axis");
        c.length = read_req<double>(j, "length", where);
        read_opt(j, "amplitude", c.amplitude, where);
        read_opt(j, "period", c.period, where);
        read_opt(j, "phase", c.phase, where);
        return c;
    }
    parse_fail(where + ": unknown centerline type '" + type + "'");
}

json centerline_json(const CenterlineSpec& c) {
    if (const auto* line = std::get_if<Polyline>(&c)) {
        json pts = json::array();
        for (const auto& p : line->points) pts.push_back(vec_json(p));
        return {{"type", "polyline"}, {"points", pts}};
    }
    const auto& s = std::get<SineCurve>(c);
    return {{"type", "sine"},          {"start", vec_json(s.start)}, {"axis", vec_json(s.axis)},
            {"length", s.length},      {"amplitude", s.amplitude},   {"period", s.period},
            {"phase", s.phase}};
}

PhantomSpec phantom_from_json(const json& j, std::uint64_t* seed) {
    allow_keys(j, "phantom", {"width", "height", "seed", "vessels", "ridge_sigma_c", "ridge_sigma_e",
                              "interior_softness", "noise_level", "reflex_depth", "reflex_sigma"});
    PhantomSpec spec;
    spec.width = read_req<std::size_t>(j, "width", "phantom");
    spec.height = read_req<std::size_t>(j, "height", "phantom");
    read_opt(j, "ridge_sigma_c", spec.ridge_sigma_c, "phantom");
    read_opt(j, "ridge_sigma_e", spec.ridge_sigma_e, "phantom");
    read_opt(j, "interior_softness", spec.interior_softness, "phantom");
    read_opt(j, "noise_level", spec.noise_level, "phantom");
    read_opt(j, "reflex_depth", spec.reflex_depth, "phantom");
    read_opt(j, "reflex_sigma", spec.reflex_sigma, "phantom");
    if (seed) {
        *seed = 0;
        read_opt(j, "seed", *seed, "phantom");
    }
    if (!j.contains("vessels") || !j["vessels"].is_array()) parse_fail("phantom: missing 'vessels' array");
    for (std::size_t i = 0; i < j["vessels"].size(); ++i) {
        const auto& v = j["vessels"][i];
        const std::string where = "vessels[" + std::to_string(i) + "]";
        allow_keys(v, where, {"centerline", "width"});
        if (!v.contains("centerline") || !v.contains("width")) parse_fail(where + ": needs 'centerline' and 'width'");
        spec.vessels.push_back({parse_centerline(v["centerline"], where + ".centerline"),
                                parse_width(v["width"], where + ".width")});
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        parse_fail(e.what());
    }
    return spec;
}

json phantom_json(const PhantomSpec& spec, std::uint64_t seed) {
    json vessels = json::array();
    for (const auto& v : spec.vessels)
        vessels.push_back({{"centerline", centerline_json(v.centerline)}, {"width", width_json(v.width)}});
    return {{"width", spec.width},
            {"height", spec.height},
            {"seed", seed},
            {"ridge_sigma_c", spec.ridge_sigma_c},
            {"ridge_sigma_e", spec.ridge_sigma_e},
            {"interior_softness", spec.interior_softness},
            {"noise_level", spec.noise_level},
            {"reflex_depth", spec.reflex_depth},
            {"reflex_sigma", spec.reflex_sigma},
            {"vessels", vessels}};
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
            field.remove_suffix(1);
        out.push_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

bool blank(std::string_view line) { return line.find_first_not_of(" \t") == std::string_view::npos; }

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
    const json j = parse_json(json_text);
    allow_keys(j, "config", {"master_seed", "tracker", "phantom"});
    RunConfig cfg;
    cfg.tracker.master_seed = read_req<std::uint64_t>(j, "master_seed", "config");
    if (j.contains("tracker")) {
        const auto& t = j["tracker"];
        allow_keys(t, "tracker", {"n_particles", "stop_pc_threshold", "stop_patience", "max_steps", "use_ps", "noise",
                                  "tensor"});
        read_opt(t, "n_particles", cfg.tracker.n_particles, "tracker");
        read_opt(t, "stop_pc_threshold", cfg.tracker.stop_pc_threshold, "tracker");
        read_opt(t, "stop_patience", cfg.tracker.stop_patience, "tracker");
        read_opt(t, "max_steps", cfg.tracker.max_steps, "tracker");
        read_opt(t, "use_ps", cfg.tracker.use_ps, "tracker");
        if (t.contains("noise")) cfg.tracker.noise = parse_noise(t["noise"]);
        if (t.contains("tensor")) cfg.tracker.tensor = parse_tensor(t["tensor"]);
    }
    if (j.contains("phantom")) {
        std::uint64_t seed = 0;
        cfg.phantom = phantom_from_json(j["phantom"], &seed);
        cfg.phantom_seed = seed;
    }
    try {
        cfg.tracker.validate();
    } catch (const Error& e) {
        parse_fail(e.what());
    }
    return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
    const auto& t = cfg.tracker;
    json j = {{"master_seed", t.master_seed},
              {"tracker",
               {{"n_particles", t.n_particles},
                {"stop_pc_threshold", t.stop_pc_threshold},
                {"stop_patience", t.stop_patience},
                {"max_steps", t.max_steps},
                {"use_ps", t.use_ps},
                {"noise",
                 {{"sigma_theta", t.noise.sigma_theta},
                  {"sigma_a", t.noise.sigma_a},
                  {"sigma_w", t.noise.sigma_w},
                  {"step", t.noise.step}}},
                {"tensor",
                 {{"grad_sigma", t.tensor.grad_sigma},
                  {"window_sigma", t.tensor.window_sigma},
                  {"aniso_eps", t.tensor.aniso_eps}}}}}};
    if (cfg.phantom) j["phantom"] = phantom_json(*cfg.phantom, cfg.phantom_seed.value_or(0));
    return j.dump(2) + "\n";
}

PhantomSpec parse_phantom_spec(std::string_view json_text, std::uint64_t* seed) {
    return phantom_from_json(parse_json(json_text), seed);
}

std::string phantom_spec_to_json(const PhantomSpec& spec, std::uint64_t seed) {
    return phantom_json(spec, seed).dump(2) + "\n";
}

std::string track_to_json(const SegmentTrack& t) {
    json steps = json::array();
    for (const auto& s : t.track.steps) {
        steps.push_back({{"k", s.k},
                         {"anchor", vec_json(s.estimate.anchor)},
                         {"dir", vec_json(s.estimate.dir)},
                         {"wl", s.estimate.wl},
                         {"wr", s.estimate.wr},
                         {"el", vec_json(s.el)},
                         {"er", vec_json(s.er)}});
    }
    const json j = {{"segment_id", t.segment_id},
                    {"termination", std::string(to_string(t.track.termination))},
                    {"steps", steps}};
    return j.dump(1) + "\n";
}

SegmentTrack parse_track_json(std::string_view json_text) {
    const json j = parse_json(json_text);
    allow_keys(j, "track", {"segment_id", "termination", "steps"});
    SegmentTrack out;
    out.segment_id = read_req<std::uint64_t>(j, "segment_id", "track");
    out.track.termination = termination_from_string(read_req<std::string>(j, "termination", "track"));
    if (!j.contains("steps") || !j["steps"].is_array()) parse_fail("track: missing 'steps' array");
    for (const auto& s : j["steps"]) {
        allow_keys(s, "step", {"k", "anchor", "dir", "wl", "wr", "el", "er"});
        TrackStep step;
        step.k = read_req<std::size_t>(s, "k", "step");
        step.estimate.anchor = read_vec(s.value("anchor", json()), "step.anchor");
        step.estimate.dir = read_vec(s.value("dir", json()), "step.dir");
        step.estimate.wl = read_req<double>(s, "wl", "step");
        step.estimate.wr = read_req<double>(s, "wr", "step");
        step.el = read_vec(s.value("el", json()), "step.el");
        step.er = read_vec(s.value("er", json()), "step.er");
        out.track.steps.push_back(step);
    }
    return out;
}

std::string track_file_name(std::uint64_t segment_id) { return "track_" + std::to_string(segment_id) + ".json"; }

std::string truth_to_csv(const GroundTruth& truth) {
    std::string out = "segment_id,arc_length,cx,cy,tx,ty,elx,ely,erx,ery,width\n";
    char buf[512];
    for (std::size_t v = 0; v < truth.vessels.size(); ++v) {
        for (const auto& s : truth.vessels[v].samples) {
            std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", v, s.arc_length,
                          s.center.x, s.center.y, s.tangent.x, s.tangent.y, s.left.x, s.left.y, s.right.x, s.right.y,
                          s.width);
            out += buf;
        }
    }
    return out;
}

const VesselTruth* TruthTable::find(std::uint64_t id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return &vessels[i];
    return nullptr;
}

TruthTable parse_truth_csv(std::string_view text) {
    TruthTable table;
    const auto lines = lines_of(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (blank(lines[ln])) continue;
        const auto f = split_fields(lines[ln]);
        std::uint64_t id = 0;
        if (ln == 0 && !parse_number(f[0], id)) continue;  // header
        double v[10];
        bool ok = f.size() == 11 && parse_number(f[0], id);
        for (std::size_t i = 0; ok && i < 10; ++i) ok = parse_number(f[i + 1], v[i]);
        if (!ok) parse_fail("truth line " + std::to_string(ln + 1) + ": expected 11 numeric fields");
        const TruthSample s{v[0], {v[1], v[2]}, {v[3], v[4]}, {v[5], v[6]}, {v[7], v[8]}, v[9]};
        if (table.ids.empty() || table.ids.back() != id) {
            if (table.find(id)) parse_fail("truth: segment " + std::to_string(id) + " is not contiguous");
            table.ids.push_back(id);
            table.vessels.emplace_back();
        }
        table.vessels.back().samples.push_back(s);
    }
    return table;
}

std::vector<SeedRow> parse_seeds_csv(std::string_view text) {
    std::vector<SeedRow> rows;
    const auto lines = lines_of(text);
    bool first = true;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (blank(lines[ln]) || lines[ln].front() == '#') continue;
        const auto f = split_fields(lines[ln]);
        SeedRow r;
        // A header is only recognised on the first content line and must be all text.
        if (std::exchange(first, false) &&
            std::none_of(f.begin(), f.end(), [](const auto& x) { double d; return parse_number(x, d); }))
            continue;
        double v[8];
        bool ok = (f.size() == 7 || f.size() == 9) && parse_number(f[0], r.segment_id);
        for (std::size_t i = 1; ok && i < f.size(); ++i) ok = parse_number(f[i], v[i - 1]);
        if (!ok) parse_fail("seeds line " + std::to_string(ln + 1) + ": expected segment_id,c1x,c1y,c2x,c2y,wl,wr[,ex,ey]");
        r.c1 = {v[0], v[1]};
        r.c2 = {v[2], v[3]};
        r.wl = v[4];
        r.wr = v[5];
        if (f.size() == 9) r.endpoint = Vec2{v[6], v[7]};
        rows.push_back(r);
    }
    return rows;
}

std::string seeds_to_csv(const std::vector<SeedRow>& rows) {
    std::string out = "segment_id,c1x,c1y,c2x,c2y,wl,wr,ex,ey\n";
    char buf[512];
    for (const auto& r : rows) {
        if (r.endpoint)
            std::snprintf(buf, sizeof buf, "%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                          static_cast<unsigned long long>(r.segment_id), r.c1.x, r.c1.y, r.c2.x, r.c2.y, r.wl, r.wr,
                          r.endpoint->x, r.endpoint->y);
        else
            std::snprintf(buf, sizeof buf, "%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                          static_cast<unsigned long long>(r.segment_id), r.c1.x, r.c1.y, r.c2.x, r.c2.y, r.wl, r.wr);
        out += buf;
    }
    return out;
}

std::vector<SeedRow> seeds_from_truth(const GroundTruth& truth, double step) {
    std::vector<SeedRow> rows;
    for (std::size_t v = 0; v < truth.vessels.size(); ++v) {
        const auto& s = truth.vessels[v].samples;
        if (s.size() < 2) continue;
        std::size_t ahead = 1;
        while (ahead + 1 < s.size() && s[ahead].arc_length < step) ++ahead;
        const double half = 0.5 * s.front().width;
        rows.push_back({v, s.front().center, s[ahead].center, half, half, s.back().center});
    }
    return rows;
}

}  // namespace vtrack
