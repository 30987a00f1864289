#include "sqg/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>

namespace sqg {

namespace {

void put_u32le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64le(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32le(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

double get_f64le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

} // namespace

void write_checkpoint(const std::filesystem::path& path, const RealField& field, double t) {
    field.grid.validate();
    std::string buf;
    buf.reserve(22 + 8 * field.samples.size());
    buf += "SQGF";
    buf.push_back(static_cast<char>(1)); // version
    buf.push_back(static_cast<char>(field.grid.n));
    for (int d = 0; d < field.grid.n; ++d) put_u32le(buf, static_cast<std::uint32_t>(field.grid.N));
    put_f64le(buf, field.grid.alpha);
    put_f64le(buf, t);
    for (double v : field.samples) put_f64le(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw validation_error("write_checkpoint: cannot open " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw validation_error("write_checkpoint: write failed for " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path, double L) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("read_checkpoint: cannot open " + path.string());
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());

    if (buf.size() < 6 || std::memcmp(buf.data(), "SQGF", 4) != 0)
        throw validation_error("read_checkpoint: bad magic in " + path.string());
    const unsigned version = p[4];
    if (version != 1)
        throw validation_error("read_checkpoint: unsupported version " + std::to_string(version));
    const int ndim = p[5];
    if (ndim < 1 || ndim > 3) throw validation_error("read_checkpoint: bad ndim");
    std::size_t off = 6;
    if (buf.size() < off + 4 * static_cast<std::size_t>(ndim) + 16)
        throw validation_error("read_checkpoint: truncated header");

    Checkpoint cp;
    cp.grid.n = ndim;
    cp.grid.L = L;
    std::size_t total = 1;
    int N0 = 0;
    for (int d = 0; d < ndim; ++d) {
        const auto Nd = static_cast<int>(get_u32le(p + off));
        off += 4;
        if (d == 0)
            N0 = Nd;
        else if (Nd != N0)
            throw validation_error("read_checkpoint: anisotropic sizes unsupported");
        total *= static_cast<std::size_t>(Nd);
    }
    cp.grid.N = N0;
    cp.grid.alpha = get_f64le(p + off);
    off += 8;
    cp.t = get_f64le(p + off);
    off += 8;

    if (buf.size() != off + 8 * total)
        throw validation_error("read_checkpoint: payload length mismatch in " + path.string());
    cp.samples.resize(total);
    for (std::size_t i = 0; i < total; ++i) cp.samples[i] = get_f64le(p + off + 8 * i);
    cp.grid.validate();
    return cp;
}

void write_norms_csv(const std::filesystem::path& path, const std::vector<NormSample>& norms) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc); // binary: force LF
    if (!out) throw validation_error("write_norms_csv: cannot open " + path.string());
    out << "t,l2,sup,h_alpha_half\n";
    char row[256];
    for (const auto& r : norms) {
        std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g,%.17g\n", r.t, r.l2, r.sup,
                      r.h_alpha_half);
        out << row;
    }
}

nlohmann::json make_report(const std::string& kind, nlohmann::json params,
                           nlohmann::json results) {
    nlohmann::json j;
    j["schema"] = "sqg-report/1";
    j["kind"] = kind;
    j["params"] = std::move(params);
    j["results"] = std::move(results);
    return j;
}

void write_report(const std::filesystem::path& path, const nlohmann::json& report) {
    validate_report(report);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw validation_error("write_report: cannot open " + path.string());
    out << report.dump(2) << "\n";
}

void validate_report(const nlohmann::json& report) {
    if (!report.is_object()) throw validation_error("report: not an object");
    for (const char* key : {"schema", "kind", "params", "results"})
        if (!report.contains(key))
            throw validation_error(std::string("report: missing key '") + key + "'");
    if (report["schema"] != "sqg-report/1")
        throw validation_error("report: unknown schema " + report["schema"].dump());
    if (!report["kind"].is_string()) throw validation_error("report: kind must be a string");
    if (!report["params"].is_object() || !report["results"].is_object())
        throw validation_error("report: params/results must be objects");
    for (auto it = report.begin(); it != report.end(); ++it) {
        const std::string& k = it.key();
        if (k != "schema" && k != "kind" && k != "params" && k != "results")
            throw validation_error("report: unknown top-level key '" + k + "'");
    }
}

namespace {

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw validation_error("config: unknown key '" + it.key() + "' in " + where);
}

double need_number(const nlohmann::json& obj, const std::string& key, double fallback,
                   bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw validation_error("config: missing key '" + key + "'");
        return fallback;
    }
    if (!obj[key].is_number()) throw validation_error("config: '" + key + "' must be a number");
    return obj[key].get<double>();
}

} // namespace

RunConfigFile parse_run_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw validation_error("config: document must be an object");
    reject_unknown(doc, {"schema", "grid", "dt", "t_end", "snapshot_dt", "snapshot_times",
                         "scheme", "flow_scale", "seed", "ic", "diagnostics", "output"},
                   "top level");
    if (!doc.contains("schema") || doc["schema"] != "sqg-run/1")
        throw validation_error("config: schema must be \"sqg-run/1\"");

    RunConfigFile cfg;
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        reject_unknown(g, {"n", "N", "L", "alpha"}, "grid");
        cfg.solver.grid.n = static_cast<int>(need_number(g, "n", 2));
        cfg.solver.grid.N = static_cast<int>(need_number(g, "N", 64));
        cfg.solver.grid.L = need_number(g, "L", kTwoPi);
        cfg.solver.grid.alpha = need_number(g, "alpha", 1.0);
    }
    cfg.solver.dt = need_number(doc, "dt", 1e-3);
    cfg.solver.t_end = need_number(doc, "t_end", 1.0);
    cfg.solver.snapshot_dt = need_number(doc, "snapshot_dt", 0.05);
    if (doc.contains("snapshot_times")) {
        if (!doc["snapshot_times"].is_array())
            throw validation_error("config: snapshot_times must be an array");
        for (const auto& v : doc["snapshot_times"])
            cfg.solver.snapshot_times.push_back(v.get<double>());
    }
    if (doc.contains("scheme")) cfg.solver.scheme = doc["scheme"].get<std::string>();
    cfg.solver.flow_scale = need_number(doc, "flow_scale", 1.0);
    cfg.solver.seed = static_cast<std::uint64_t>(need_number(doc, "seed", 1));

    if (doc.contains("ic")) {
        const auto& ic = doc["ic"];
        reject_unknown(ic, {"preset", "normalize", "normalize_value", "params"}, "ic");
        if (ic.contains("preset")) cfg.solver.ic.preset = ic["preset"].get<std::string>();
        if (ic.contains("normalize")) cfg.solver.ic.normalize = ic["normalize"].get<std::string>();
        cfg.solver.ic.normalize_value = need_number(ic, "normalize_value", 1.0);
        if (ic.contains("params")) {
            if (!ic["params"].is_object())
                throw validation_error("config: ic.params must be an object");
            for (auto it = ic["params"].begin(); it != ic["params"].end(); ++it)
                cfg.solver.ic.params[it.key()] = it.value().get<double>();
        }
    }

    if (doc.contains("diagnostics")) {
        const auto& d = doc["diagnostics"];
        reject_unknown(d, {"c0", "a_frac", "shrink_rho", "level_fractions", "z_min", "z_max",
                           "z_count"},
                       "diagnostics");
        cfg.c0 = need_number(d, "c0", cfg.c0);
        cfg.a_frac = need_number(d, "a_frac", cfg.a_frac);
        cfg.shrink_rho = need_number(d, "shrink_rho", cfg.shrink_rho);
        cfg.z_min = need_number(d, "z_min", cfg.z_min);
        cfg.z_max = need_number(d, "z_max", cfg.z_max);
        cfg.z_count = static_cast<int>(need_number(d, "z_count", cfg.z_count));
        if (d.contains("level_fractions")) {
            if (!d["level_fractions"].is_array())
                throw validation_error("config: level_fractions must be an array");
            cfg.level_fractions.clear();
            for (const auto& v : d["level_fractions"])
                cfg.level_fractions.push_back(v.get<double>());
        }
    }

    if (doc.contains("output")) {
        const auto& o = doc["output"];
        reject_unknown(o, {"dir", "prefix"}, "output");
        if (o.contains("dir")) cfg.output_dir = o["dir"].get<std::string>();
        if (o.contains("prefix")) cfg.prefix = o["prefix"].get<std::string>();
    }

    // environment override for the output directory only
    if (const char* env = std::getenv("SQG_OUTPUT_DIR")) cfg.output_dir = env;

    cfg.solver.validate();
    return cfg;
}

RunConfigFile load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("config: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("config: JSON parse error in " + path.string() + ": " + e.what());
    }
    return parse_run_config(doc);
}

} // namespace sqg
