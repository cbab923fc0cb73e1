#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dctmark/dctmark.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace dctmark;

#ifndef DCTMARK_DATA_DIR
#define DCTMARK_DATA_DIR "data"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotAuthentic = 1;
constexpr int kExitError = 2;

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string compact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Rows go to --report: CSV (header + fixed columns) for *.csv, JSON lines otherwise.
class Report {
public:
    void add(json row) { rows_.push_back(std::move(row)); }

    void write(const std::string& path) const {
        if (path.empty() || rows_.empty()) return;
        std::ofstream out(path);
        if (!out) throw ImageIoError(path, "cannot open report for writing");
        if (fs::path(path).extension() == ".csv") {
            write_csv(out, rows_);
        } else {
            for (const auto& r : rows_) out << r.dump() << '\n';
        }
    }

    static void write_csv(std::ostream& out, const std::vector<json>& rows) {
        if (rows.empty()) return;
        bool first = true;
        for (const auto& [k, v] : rows.front().items()) {
            out << (first ? "" : ",") << k;
            first = false;
        }
        out << '\n';
        for (const auto& r : rows) {
            first = true;
            for (const auto& [k, v] : r.items()) {
                out << (first ? "" : ",") << csv_cell(v);
                first = false;
            }
            out << '\n';
        }
    }

private:
    static std::string csv_cell(const json& v) {
        std::string s = v.is_string() ? v.get<std::string>() : v.is_null() ? "" : v.dump();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + '"';
    }

    std::vector<json> rows_;
};

json psnr_json(const Psnr& p) { return p.is_infinite() ? json("inf") : json(std::stod(fixed(p.db(), 4))); }

BinaryWatermark load_binary_watermark(const std::string& path) { return BinaryWatermark::from_image(load_image(path)); }

std::vector<AttackSpec> load_suite(const std::string& path) {
    if (path.empty()) return default_attack_suite();
    std::ifstream in(path);
    if (!in) throw ImageIoError(path, "unreadable: no such file");
    auto suite = parse_attack_suite(in);
    if (suite.empty()) throw ConfigError("attack suite '" + path + "' has no entries");
    return suite;
}

void print_matrix(const std::vector<AttackResult>& rows) {
    std::printf("%-30s %-8s %-9s %s\n", "attack", "match", "reliable", "verdict");
    for (const auto& r : rows)
        std::printf("%-30s %-8s %-9zu %s\n", r.attack.c_str(), fixed(r.match_fraction, 4).c_str(), r.reliable_count,
                    std::string(to_string(r.verdict)).c_str());
}

json matrix_row(const std::string& image, const AttackResult& r) {
    return json{{"image", image},
                {"attack", r.attack},
                {"params", r.params},
                {"match_fraction", std::stod(fixed(r.match_fraction, 6))},
                {"reliable_count", r.reliable_count},
                {"verdict", to_string(r.verdict)}};
}

struct Options {
    std::string report;

    std::string cover, watermark, out, suspect, original, key, in, a, b, suite, csv;
    std::string anchor = "middle-center";
    int width = 0, height = 0, intensity = 10;
    FactorConfig factors;
    EdgeConfig edges;
    AlphaConfig alphas;
    AuthConfig auth;
    int bit_depth = 8;

    std::string kind;
    AttackParams attack;
    std::string corner = "top-left";

    std::string images = "lena,f16,mandril,pepper";
    std::string data_dir = DCTMARK_DATA_DIR;
    std::string logo, bench_watermark, out_dir = ".";
};

void add_factor_flags(CLI::App* sub, Options& o) {
    sub->add_option("--alpha-min", o.factors.alpha_min, "Lower scaling factor")->capture_default_str();
    sub->add_option("--alpha-max", o.factors.alpha_max, "Upper scaling factor")->capture_default_str();
    sub->add_option("--beta-min", o.factors.beta_min, "Lower embedding factor")->capture_default_str();
    sub->add_option("--beta-max", o.factors.beta_max, "Upper embedding factor")->capture_default_str();
    sub->add_option("--edge-threshold", o.edges.magnitude_threshold, "Sobel magnitude for an edge pixel")
        ->capture_default_str();
    sub->add_option("--edge-fraction", o.edges.edge_fraction, "Edge-pixel share that makes an edge block")
        ->capture_default_str();
}

void add_alpha_flags(CLI::App* sub, Options& o) {
    sub->add_option("--alpha-dc", o.alphas.alpha_dc, "Strength at (0,0)")->capture_default_str();
    sub->add_option("--alpha-ac", o.alphas.alpha_ac, "Strength at (0,1), (1,0), (1,1)")->capture_default_str();
    sub->add_option("--min-change", o.alphas.min_change, "Smallest coefficient change a position may carry")
        ->capture_default_str();
}

void add_auth_flags(CLI::App* sub, Options& o) {
    sub->add_option("--threshold", o.auth.threshold, "Match fraction needed for authentic")->capture_default_str();
    sub->add_option("--min-reliable", o.auth.min_reliable, "Reliable positions needed for a verdict")
        ->capture_default_str();
}

void add_attack_flags(CLI::App* sub, Options& o) {
    sub->add_option("--quality", o.attack.quality, "JPEG quality")->capture_default_str();
    sub->add_option("--levels", o.attack.levels, "Gray levels")->capture_default_str();
    sub->add_option("--radius", o.attack.radius, "Blur sigma in pixels")->capture_default_str();
    sub->add_option("--fraction", o.attack.fraction, "Crop share of the area")->capture_default_str();
    sub->add_option("--corner", o.corner, "Crop corner")->capture_default_str();
    sub->add_option("--window", o.attack.window, "Median window")->capture_default_str();
    sub->add_option("--displacement", o.attack.displacement, "Jitter offset in pixels")->capture_default_str();
    sub->add_option("--seed", o.attack.seed, "Jitter seed")->capture_default_str();
}

int run_embed_visible(const Options& o, Report& report) {
    const ImageBuffer cover = load_image(o.cover);
    const ImageBuffer wm = load_image(o.watermark);
    const auto anchor = parse_anchor(o.anchor);
    if (!anchor) throw ConfigError("unknown anchor '" + o.anchor + "'");
    PlacementSpec spec{*anchor, o.width > 0 ? o.width : wm.width(), o.height > 0 ? o.height : wm.height(),
                       o.intensity};
    const ImageBuffer out = embed_visible(cover, wm, spec, o.factors, o.edges);
    save_image(out, o.out);
    const Psnr p = psnr(cover, out);
    std::printf("wrote %s (%s, PSNR %s dB)\n", o.out.c_str(), std::string(to_string(plan_components(cover, wm))).c_str(),
                p.to_string().c_str());
    report.add(json{{"operation", "embed-visible"},
                    {"cover", o.cover},
                    {"out", o.out},
                    {"anchor", to_string(*anchor)},
                    {"intensity", o.intensity},
                    {"psnr_db", psnr_json(p)}});
    return kExitOk;
}

int run_embed_invisible(const Options& o, Report& report) {
    const ImageBuffer cover = load_image(o.cover);
    const WatermarkKey key(o.key);
    const ImageBuffer out = embed_invisible(cover, load_binary_watermark(o.watermark), key, o.alphas);
    save_image(out, o.out);
    const Psnr p = psnr(cover, out);
    const double bias = mean_signed_difference(cover, out);
    std::printf("wrote %s (PSNR %s dB, mean difference %s)\n", o.out.c_str(), p.to_string().c_str(),
                fixed(bias, 4).c_str());
    report.add(json{{"operation", "embed-invisible"},
                    {"cover", o.cover},
                    {"out", o.out},
                    {"psnr_db", psnr_json(p)},
                    {"mean_difference", std::stod(fixed(bias, 6))}});
    return kExitOk;
}

int run_authenticate(const Options& o, Report& report) {
    const AuthDecision d = extract_watermark(load_image(o.suspect), load_image(o.original),
                                             load_binary_watermark(o.watermark), WatermarkKey(o.key), o.auth, o.alphas);
    std::printf("match_fraction %s\nreliable_count %zu\nverdict %s\n", fixed(d.match_fraction, 4).c_str(),
                d.reliable_count, std::string(to_string(d.verdict)).c_str());
    report.add(json{{"operation", "authenticate"},
                    {"suspect", o.suspect},
                    {"match_fraction", std::stod(fixed(d.match_fraction, 6))},
                    {"reliable_count", d.reliable_count},
                    {"threshold", d.threshold},
                    {"verdict", to_string(d.verdict)}});
    return d.verdict == Verdict::authentic ? kExitOk : kExitNotAuthentic;
}

int run_metrics(const Options& o, Report& report) {
    const QualityReport q = quality(load_image(o.a), load_image(o.b), o.bit_depth);
    std::printf("MSE %s, PSNR %s\n", compact(q.mse).c_str(),
                q.psnr.is_infinite() ? "inf" : (q.psnr.to_string() + " dB").c_str());
    report.add(json{{"operation", "metrics"}, {"a", o.a}, {"b", o.b}, {"mse", q.mse}, {"psnr_db", psnr_json(q.psnr)}});
    return kExitOk;
}

AttackSpec attack_from_flags(const Options& o) {
    AttackParams p = o.attack;
    const auto corner = parse_corner(o.corner);
    if (!corner) throw ConfigError("unknown corner '" + o.corner + "'");
    p.corner = *corner;
    AttackSpec spec;
    std::istringstream is(o.kind);
    std::string part;
    while (std::getline(is, part, '+')) {
        const auto kind = parse_attack_kind(part);
        if (!kind) throw ConfigError("unknown attack kind '" + part + "'");
        spec.steps.push_back({*kind, p});
    }
    if (spec.steps.empty()) throw ConfigError("attack kind is empty");
    spec.name = describe(spec);
    return spec;
}

int run_attack(const Options& o, Report& report) {
    const AttackSpec spec = attack_from_flags(o);
    const ImageBuffer in = load_image(o.in);
    const ImageBuffer out = attack(in, spec);
    save_image(out, o.out);
    const Psnr p = psnr(in, out);
    std::printf("wrote %s (%s, PSNR %s dB)\n", o.out.c_str(), spec.name.c_str(), p.to_string().c_str());
    report.add(json{{"operation", "attack"}, {"in", o.in}, {"out", o.out}, {"params", spec.name}, {"psnr_db", psnr_json(p)}});
    return kExitOk;
}

int run_attack_matrix_cmd(const Options& o, Report& report) {
    const auto rows = run_attack_matrix(load_image(o.suspect), load_image(o.original), load_binary_watermark(o.watermark),
                                        WatermarkKey(o.key), load_suite(o.suite), o.auth, o.alphas);
    print_matrix(rows);
    std::vector<json> csv_rows;
    for (const auto& r : rows) {
        csv_rows.push_back(matrix_row(o.suspect, r));
        report.add(csv_rows.back());
    }
    std::ofstream out(o.csv);
    if (!out) throw ImageIoError(o.csv, "cannot open for writing");
    Report::write_csv(out, csv_rows);
    std::printf("wrote %s\n", o.csv.c_str());
    return kExitOk;
}

std::string resolve_image(const std::string& token, const std::string& data_dir) {
    if (fs::exists(token)) return token;
    const fs::path candidate = fs::path(data_dir) / "benchmarks" / (token + ".png");
    if (fs::exists(candidate)) return candidate.string();
    throw ImageIoError(token, "benchmark image not found (looked in " + (fs::path(data_dir) / "benchmarks").string() + ")");
}

int run_bench(const Options& o, Report& report) {
    const std::string logo_path = o.logo.empty() ? (fs::path(o.data_dir) / "logo_100x100.png").string() : o.logo;
    const std::string wm_path =
        o.bench_watermark.empty() ? (fs::path(o.data_dir) / "binary_watermark.png").string() : o.bench_watermark;
    const ImageBuffer logo = load_image(logo_path);
    const BinaryWatermark wm = load_binary_watermark(wm_path);
    const WatermarkKey key(o.key.empty() ? std::string("benchmark passphrase") : o.key);
    const auto suite = load_suite(o.suite);

    std::vector<std::string> names;
    std::istringstream is(o.images);
    for (std::string t; std::getline(is, t, ',');)
        if (!t.empty()) names.push_back(t);
    if (names.empty()) throw ConfigError("no benchmark images given");

    std::vector<json> rows;
    const auto row = [&](const std::string& image, const std::string& op, const std::string& params, json psnr_db,
                         json match, json verdict) {
        rows.push_back(json{{"image", image},
                            {"operation", op},
                            {"params", params},
                            {"psnr_db", std::move(psnr_db)},
                            {"match_fraction", std::move(match)},
                            {"verdict", std::move(verdict)}});
        report.add(rows.back());
    };

    std::printf("%-10s %-16s %-48s %-9s %-8s %s\n", "image", "operation", "params", "psnr_db", "match", "verdict");
    const auto echo = [&] {
        const auto& r = rows.back();
        const auto str = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.is_null() ? "-" : v.dump(); };
        std::printf("%-10s %-16s %-48s %-9s %-8s %s\n", str(r["image"]).c_str(), str(r["operation"]).c_str(),
                    str(r["params"]).c_str(), str(r["psnr_db"]).c_str(), str(r["match_fraction"]).c_str(),
                    str(r["verdict"]).c_str());
    };

    for (const auto& token : names) {
        const std::string path = resolve_image(token, o.data_dir);
        const std::string image = fs::path(path).stem().string();
        const ImageBuffer cover = load_image(path);

        for (int intensity : {3, 10, 20}) {
            const PlacementSpec spec{Anchor::middle_center, logo.width(), logo.height(), intensity};
            const ImageBuffer marked = embed_visible(cover, logo, spec, o.factors, o.edges);
            row(image, "visible", "intensity=" + std::to_string(intensity) + " anchor=middle-center", psnr_json(psnr(cover, marked)),
                nullptr, nullptr);
            echo();
        }

        const ImageBuffer marked = embed_invisible(cover, wm, key, o.alphas);
        const AuthDecision clean = extract_watermark(marked, cover, wm, key, o.auth, o.alphas);
        row(image, "invisible",
            "alpha_dc=" + compact(o.alphas.alpha_dc) + " alpha_ac=" + compact(o.alphas.alpha_ac) +
                " mean_difference=" + fixed(mean_signed_difference(cover, marked), 4),
            psnr_json(psnr(cover, marked)), std::stod(fixed(clean.match_fraction, 6)), to_string(clean.verdict));
        echo();

        for (const auto& r : run_attack_matrix(marked, cover, wm, key, suite, o.auth, o.alphas)) {
            row(image, "attack:" + r.attack, r.params, nullptr, std::stod(fixed(r.match_fraction, 6)),
                to_string(r.verdict));
            echo();
        }
    }

    fs::create_directories(o.out_dir);
    const std::string csv_path = (fs::path(o.out_dir) / "bench_report.csv").string();
    std::ofstream out(csv_path);
    if (!out) throw ImageIoError(csv_path, "cannot open for writing");
    Report::write_csv(out, rows);
    std::printf("wrote %s\n", csv_path.c_str());
    return kExitOk;
}

// key=value lines from a config file, '#' comments and blank lines skipped.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ImageIoError(path, "unreadable: no such file");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        if (key.starts_with("--")) key.erase(0, 2);
        out.emplace_back(key, value);
    }
    return out;
}

// Config values are placed before the command-line ones, so with take-last
// semantics any flag given explicitly wins.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App& app) {
    std::string config;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config = args[++i];
        } else if (args[i].starts_with("--config=")) {
            config = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config.empty()) return rest;

    std::size_t sub_at = rest.size();
    CLI::App* sub = nullptr;
    for (std::size_t i = 0; i < rest.size(); ++i)
        if (auto* s = app.get_subcommand_no_throw(rest[i])) {
            sub = s;
            sub_at = i;
            break;
        }
    if (!sub) return rest;

    std::vector<std::string> injected;
    for (const auto& [key, value] : read_config(config)) {
        if (key == "report") {
            injected.push_back("--report=" + value);
            continue;
        }
        if (!sub->get_option_no_throw("--" + key))
            throw ConfigError("config key '" + key + "' is not an option of " + sub->get_name());
        injected.push_back("--" + key + "=" + value);
    }
    // --report belongs to the top level and must precede the subcommand name.
    const auto split = rest.begin() + static_cast<std::ptrdiff_t>(sub_at);
    std::vector<std::string> out(rest.begin(), split);
    std::vector<std::string> sub_args;
    for (auto& a : injected) (a.starts_with("--report=") ? out : sub_args).push_back(a);
    out.push_back(*split);
    out.insert(out.end(), sub_args.begin(), sub_args.end());
    out.insert(out.end(), split + 1, rest.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block-DCT visible and invisible image watermarking"};
    app.name("dctmark");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    Options o;
    app.add_option("--report", o.report, "Write a machine-readable report (.csv, otherwise JSON lines)");
    app.add_option("--config", "key=value file pre-setting any option; flags override it");

    auto* ev = app.add_subcommand("embed-visible", "Fuse a visible watermark into a cover image");
    ev->add_option("--cover", o.cover, "Cover image")->required();
    ev->add_option("--watermark", o.watermark, "Watermark image")->required();
    ev->add_option("--out", o.out, "Output PNG")->required();
    ev->add_option("--anchor", o.anchor, "Placement: top-left ... bottom-right")->capture_default_str();
    ev->add_option("--width", o.width, "Watermark width in pixels (default: its own)");
    ev->add_option("--height", o.height, "Watermark height in pixels (default: its own)");
    ev->add_option("--intensity", o.intensity, "Strength, 1-100")->capture_default_str();
    add_factor_flags(ev, o);

    auto* ei = app.add_subcommand("embed-invisible", "Embed an encrypted binary watermark");
    ei->add_option("--cover", o.cover, "Cover image")->required();
    ei->add_option("--watermark", o.watermark, "Binary watermark image (thresholded at 128)")->required();
    ei->add_option("--key", o.key, "Passphrase, 6-56 characters")->required();
    ei->add_option("--out", o.out, "Output PNG")->required();
    add_alpha_flags(ei, o);

    auto* au = app.add_subcommand("authenticate", "Check a suspect image against the original");
    au->add_option("--suspect", o.suspect, "Suspect image")->required();
    au->add_option("--original", o.original, "Unwatermarked original")->required();
    au->add_option("--watermark", o.watermark, "Expected binary watermark")->required();
    au->add_option("--key", o.key, "Passphrase")->required();
    add_alpha_flags(au, o);
    add_auth_flags(au, o);

    auto* me = app.add_subcommand("metrics", "MSE and PSNR between two images");
    me->add_option("--a", o.a, "First image")->required();
    me->add_option("--b", o.b, "Second image")->required();
    me->add_option("--bit-depth", o.bit_depth, "Bits per sample")->capture_default_str();

    auto* at = app.add_subcommand("attack", "Apply one attack, or several joined with '+'");
    at->add_option("--in", o.in, "Input image")->required();
    at->add_option("--out", o.out, "Output PNG")->required();
    at->add_option("--kind", o.kind, "jpeg, gray-quantize, blur, crop, median, jitter")->required();
    add_attack_flags(at, o);

    auto* am = app.add_subcommand("attack-matrix", "Authenticate a watermarked image after each attack of a suite");
    am->add_option("--watermarked", o.suspect, "Watermarked image")->required();
    am->add_option("--original", o.original, "Unwatermarked original")->required();
    am->add_option("--watermark", o.watermark, "Expected binary watermark")->required();
    am->add_option("--key", o.key, "Passphrase")->required();
    am->add_option("--suite", o.suite, "Attack suite file (default: built-in seven-attack suite)");
    am->add_option("--csv", o.csv, "CSV output")->capture_default_str();
    o.csv = "attack_matrix.csv";
    add_alpha_flags(am, o);
    add_auth_flags(am, o);

    auto* be = app.add_subcommand("bench", "Run the benchmark grid and write bench_report.csv");
    be->add_option("--images", o.images, "Comma-separated names or paths")->capture_default_str();
    be->add_option("--data-dir", o.data_dir, "Directory holding benchmarks/ and the default watermarks")
        ->capture_default_str();
    be->add_option("--logo", o.logo, "Visible watermark (default: logo_100x100.png)");
    be->add_option("--binary-watermark", o.bench_watermark, "Invisible watermark (default: binary_watermark.png)");
    be->add_option("--key", o.key, "Passphrase");
    be->add_option("--suite", o.suite, "Attack suite file");
    be->add_option("--out-dir", o.out_dir, "Where bench_report.csv goes")->capture_default_str();
    add_factor_flags(be, o);
    add_alpha_flags(be, o);
    add_auth_flags(be, o);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config(args, app);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }

    try {
        Report report;
        int rc = kExitOk;
        if (ev->parsed()) rc = run_embed_visible(o, report);
        else if (ei->parsed()) rc = run_embed_invisible(o, report);
        else if (au->parsed()) rc = run_authenticate(o, report);
        else if (me->parsed()) rc = run_metrics(o, report);
        else if (at->parsed()) rc = run_attack(o, report);
        else if (am->parsed()) rc = run_attack_matrix_cmd(o, report);
        else if (be->parsed()) rc = run_bench(o, report);
        report.write(o.report);
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
