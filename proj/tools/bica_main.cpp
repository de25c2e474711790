#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bica/csv.hpp"
#include "bica/driver.hpp"
#include "bica/metrics.hpp"
#include "bica/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitAlgorithmError = 3;

// FNV-1a over the file bytes, hex encoded.
std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "unreadable";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

json config_to_json(const bica::BicaConfig& c) {
    return {{"grid_size", c.grid_size},   {"df", c.df},
            {"boost_iters", c.boost_iters}, {"maxit", c.maxit},
            {"seed", c.seed},             {"tol", c.tol},
            {"sweeps_per_iter", c.sweeps_per_iter}, {"threads", c.threads}};
}

void write_manifest(const fs::path& dir, const json& manifest) {
    const fs::path tmp = dir / "manifest.json.tmp";
    const fs::path final_path = dir / "manifest.json";
    {
        std::ofstream out(tmp);
        out << manifest.dump(2) << '\n';
        if (!out) throw bica::Error("cannot write manifest");
    }
    fs::rename(tmp, final_path);
}

int default_threads() {
    if (const char* env = std::getenv("BICA_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 1;
}

std::vector<double> parse_angles(const std::string& spec) {
    // start:stop:step, inclusive stop
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw bica::InvalidData("angles must be start:stop:step");
    const double start = std::stod(spec.substr(0, c1));
    const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (step <= 0.0) throw bica::InvalidData("angle step must be positive");
    std::vector<double> angles;
    for (double a = start; a <= stop + 1e-9; a += step) angles.push_back(a);
    return angles;
}

struct CommonOpts {
    bica::BicaConfig config;
    std::string input;
    std::string out = ".";
    bool header = false;
};

void add_config_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--grid", opts.config.grid_size, "grid size L");
    cmd->add_option("--df", opts.config.df, "weak-learner degrees of freedom");
    cmd->add_option("--boost-iters", opts.config.boost_iters,
                    "boosting iterations M");
    cmd->add_option("--maxit", opts.config.maxit, "maximum outer iterations");
    cmd->add_option("--tol", opts.config.tol, "early-stop tolerance");
    cmd->add_option("--seed", opts.config.seed, "random seed");
    cmd->add_option("--sweeps", opts.config.sweeps_per_iter,
                    "fixed-point sweeps per outer iteration");
    cmd->add_option("--threads", opts.config.threads,
                    "density-fit threads (default from BICA_THREADS)");
}

int run_separate(const CommonOpts& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const bica::Matrix data = bica::read_csv_matrix(opts.input, opts.header);

    bica::SeparationResult result = bica::separate(data, opts.config);

    fs::create_directories(opts.out);
    const fs::path dir(opts.out);
    bica::write_csv_matrix((dir / "W.csv").string(), result.W);
    bica::write_csv_matrix((dir / "sources.csv").string(), result.sources());
    bica::Matrix ll(result.loglik_per_iter.size(), 1);
    for (size_t i = 0; i < result.loglik_per_iter.size(); ++i)
        ll(static_cast<Eigen::Index>(i), 0) = result.loglik_per_iter[i];
    bica::write_csv_matrix((dir / "loglik.csv").string(), ll);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest = {
        {"command", "separate"},
        {"config", config_to_json(opts.config)},
        {"inputs", {{opts.input, file_digest(opts.input)}}},
        {"seed", opts.config.seed},
        {"artifacts", {"W.csv", "sources.csv", "loglik.csv"}},
        {"iterations_run", result.iterations_run},
        {"wall_seconds", seconds},
    };
    write_manifest(dir, manifest);
    return 0;
}

int run_scan(const CommonOpts& opts, const std::string& angles_spec) {
    const auto t0 = std::chrono::steady_clock::now();
    const bica::Matrix data = bica::read_csv_matrix(opts.input, opts.header);
    if (data.rows() != 2) {
        std::cerr << "bica scan: input must have exactly 2 rows\n";
        return kExitInputError;
    }
    const std::vector<double> angles = parse_angles(angles_spec);
    const auto curve = bica::likelihood_scan(data, angles, opts.config);

    fs::create_directories(opts.out);
    const fs::path dir(opts.out);
    bica::Matrix out(curve.size(), 2);
    for (size_t i = 0; i < curve.size(); ++i) {
        out(static_cast<Eigen::Index>(i), 0) = curve[i].first;
        out(static_cast<Eigen::Index>(i), 1) = curve[i].second;
    }
    bica::write_csv_matrix((dir / "scan.csv").string(), out,
                           {"angle_deg", "total_loglik"});

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest = {
        {"command", "scan"},
        {"config", config_to_json(opts.config)},
        {"inputs", {{opts.input, file_digest(opts.input)}}},
        {"seed", opts.config.seed},
        {"angles", angles_spec},
        {"artifacts", {"scan.csv"}},
        {"wall_seconds", seconds},
    };
    write_manifest(dir, manifest);
    return 0;
}

int run_eval(const std::string& west, const std::string& wtrue,
             const std::string& strue, const std::string& sest, bool header) {
    json report;
    if (!west.empty() || !wtrue.empty()) {
        if (west.empty() || wtrue.empty()) {
            std::cerr << "bica eval: --west and --wtrue must be given together\n";
            return kExitInputError;
        }
        const bica::Matrix W = bica::read_csv_matrix(west, header);
        const bica::Matrix W0 = bica::read_csv_matrix(wtrue, header);
        if (W.rows() != W0.rows() || W.cols() != W0.cols() || W.rows() != W.cols()) {
            std::cerr << "bica eval: W/W0 shape mismatch\n";
            return kExitInputError;
        }
        report["amari_x100"] = 100.0 * bica::amari(W, W0);
    }
    if (!strue.empty() || !sest.empty()) {
        if (strue.empty() || sest.empty()) {
            std::cerr << "bica eval: --strue and --sest must be given together\n";
            return kExitInputError;
        }
        const bica::Matrix S = bica::read_csv_matrix(strue, header);
        const bica::Matrix Y = bica::read_csv_matrix(sest, header);
        if (S.rows() != Y.rows() || S.cols() != Y.cols()) {
            std::cerr << "bica eval: source shape mismatch\n";
            return kExitInputError;
        }
        const bica::SirReport sir = bica::sir(S, Y);
        report["mean_sir_db"] = sir.mean_sir_db;
        report["per_component_sir"] = sir.per_component_db;
    }
    if (report.empty()) {
        std::cerr << "bica eval: provide --west/--wtrue and/or --strue/--sest\n";
        return kExitInputError;
    }
    std::cout << report.dump(2) << '\n';
    return 0;
}

int run_synth(const std::string& kinds, int n, std::uint64_t seed,
              const std::string& mix_kind, const std::string& out) {
    std::vector<bica::SourceSpec> specs;
    std::stringstream ss(kinds);
    std::string token;
    while (std::getline(ss, token, ','))
        specs.push_back(bica::SourceSpec::parse(token));
    if (specs.empty()) throw bica::InvalidSpec("no source kinds given");

    const int m = static_cast<int>(specs.size());
    bica::Matrix A;
    if (mix_kind == "random") {
        A = bica::random_mixing(m, seed);
    } else if (mix_kind == "identity") {
        A = bica::Matrix::Identity(m, m);
    } else if (mix_kind == "bench3x3") {
        if (m != 3) throw bica::InvalidSpec("bench3x3 mixing needs 3 sources");
        A = bica::bench3x3_mixing();
    } else {
        throw bica::InvalidSpec("unknown --mix: " + mix_kind);
    }

    const bica::Matrix sources = bica::gen_sources(specs, n, seed);
    const bica::Matrix mixed = bica::mix(sources, A);

    fs::create_directories(out);
    const fs::path dir(out);
    bica::write_csv_matrix((dir / "sources.csv").string(), sources);
    bica::write_csv_matrix((dir / "mixed.csv").string(), mixed);
    bica::write_csv_matrix((dir / "A.csv").string(), A);

    json manifest = {
        {"command", "synth"},
        {"kinds", kinds},
        {"n", n},
        {"seed", seed},
        {"mix", mix_kind},
        {"artifacts", {"sources.csv", "mixed.csv", "A.csv"}},
    };
    write_manifest(dir, manifest);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BoostingICA: blind source separation via boosted "
                 "nonparametric density estimation"};
    app.require_subcommand(1);

    CommonOpts sep_opts, scan_opts;
    sep_opts.config.threads = scan_opts.config.threads = default_threads();

    auto* sep = app.add_subcommand("separate", "estimate the unmixing matrix");
    sep->add_option("--input", sep_opts.input, "mixed-signal CSV (rows = channels)")
        ->required();
    sep->add_option("--out", sep_opts.out, "output directory");
    sep->add_flag("--header", sep_opts.header, "input has a header row");
    add_config_flags(sep, sep_opts);

    std::string angles_spec = "0:180:1";
    auto* scan = app.add_subcommand("scan", "2-D rotation-angle likelihood scan");
    scan->add_option("--input", scan_opts.input, "2-row mixed-signal CSV")->required();
    scan->add_option("--out", scan_opts.out, "output directory");
    scan->add_option("--angles", angles_spec, "start:stop:step in degrees");
    scan->add_flag("--header", scan_opts.header, "input has a header row");
    add_config_flags(scan, scan_opts);

    std::string west, wtrue, strue, sest;
    bool eval_header = false;
    auto* eval = app.add_subcommand("eval", "separation quality metrics");
    eval->add_option("--west", west, "estimated unmixing matrix CSV");
    eval->add_option("--wtrue", wtrue, "reference unmixing matrix CSV");
    eval->add_option("--strue", strue, "true sources CSV");
    eval->add_option("--sest", sest, "estimated sources CSV");
    eval->add_flag("--header", eval_header, "inputs have header rows");

    std::string kinds = "uniform,uniform";
    std::string mix_kind = "random";
    std::string synth_out = ".";
    int n = 10000;
    std::uint64_t synth_seed = 0;
    auto* synth = app.add_subcommand("synth", "generate synthetic mixtures");
    synth->add_option("--kinds", kinds,
                      "comma-separated: uniform,gmm,laplace,student_t,two_point");
    synth->add_option("--n", n, "samples per source");
    synth->add_option("--seed", synth_seed, "random seed");
    synth->add_option("--mix", mix_kind, "random | identity | bench3x3");
    synth->add_option("--out", synth_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sep->parsed()) return run_separate(sep_opts);
        if (scan->parsed()) return run_scan(scan_opts, angles_spec);
        if (eval->parsed())
            return run_eval(west, wtrue, strue, sest, eval_header);
        if (synth->parsed())
            return run_synth(kinds, n, synth_seed, mix_kind, synth_out);
    } catch (const bica::CsvParseError& e) {
        std::cerr << "bica: input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const bica::InvalidSpec& e) {
        std::cerr << "bica: input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const bica::InvalidData& e) {
        std::cerr << "bica: input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const bica::InvalidDimension& e) {
        std::cerr << "bica: input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const bica::Error& e) {
        std::cerr << "bica: algorithm error: " << e.what() << '\n';
        return kExitAlgorithmError;
    } catch (const std::exception& e) {
        std::cerr << "bica: error: " << e.what() << '\n';
        return kExitAlgorithmError;
    }
    return 0;
}
