// Command-line front end: simulate heavy-tailed factor models, select radial
// exceedances, cluster their angular parts, and run replicated benchmarks.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "xsc/cluster.hpp"
#include "xsc/csv_io.hpp"
#include "xsc/errors.hpp"
#include "xsc/experiments.hpp"
#include "xsc/extremal.hpp"
#include "xsc/measure.hpp"
#include "xsc/variates.hpp"
#include "xsc/version.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct Options {
    std::uint64_t seed = 0;
    std::string model = "lfm";
    std::string input; // csv path when model is csv
    double alpha = 1.0;
    double sigma = 0.0;
    std::string A_text;
    std::vector<double> coeffs{1.0, 0.5, -0.6, 1.5};
    std::size_t embed_dim = 2;
    std::string law = "frechet";
    std::string tail_case = "nonnegative";
    std::uint64_t n = 25000;
    double beta = -1.0;
    std::uint64_t nn = 0;
    double tau = 5.0;
    double s = 1.0;
    std::uint64_t m = 0;
    std::string mode = "symmetric";
    bool rank_transform = false;
    std::uint64_t reps = 50;
    std::uint64_t workers = 0;
    std::string out = ".";
    bool debug_graph = false;
    bool export_extremes = false;

    // benchmark grid (comma lists)
    std::vector<std::uint64_t> grid_n{1000, 5000, 25000, 125000};
    std::vector<std::uint64_t> grid_nn{100, 200, 400, 800};
    std::vector<double> grid_tau{3, 5, 7, 9};
    std::vector<double> grid_sigma{0.0};
};

Eigen::MatrixXd parse_matrix(const std::string& text) {
    // rows separated by ';', entries by ','
    std::vector<std::vector<double>> rows;
    std::stringstream row_stream(text);
    std::string row;
    while (std::getline(row_stream, row, ';')) {
        std::vector<double> entries;
        std::stringstream entry_stream(row);
        std::string entry;
        while (std::getline(entry_stream, entry, ',')) {
            if (entry.find_first_not_of(" \t") == std::string::npos) continue;
            entries.push_back(std::stod(entry));
        }
        if (!entries.empty()) rows.push_back(entries);
    }
    if (rows.empty()) throw xsc::InvalidParameter("empty matrix literal");
    Eigen::MatrixXd A(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size())
            throw xsc::InvalidParameter("ragged matrix literal");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return A;
}

// The four-dimensional two-factor demo model used throughout the docs.
Eigen::MatrixXd demo_loadings() {
    Eigen::MatrixXd A(4, 2);
    A << 0.1, 0.9, 0.2, 0.8, 0.3, 0.7, 0.4, 0.6;
    return A;
}

xsc::FactorLaw parse_law(const std::string& law) {
    if (law == "frechet") return xsc::FactorLaw::frechet;
    if (law == "pareto") return xsc::FactorLaw::pareto;
    if (law == "stable") return xsc::FactorLaw::symmetric_stable;
    throw xsc::InvalidParameter("unknown factor law: " + law);
}

xsc::TailCase parse_case(const std::string& c) {
    if (c == "nonnegative") return xsc::TailCase::nonnegative;
    if (c == "symmetric") return xsc::TailCase::symmetric;
    throw xsc::InvalidParameter("unknown tail case: " + c);
}

xsc::EdgeRule parse_mode(const std::string& mode) {
    if (mode == "symmetric") return xsc::EdgeRule::knn_symmetric;
    if (mode == "mutual") return xsc::EdgeRule::knn_mutual;
    throw xsc::InvalidParameter("unknown mode: " + mode);
}

bool model_is_csv(const Options& o) {
    return o.model == "csv" || o.model.find(".csv") != std::string::npos ||
           o.model.find('/') != std::string::npos;
}

std::string csv_path(const Options& o) {
    if (o.model == "csv") {
        if (o.input.empty()) throw xsc::InvalidParameter("--model csv requires --input PATH");
        return o.input;
    }
    return o.model;
}

Eigen::MatrixXd loadings_from(const Options& o) {
    return o.A_text.empty() ? demo_loadings() : parse_matrix(o.A_text);
}

xsc::FactorModelSpec lfm_spec(const Options& o) {
    xsc::FactorModelSpec spec;
    spec.loadings = loadings_from(o);
    spec.alpha = o.alpha;
    spec.sigma = o.model == "lfm-noisy" ? o.sigma : 0.0;
    spec.factor_law = parse_law(o.law);
    spec.tail_case = parse_case(o.tail_case);
    return spec;
}

xsc::SampleMatrix load_or_simulate(const Options& o, const xsc::RandomStream& root) {
    if (model_is_csv(o)) {
        xsc::SampleMatrix sample = xsc::read_sample_csv(csv_path(o));
        if (o.rank_transform) sample = xsc::marginal_rank_transform(sample);
        return sample;
    }
    xsc::RandomStream sim = root.substream("simulate");
    if (o.model == "ma") {
        Eigen::VectorXd coeffs =
            Eigen::Map<const Eigen::VectorXd>(o.coeffs.data(),
                                              static_cast<Eigen::Index>(o.coeffs.size()));
        return xsc::simulate_ma_embedding(coeffs, o.alpha, o.n, o.embed_dim, sim);
    }
    if (o.model == "lfm" || o.model == "lfm-noisy")
        return xsc::simulate_lfm(lfm_spec(o), o.n, sim);
    throw xsc::InvalidParameter("unknown model: " + o.model);
}

xsc::SelectionRule selection_rule(const Options& o) {
    if (o.nn > 0) return xsc::SelectionRule::top_count(o.nn);
    if (o.beta >= 0.0) return xsc::SelectionRule::quantile(o.beta);
    return xsc::SelectionRule::quantile(0.9);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

/// key=value configuration file ('#' starts a comment). Values become the
/// option defaults; command-line flags still win because they are parsed
/// afterwards over the same storage.
void apply_config_file(const std::string& path, Options& o) {
    std::ifstream in(path);
    if (!in) throw xsc::IoError("cannot open config file", path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::size_t eq = line.find('=');
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw xsc::ParseError("expected key=value in config", line_no);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "seed") o.seed = std::stoull(value);
            else if (key == "model") o.model = value;
            else if (key == "input") o.input = value;
            else if (key == "alpha") o.alpha = std::stod(value);
            else if (key == "sigma") o.sigma = std::stod(value);
            else if (key == "A") o.A_text = value;
            else if (key == "coeffs") o.coeffs = parse_list(value);
            else if (key == "embed-dim") o.embed_dim = std::stoull(value);
            else if (key == "law") o.law = value;
            else if (key == "case") o.tail_case = value;
            else if (key == "n") o.n = std::stoull(value);
            else if (key == "beta") o.beta = std::stod(value);
            else if (key == "nn") o.nn = std::stoull(value);
            else if (key == "tau") o.tau = std::stod(value);
            else if (key == "s") o.s = std::stod(value);
            else if (key == "m") o.m = std::stoull(value);
            else if (key == "mode") o.mode = value;
            else if (key == "rank-transform") o.rank_transform = value == "1" || value == "true";
            else if (key == "reps") o.reps = std::stoull(value);
            else if (key == "workers") o.workers = std::stoull(value);
            else if (key == "out") o.out = value;
            else if (key == "grid-tau") o.grid_tau = parse_list(value);
            else if (key == "grid-sigma") o.grid_sigma = parse_list(value);
            else if (key == "grid-n" || key == "grid-nn") {
                auto& target = key == "grid-n" ? o.grid_n : o.grid_nn;
                target.clear();
                for (double v : parse_list(value))
                    target.push_back(static_cast<std::uint64_t>(v));
            } else {
                throw xsc::ParseError("unknown config key '" + key + "'", line_no);
            }
        } catch (const xsc::ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw xsc::ParseError("bad value for '" + key + "'", line_no);
        }
    }
}

/// Sidecar with the resolved configuration next to every output file.
void write_meta(const fs::path& csv_file, const std::string& command,
                const std::map<std::string, std::string>& config) {
    std::string canonical;
    for (const auto& [k, v] : config) canonical += k + "=" + v + "\n";
    fs::path path = csv_file;
    path += ".meta";
    std::ofstream out(path);
    if (!out) throw xsc::IoError("cannot open for writing", path.string());
    out << "tool=xsc " << xsc::version << "\n";
    out << "command=" << command << "\n";
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical)));
    out << "config_hash=" << hash << "\n";
    out << canonical;
    if (!out) throw xsc::IoError("write failed", path.string());
}

std::map<std::string, std::string> resolved_config(const Options& o) {
    std::map<std::string, std::string> c;
    auto num = [](auto v) { return std::to_string(v); };
    c["seed"] = num(o.seed);
    c["model"] = o.model;
    if (!o.input.empty()) c["input"] = o.input;
    c["alpha"] = num(o.alpha);
    c["sigma"] = num(o.sigma);
    c["law"] = o.law;
    c["case"] = o.tail_case;
    c["n"] = num(o.n);
    if (o.nn > 0)
        c["nn"] = num(o.nn);
    else
        c["beta"] = num(o.beta >= 0.0 ? o.beta : 0.9);
    c["tau"] = num(o.tau);
    c["s"] = num(o.s);
    c["m"] = num(o.m);
    c["mode"] = o.mode;
    c["rank_transform"] = o.rank_transform ? "1" : "0";
    c["reps"] = num(o.reps);
    c["kmeans"] = "lloyd+kmeans++ restarts=10";
    if (!o.A_text.empty()) c["A"] = o.A_text;
    return c;
}

fs::path out_file(const Options& o, const std::string& name) {
    fs::create_directories(o.out);
    return fs::path(o.out) / name;
}

/// All numeric fields checked against the preconditions of the operations
/// they feed, before any simulation or file work starts.
void validate_options(const Options& o, bool needs_tau, bool needs_m) {
    if (!(o.alpha > 0.0)) throw xsc::InvalidParameter("--alpha must be > 0");
    if (o.sigma < 0.0) throw xsc::InvalidParameter("--sigma must be >= 0");
    if (!(o.s > 0.0)) throw xsc::InvalidParameter("--s must be > 0");
    if (o.n < 2) throw xsc::InvalidParameter("--n must be >= 2");
    if (o.beta >= 1.0) throw xsc::InvalidParameter("--beta must be < 1");
    if (o.nn > 0 && o.nn >= o.n && !model_is_csv(o))
        throw xsc::InvalidParameter("--nn must be below the sample size");
    if (needs_tau && !(o.tau > 1.0)) throw xsc::InvalidParameter("--tau must be > 1");
    if (needs_m && o.m < 1)
        throw xsc::InvalidParameter("cluster requires --m (pick it from the screeplot)");
    if (o.reps < 1) throw xsc::InvalidParameter("--reps must be >= 1");
    parse_mode(o.mode);
    parse_law(o.law);
    parse_case(o.tail_case);
}

int cmd_simulate(const Options& o) {
    validate_options(o, false, false);
    if (model_is_csv(o)) throw xsc::InvalidParameter("simulate needs a generative model");
    const xsc::RandomStream root(o.seed);
    const xsc::SampleMatrix sample = load_or_simulate(o, root);
    const fs::path path = out_file(o, "sample.csv");
    xsc::write_sample_csv(path.string(), sample);
    write_meta(path, "simulate", resolved_config(o));
    std::cout << "wrote " << path.string() << " (" << sample.rows() << " x " << sample.cols()
              << ")\n";
    return 0;
}

int cmd_cluster(const Options& o) {
    validate_options(o, true, true);
    const xsc::RandomStream root(o.seed);
    const xsc::SampleMatrix sample = load_or_simulate(o, root);
    const xsc::ExtremalSample extremes = xsc::select_extremes(sample, selection_rule(o));
    const std::size_t k_n = xsc::default_neighbor_count(extremes.count(), o.tau);
    if (k_n >= extremes.count())
        throw xsc::InvalidParameter("k_n >= extreme count; lower tau or raise the sample");
    if (o.m > extremes.count()) throw xsc::InvalidParameter("m exceeds the extreme count");

    xsc::ClusterOptions copts;
    copts.kernel_scale = o.s;
    copts.mode = parse_mode(o.mode);
    xsc::RandomStream stream = root.substream("cluster");
    const xsc::ClusteringResult result =
        xsc::spectral_cluster(extremes, o.m, k_n, stream, copts);

    const auto config = resolved_config(o);
    const fs::path labels = out_file(o, "labels.csv");
    xsc::write_labels_csv(labels.string(), extremes, result);
    write_meta(labels, "cluster", config);
    const fs::path atoms = out_file(o, "atoms.csv");
    xsc::write_atoms_csv(atoms.string(), result);
    write_meta(atoms, "cluster", config);
    const fs::path scree = out_file(o, "scree.csv");
    xsc::write_scree_csv(scree.string(), xsc::screeplot(extremes, o.s));
    write_meta(scree, "cluster", config);
    if (o.export_extremes) {
        const fs::path ext_path = out_file(o, "extremes.csv");
        xsc::write_extremal_csv(ext_path.string(), extremes);
        write_meta(ext_path, "cluster", config);
    }

    if (o.debug_graph) {
        const xsc::EdgeSet edges = xsc::knn_edges(extremes.angles, k_n, copts.mode);
        const xsc::WeightedGraph g = xsc::kernel_weights(extremes.angles, edges, o.s);
        xsc::write_edges_csv(out_file(o, "edges.csv").string(), g);
        std::vector<Eigen::Index> kept;
        const xsc::WeightedGraph sub = xsc::strip_nodes(g, xsc::isolated_nodes(g), kept);
        xsc::write_matrix_csv(out_file(o, "laplacian.csv").string(),
                              xsc::normalized_laplacian(sub));
    }

    std::cout << "clustered " << extremes.count() << " extremes into " << o.m
              << " groups (k_n=" << k_n << ", threshold=" << extremes.threshold << ")\n";
    for (Eigen::Index j = 0; j < result.masses_hat.size(); ++j)
        std::cout << "  cluster " << j << ": mass " << result.masses_hat[j] << "\n";
    if (!result.singletons.empty())
        std::cout << "  singletons: " << result.singletons.size() << " (mass "
                  << result.singleton_mass << ")\n";
    return 0;
}

int cmd_screeplot(const Options& o) {
    validate_options(o, false, false);
    const xsc::RandomStream root(o.seed);
    const xsc::SampleMatrix sample = load_or_simulate(o, root);
    const xsc::ExtremalSample extremes = xsc::select_extremes(sample, selection_rule(o));
    const fs::path path = out_file(o, "scree.csv");
    xsc::write_scree_csv(path.string(), xsc::screeplot(extremes, o.s));
    write_meta(path, "screeplot", resolved_config(o));
    std::cout << "wrote " << path.string() << " (" << extremes.count() << " extremes)\n";
    return 0;
}

int cmd_benchmark(const Options& o) {
    validate_options(o, false, false);
    for (double tau : o.grid_tau)
        if (!(tau > 1.0)) throw xsc::InvalidParameter("--grid-tau values must be > 1");
    xsc::BenchConfig config;
    config.seed = o.seed;
    config.alpha = o.alpha;
    config.law = parse_law(o.law);
    config.tail_case = parse_case(o.tail_case);
    config.kernel_scale = o.s;
    config.mode = parse_mode(o.mode);
    config.replications = o.reps;
    config.m = o.m;
    config.workers = o.workers;
    config.sample_sizes.assign(o.grid_n.begin(), o.grid_n.end());
    config.extreme_counts.assign(o.grid_nn.begin(), o.grid_nn.end());
    config.taus = o.grid_tau;
    config.sigmas = o.grid_sigma;
    if (o.model == "ma") {
        config.model = xsc::BenchModel::ma;
        config.coeffs = Eigen::Map<const Eigen::VectorXd>(
            o.coeffs.data(), static_cast<Eigen::Index>(o.coeffs.size()));
        config.embed_dim = o.embed_dim;
        config.tail_case = xsc::TailCase::symmetric;
        config.law = xsc::FactorLaw::symmetric_stable;
    } else {
        const bool noisy = o.model == "lfm-noisy" ||
                           std::any_of(config.sigmas.begin(), config.sigmas.end(),
                                       [](double s) { return s > 0.0; });
        config.model = noisy ? xsc::BenchModel::lfm_noisy : xsc::BenchModel::lfm;
        config.loadings = loadings_from(o);
    }

    const std::vector<xsc::BenchRow> rows = xsc::run_benchmark(config);
    const fs::path path = out_file(o, "errors.csv");
    xsc::write_benchmark_csv(path.string(), rows);
    write_meta(path, "benchmark", resolved_config(o));
    std::cout << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
    return 0;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--model", o.model, "lfm, lfm-noisy, ma, csv, or a CSV path");
    cmd->add_option("--input", o.input, "input CSV (with --model csv)");
    cmd->add_option("--alpha", o.alpha, "tail index");
    cmd->add_option("--sigma", o.sigma, "noise scale (lfm-noisy)");
    cmd->add_option("--A", o.A_text, "loading matrix, rows ';'-separated: '0.1,0.9;0.2,0.8;...'");
    cmd->add_option("--coeffs", o.coeffs, "moving-average coefficients")->delimiter(',');
    cmd->add_option("--embed-dim", o.embed_dim, "lag-embedding dimension");
    cmd->add_option("--law", o.law, "factor law: frechet, pareto, stable");
    cmd->add_option("--case", o.tail_case, "tail case: nonnegative, symmetric");
    cmd->add_option("--n", o.n, "sample size");
    cmd->add_option("--beta", o.beta, "radius quantile for extreme selection");
    cmd->add_option("--nn", o.nn, "extreme count for top-count selection");
    cmd->add_option("--tau", o.tau, "neighbor rule constant (> 1)");
    cmd->add_option("--s", o.s, "kernel scale");
    cmd->add_option("--m", o.m, "cluster count");
    cmd->add_option("--mode", o.mode, "graph rule: symmetric, mutual");
    cmd->add_flag("--rank-transform", o.rank_transform,
                  "rank-standardize CSV input marginals before selection");
    cmd->add_option("--reps", o.reps, "benchmark replications per grid cell");
    cmd->add_option("--workers", o.workers, "worker threads (0 = hardware)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--config", "key=value configuration file; flags win")
        ->type_name("PATH")
        ->expected(1);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral clustering of multivariate extremes"};
    app.require_subcommand(1);

    Options o;
    auto* sim = app.add_subcommand("simulate", "simulate a model and write sample.csv");
    auto* clu = app.add_subcommand("cluster",
                                   "select extremes, cluster them, write labels/atoms/scree CSVs");
    clu->add_flag("--debug-graph", o.debug_graph, "also write edges.csv and laplacian.csv");
    clu->add_flag("--export-extremes", o.export_extremes,
                  "also write extremes.csv (index,radius,a1..ad)");
    auto* scr = app.add_subcommand("screeplot", "write the kernel-matrix screeplot CSV");
    auto* ben = app.add_subcommand("benchmark", "replicated error study over a parameter grid");
    ben->add_option("--grid-n", o.grid_n, "sample-size ladder")->delimiter(',');
    ben->add_option("--grid-nn", o.grid_nn, "extreme-count ladder (paired with --grid-n)")
        ->delimiter(',');
    ben->add_option("--grid-tau", o.grid_tau, "tau values")->delimiter(',');
    ben->add_option("--grid-sigma", o.grid_sigma, "noise scales")->delimiter(',');
    for (CLI::App* cmd : {sim, clu, scr, ben}) add_common(cmd, o);

    // The config file primes the option values; flags parsed afterwards win.
    try {
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") apply_config_file(argv[i + 1], o);
    } catch (const xsc::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(o);
        if (clu->parsed()) return cmd_cluster(o);
        if (scr->parsed()) return cmd_screeplot(o);
        if (ben->parsed()) return cmd_benchmark(o);
        return kExitConfig;
    } catch (const xsc::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const xsc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitIo;
    } catch (const xsc::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
        return kExitNumerical;
    } catch (const xsc::IsolatedNode& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}
