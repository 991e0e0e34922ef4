#include "mdlcomp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "mdlcomp/experiments.hpp"
#include "mdlcomp/io.hpp"
#include "mdlcomp/kernel.hpp"
#include "mdlcomp/optimize.hpp"
#include "mdlcomp/oracle.hpp"
#include "mdlcomp/prac.hpp"
#include "mdlcomp/ridge.hpp"

namespace mdlcomp {

namespace {

using nlohmann::json;

// Offsets keeping the design, truth and noise streams apart for one --seed.
constexpr std::uint64_t kTruthSeedOffset = 100'000'007;
constexpr std::uint64_t kNoiseSeedOffset = 200'000'033;

/// Numbers are echoed with the same 12 significant digits as the CSVs.
json num(double v) {
    if (!std::isfinite(v)) return io::format_number(v);
    return std::stod(io::format_number(v));
}

json num_array(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
    return a;
}

json num_array(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& cell : io::split_csv_line(text)) out.push_back(io::parse_number(cell));
    if (out.empty()) throw InputError("empty list '" + text + "'");
    return out;
}

std::vector<Eigen::Index> parse_index_list(const std::string& text) {
    std::vector<Eigen::Index> out;
    for (double v : parse_real_list(text)) {
        if (v != std::floor(v) || v < 1) throw InputError("expected positive integers in '" + text + "'");
        out.push_back(static_cast<Eigen::Index>(v));
    }
    return out;
}

template <class T, class Parse>
std::vector<T> parse_names(const std::string& text, Parse parse) {
    std::vector<T> out;
    for (const auto& cell : io::split_csv_line(text)) out.push_back(parse(cell));
    if (out.empty()) throw InputError("empty list '" + text + "'");
    return out;
}

/// What a subcommand produced: a JSON document or named CSV tables.
struct Output {
    std::optional<json> document;
    std::vector<std::pair<std::string, std::string>> tables;  // file name, CSV text
};

struct Common {
    double sigma2 = 1.0;
    std::uint64_t seed = 0;
    std::string grid;
    std::string preset = "sim20";
    int threads = 1;
    std::string out;

    std::vector<double> lambda_grid() const {
        return grid.empty() ? preset_grid(parse_grid_preset(preset)) : parse_grid(grid);
    }
};

struct Simulation {
    Eigen::Index n = 200;
    std::string d_grid;
    Eigen::Index true_dim = 60;
    double norm = 1.0;
    std::string kind = "gaussian_iid";
    std::string row_scale = "unit_variance";
    double alpha = 1.0;
    Eigen::Index spike_dim = 1;
};

void add_common(CLI::App* sub, Common& c, double default_sigma2, bool uses_grid) {
    c.sigma2 = default_sigma2;
    sub->add_option("--sigma2", c.sigma2, "noise variance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "base random seed");
    if (uses_grid) {
        sub->add_option("--grid", c.grid, "log grid lo:hi:count (overrides --preset)");
        sub->add_option("--preset", c.preset, "lambda grid preset")
            ->check(CLI::IsMember({"sim20", "pmlb10", "fmri40"}));
    }
    sub->add_option("--threads", c.threads, "worker cap")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "output directory");
}

void add_simulation(CLI::App* sub, Simulation& s) {
    sub->add_option("--n", s.n, "training samples")->check(CLI::PositiveNumber);
    sub->add_option("--true-dim", s.true_dim, "nonzero coordinates of theta*")->check(CLI::PositiveNumber);
    sub->add_option("--norm", s.norm, "norm of theta*")->check(CLI::NonNegativeNumber);
    sub->add_option("--design-kind", s.kind, "covariate family")
        ->check(CLI::IsMember({"gaussian_iid", "decaying", "spike", "cosine"}));
    sub->add_option("--row-scale", s.row_scale, "entry scaling")
        ->check(CLI::IsMember({"unit_variance", "inv_n_variance"}));
    sub->add_option("--alpha", s.alpha, "decay exponent (decaying design)");
    sub->add_option("--spike-dim", s.spike_dim, "spiked directions (spike design)");
}

DesignSpec design_of(const Simulation& s, Eigen::Index d, std::uint64_t seed) {
    DesignSpec spec;
    spec.kind = parse_design_kind(s.kind);
    spec.n = s.n;
    spec.d = d;
    spec.alpha = s.alpha;
    spec.spike_dim = s.spike_dim;
    spec.row_scale = parse_row_scale(s.row_scale);
    spec.seed = seed;
    return spec;
}

json selection_json(const PracSelection& sel, double sigma2) {
    json j;
    j["selected_lambda"] = num(sel.selected_lambda);
    j["objective"] = num(sel.objective_value);
    j["approx_ropt"] = num(sel.approx_ropt);
    j["on_endpoint"] = sel.on_endpoint;
    j["sigma2"] = num(sigma2);
    json trace = json::array();
    for (const auto& [lambda, value] : sel.grid_trace) trace.push_back({num(lambda), num(value)});
    j["grid_trace"] = trace;
    return j;
}

std::string trace_csv(const std::vector<std::pair<double, double>>& trace, const std::string& column) {
    std::string text = "lambda," + column + "\n";
    for (const auto& [lambda, value] : trace)
        text += io::format_number(lambda) + "," + io::format_number(value) + "\n";
    return text;
}

/// Rebuilds the option list a re-run needs; --out and --config are left out.
json resolved_config(const CLI::App* sub) {
    json options = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "out" || name == "config") continue;
        if (opt->get_expected_min() == 0) {
            options[name] = opt->count() > 0 && opt->as<bool>();
            continue;
        }
        const std::string value = opt->count() > 0 ? opt->results().back() : opt->get_default_str();
        if (!value.empty()) options[name] = value;
    }
    return json{{"subcommand", sub->get_name()}, {"options", options}};
}

/// Splices the options of a --config JSON in front of the explicit arguments,
/// so flags given on the command line win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    const auto it = std::find(args.begin(), args.end(), "--config");
    if (it == args.end()) return args;
    if (it + 1 == args.end()) throw InputError("--config needs a path");
    const std::string path = *(it + 1);
    args.erase(it, it + 2);

    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw InputError("malformed config '" + path + "': " + e.what());
    }
    if (!cfg.contains("subcommand") || !cfg["subcommand"].is_string())
        throw InputError("config '" + path + "' lacks a subcommand");
    std::vector<std::string> injected;
    const json options = cfg.value("options", json::object());
    for (const auto& [key, value] : options.items()) {
        if (value.is_boolean())
            injected.push_back("--" + key + "=" + (value.get<bool>() ? "true" : "false"));
        else if (value.is_string())
            injected.push_back("--" + key + "=" + value.get<std::string>());
        else
            injected.push_back("--" + key + "=" + value.dump());
    }
    if (args.empty() || args.front().rfind('-', 0) == 0) args.insert(args.begin(), cfg["subcommand"].get<std::string>());
    args.insert(args.begin() + 1, injected.begin(), injected.end());
    return args;
}

void emit(const Output& output, const Common& common, const json& config, std::ostream& out) {
    if (common.out.empty()) {
        if (output.document) {
            out << output.document->dump(2) << "\n";
        } else {
            for (const auto& [name, text] : output.tables) out << text;
        }
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(common.out, ec);
    if (ec) throw InputError("cannot create output directory '" + common.out + "'");
    const std::filesystem::path dir(common.out);
    if (output.document) io::write_text_file((dir / "result.json").string(), output.document->dump(2) + "\n");
    for (const auto& [name, text] : output.tables) io::write_text_file((dir / name).string(), text);
    io::write_text_file((dir / "config.json").string(), config.dump(2) + "\n");
}

}  // namespace

int run_command(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ridge MDL complexity toolkit", "mdlcomp"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::map<std::string, std::function<Output()>> handlers;
    std::map<std::string, Common*> commons;
    std::vector<std::unique_ptr<Common>> common_store;
    auto make_sub = [&](const std::string& name, const std::string& help, double sigma2, bool grid) {
        CLI::App* sub = app.add_subcommand(name, help);
        common_store.push_back(std::make_unique<Common>());
        commons[name] = common_store.back().get();
        add_common(sub, *common_store.back(), sigma2, grid);
        return std::pair{sub, common_store.back().get()};
    };

    // oracle
    std::string design_path, truth_path, response_path, kernel_path, points_path, eigen_path;
    {
        auto [sub, c] = make_sub("oracle", "oracle MDL-COMP, R_opt and optimal penalties", 1.0, false);
        sub->add_option("--design", design_path, "design matrix CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--truth", truth_path, "true coefficient CSV")->required()->check(CLI::ExistingFile);
        handlers["oracle"] = [&, c = c] {
            const Matrix x = io::read_matrix_csv(design_path);
            const Vector theta = io::read_vector_csv(truth_path);
            const SpectralDecomposition decomp = spectral_decompose(x, theta);
            const ComplexityReport r = oracle_complexity_report(decomp, c->sigma2);
            json j;
            j["mdl_comp"] = num(r.mdl_comp);
            j["ropt"] = num(r.ropt);
            j["lambda_opt"] = num_array(r.lambda_opt);
            j["codelength_hyper"] = num(r.codelength_hyper);
            j["retained"] = r.retained;
            j["excluded"] = r.excluded;
            j["degenerate"] = r.degenerate;
            j["insample_bound"] = num(insample_bound(decomp, c->sigma2));
            j["insample_bound_scaled_ropt"] = num(insample_bound_scaled_ropt(decomp, c->sigma2));
            j["sigma2"] = num(c->sigma2);
            return Output{j, {}};
        };
    }

    // kl
    double lambda = 1.0;
    std::string lambdas_path;
    {
        auto [sub, c] = make_sub("kl", "KL redundancy, in-sample MSE and minimax codelength of a ridge code", 1.0,
                                 false);
        sub->add_option("--design", design_path, "design matrix CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--truth", truth_path, "true coefficient CSV")->required()->check(CLI::ExistingFile);
        auto* scalar = sub->add_option("--lambda", lambda, "scalar penalty")->check(CLI::NonNegativeNumber);
        sub->add_option("--lambdas", lambdas_path, "per-coordinate penalty CSV")
            ->check(CLI::ExistingFile)
            ->excludes(scalar);
        handlers["kl"] = [&, c = c] {
            const Matrix x = io::read_matrix_csv(design_path);
            const Vector theta = io::read_vector_csv(truth_path);
            const SpectralDecomposition decomp = spectral_decompose(x, theta);
            const PenaltySpec penalty = lambdas_path.empty()
                                            ? (lambda == 0.0 ? PenaltySpec::ols() : PenaltySpec::scalar(lambda))
                                            : PenaltySpec::per_coordinate(io::read_vector_csv(lambdas_path));
            json j;
            j["penalty"] = penalty.describe();
            j["kl_code"] = num(kl_ridge_code(decomp, c->sigma2, penalty));
            j["insample_mse"] = num(insample_mse_analytic(decomp, c->sigma2, penalty));
            j["minimax_codelength"] = penalty.is_ols() ? num(std::numeric_limits<double>::infinity())
                                                       : num(minimax_worstcase_codelength(decomp, c->sigma2, penalty));
            j["sigma2"] = num(c->sigma2);
            return Output{j, {}};
        };
    }

    // prac
    bool no_refine = false, estimate_sigma2 = false;
    {
        auto [sub, c] = make_sub("prac", "Prac-MDL-COMP penalty selection for linear ridge", 1.0, true);
        sub->add_option("--design", design_path, "design matrix CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--response", response_path, "response CSV")->required()->check(CLI::ExistingFile);
        sub->add_flag("--no-refine", no_refine, "report the grid minimizer only");
        sub->add_flag("--estimate-sigma2", estimate_sigma2, "plug-in noise variance instead of --sigma2");
        handlers["prac"] = [&, c = c] {
            Dataset data{io::read_matrix_csv(design_path), io::read_vector_csv(response_path), 1.0};
            data.validate();
            const auto grid = c->lambda_grid();
            const double sigma2 = estimate_sigma2 ? estimate_noise_variance(data, grid) : c->sigma2;
            const PracSelection sel = select_lambda_prac_linear(data, grid, sigma2, PracOptions{!no_refine});
            json j = selection_json(sel, sigma2);
            j["sigma2_source"] = estimate_sigma2 ? "estimated" : "given";
            j["coefficients"] = num_array(sel.fit.coefficients);
            return Output{j, {{"prac_trace.csv", trace_csv(sel.grid_trace, "objective")}}};
        };
    }

    // kernel-prac
    KernelSpec kernel_spec;
    std::string kernel_kind = "rbf";
    auto add_kernel_source = [&](CLI::App* sub) {
        auto* k = sub->add_option("--kernel", kernel_path, "precomputed kernel matrix CSV")->check(CLI::ExistingFile);
        auto* p = sub->add_option("--points", points_path, "input points CSV (one row per sample)")
                      ->check(CLI::ExistingFile)
                      ->excludes(k);
        sub->add_option("--kernel-type", kernel_kind, "kernel family for --points")
            ->check(CLI::IsMember({"rbf", "polynomial"}));
        sub->add_option("--bandwidth", kernel_spec.bandwidth, "rbf bandwidth")->check(CLI::PositiveNumber);
        sub->add_option("--degree", kernel_spec.degree, "polynomial degree")->check(CLI::PositiveNumber);
        sub->add_option("--offset", kernel_spec.offset, "polynomial offset");
        sub->add_flag("--normalize", kernel_spec.normalize, "unit-diagonal normalization");
        return std::pair{k, p};
    };
    auto load_kernel = [&]() -> Matrix {
        if (!kernel_path.empty()) return load_kernel_matrix(kernel_path);
        if (points_path.empty()) throw InputError("give --kernel or --points");
        kernel_spec.kind = kernel_kind == "rbf" ? KernelSpec::Kind::rbf : KernelSpec::Kind::polynomial;
        return build_kernel(io::read_matrix_csv(points_path), kernel_spec);
    };
    {
        auto [sub, c] = make_sub("kernel-prac", "Prac-MDL-COMP penalty selection for kernel ridge", 1.0, true);
        add_kernel_source(sub);
        sub->add_option("--response", response_path, "response CSV")->required()->check(CLI::ExistingFile);
        sub->add_flag("--no-refine", no_refine, "report the grid minimizer only");
        handlers["kernel-prac"] = [&, c = c] {
            const Matrix k = load_kernel();
            const Vector y = io::read_vector_csv(response_path);
            const PracSelection sel =
                select_lambda_prac_kernel(k, y, c->lambda_grid(), c->sigma2, PracOptions{!no_refine});
            json j = selection_json(sel, c->sigma2);
            j["dual_coefficients"] = num_array(sel.fit.coefficients);
            return Output{j, {{"prac_trace.csv", trace_csv(sel.grid_trace, "objective")}}};
        };
    }

    // cv
    int folds = 0;
    {
        auto [sub, c] = make_sub("cv", "ridge penalty selection by cross-validation", 1.0, true);
        sub->add_option("--design", design_path, "design matrix CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--response", response_path, "response CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--folds", folds, "k for k-fold; 0 selects leave-one-out")->check(CLI::NonNegativeNumber);
        handlers["cv"] = [&, c = c] {
            Dataset data{io::read_matrix_csv(design_path), io::read_vector_csv(response_path), 1.0};
            const auto grid = c->lambda_grid();
            const CvResult cv = folds == 0 ? loocv_select(data, grid) : kfold_select(data, grid, folds, c->seed);
            json j;
            j["scheme"] = cv.scheme.describe();
            j["selected_lambda"] = num(cv.selected_lambda);
            j["grid"] = num_array(cv.grid);
            j["cv_errors"] = num_array(cv.cv_errors);
            std::vector<std::pair<double, double>> trace;
            for (std::size_t i = 0; i < cv.grid.size(); ++i) trace.emplace_back(cv.grid[i], cv.cv_errors[i]);
            return Output{j, {{"cv_trace.csv", trace_csv(trace, "cv_error")}}};
        };
    }

    // rmt
    RmtSpec rmt;
    {
        auto [sub, c] = make_sub("rmt", "Marchenko-Pastur redundancy bound for Gaussian designs", 1.0, false);
        sub->add_option("--gamma", rmt.gamma, "d / n")->required()->check(CLI::PositiveNumber);
        sub->add_option("--snr", rmt.snr, "signal-to-noise ratio")->required()->check(CLI::NonNegativeNumber);
        handlers["rmt"] = [&] {
            json j;
            j["gamma"] = num(rmt.gamma);
            j["snr"] = num(rmt.snr);
            j["delta"] = num(rmt_delta(rmt));
            j["redundancy_bound"] = num(rmt_redundancy_bound(rmt));
            return Output{j, {}};
        };
    }

    // kernel-bound
    double snr2 = 1.0;
    std::string truth_values_path;
    bool hyper_cost = false;
    {
        auto [sub, c] = make_sub("kernel-bound", "kernel MDL-COMP bound from a kernel spectrum", 1.0, false);
        auto [k, p] = add_kernel_source(sub);
        sub->add_option("--eigenvalues", eigen_path, "kernel eigenvalue CSV")
            ->check(CLI::ExistingFile)
            ->excludes(k)
            ->excludes(p);
        sub->add_option("--snr2", snr2, "squared RKHS norm over sigma^2")->check(CLI::NonNegativeNumber);
        sub->add_option("--truth-values", truth_values_path, "f* at the sample points, enables the exact KL")
            ->check(CLI::ExistingFile);
        sub->add_flag("--hyper-cost", hyper_cost, "also report the bound plus log(lambda)/n");
        handlers["kernel-bound"] = [&, c = c] {
            KernelComplexityInput input;
            if (!eigen_path.empty()) {
                input.eigenvalues = io::read_vector_csv(eigen_path);
                if ((input.eigenvalues.array() < 0.0).any()) throw InputError("kernel eigenvalues must be nonnegative");
                std::sort(input.eigenvalues.begin(), input.eigenvalues.end(), std::greater<>());
                input.noise_variance = c->sigma2;
                input.hilbert_norm_sq_over_sigma_sq = snr2;
                if (!truth_values_path.empty()) throw InputError("--truth-values needs a kernel matrix");
            } else {
                const Matrix k = load_kernel();
                const Vector f = truth_values_path.empty() ? Vector::Zero(k.rows())
                                                           : io::read_vector_csv(truth_values_path);
                input = make_kernel_input(k, f, c->sigma2, snr2);
                if (truth_values_path.empty()) input.rotated_truth.reset();
            }
            const KernelBound b = kernel_mdl_bound(input);
            json j;
            j["bound"] = num(b.value);
            j["lambda"] = num(b.lambda);
            j["samples"] = input.samples();
            if (hyper_cost)
                j["bound_with_hyper_cost"] = num(b.value + std::log(b.lambda) / static_cast<double>(input.samples()));
            if (input.rotated_truth && std::isfinite(b.lambda))
                j["kl_at_lambda"] = num(kl_kernel_code(input, b.lambda));
            return Output{j, {}};
        };
    }

    // decay-bound
    DecayRegime regime;
    std::string regime_kind = "sobolev", n_list = "1024";
    {
        auto [sub, c] = make_sub("decay-bound", "kernel bound under polynomial eigen-decay", 1.0, false);
        sub->add_option("--regime", regime_kind, "decay family")
            ->check(CLI::IsMember({"gaussian_like", "sobolev", "ntk_like"}));
        sub->add_option("--dim", regime.dim, "input dimension")->check(CLI::PositiveNumber);
        sub->add_option("--omega", regime.omega, "Sobolev smoothness");
        sub->add_option("--a", regime.a, "NTK offset");
        sub->add_option("--snr", regime.snr, "RKHS norm over sigma")->check(CLI::NonNegativeNumber);
        sub->add_option("--n", n_list, "comma-separated sample sizes");
        handlers["decay-bound"] = [&] {
            regime.kind = regime_kind == "gaussian_like" ? DecayRegime::Kind::gaussian_like
                          : regime_kind == "ntk_like"    ? DecayRegime::Kind::ntk_like
                                                         : DecayRegime::Kind::sobolev;
            const bool polynomial = regime.kind != DecayRegime::Kind::gaussian_like;
            const std::string alpha = polynomial ? io::format_number(regime.alpha()) : std::string();
            std::string csv = "n,alpha,bound\n";
            json points = json::array();
            for (Eigen::Index n : parse_index_list(n_list)) {
                regime.n = static_cast<double>(n);
                const double value = decay_regime_bound(regime);
                points.push_back({{"n", n}, {"bound", num(value)}});
                csv += std::to_string(n) + "," + alpha + "," + io::format_number(value) + "\n";
            }
            json j{{"regime", regime_kind}, {"points", points}};
            if (polynomial) j["alpha"] = num(regime.alpha());
            return Output{j, {{"decay_bound.csv", csv}}};
        };
    }

    // simulate-scaling and bias-variance
    Simulation sim;
    int replicates = 20;
    std::string estimators = "ols,ridge_cv";
    Eigen::Index n_test = 1000;
    auto experiment_config = [&](const Common& c) {
        ExperimentConfig cfg;
        cfg.d_grid = parse_index_list(sim.d_grid);
        const Eigen::Index d_max = *std::max_element(cfg.d_grid.begin(), cfg.d_grid.end());
        cfg.design = design_of(sim, std::max(d_max, sim.true_dim), c.seed);
        cfg.truth = TruthSpec{sim.true_dim, sim.norm, c.seed + kTruthSeedOffset};
        cfg.noise_variance = c.sigma2;
        cfg.n_replicates = replicates;
        cfg.base_seed = c.seed + kNoiseSeedOffset;
        cfg.threads = c.threads;
        cfg.n_test = n_test;
        return cfg;
    };
    {
        auto [sub, c] = make_sub("simulate-scaling", "MDL-COMP and R_opt versus fitted dimension", 1.0, false);
        add_simulation(sub, sim);
        sub->add_option("--d-grid", sim.d_grid, "comma-separated fitted dimensions")->required();
        sub->add_option("--replicates", replicates, "design and truth redraws")->check(CLI::PositiveNumber);
        handlers["simulate-scaling"] = [&, c = c] {
            const auto points = run_mdl_scaling(experiment_config(*c));
            return Output{std::nullopt, {{"scaling.csv", curve_csv("simulate-scaling", points)}}};
        };
    }
    {
        auto [sub, c] = make_sub("bias-variance", "bias, variance and test MSE versus fitted dimension", 0.01, true);
        add_simulation(sub, sim);
        sub->add_option("--d-grid", sim.d_grid, "comma-separated fitted dimensions")->required();
        sub->add_option("--replicates", replicates, "training-noise redraws")->check(CLI::PositiveNumber);
        sub->add_option("--estimators", estimators, "comma-separated subset of ols,ridge_cv,ridge_prac,zero");
        sub->add_option("--n-test", n_test, "held-out samples")->check(CLI::PositiveNumber);
        handlers["bias-variance"] = [&, c = c] {
            ExperimentConfig cfg = experiment_config(*c);
            cfg.estimators = parse_names<Estimator>(estimators, parse_estimator);
            cfg.lambda_grid = c->lambda_grid();
            const auto points = run_bias_variance(cfg);
            return Output{std::nullopt, {{"bias_variance.csv", curve_csv("bias-variance", points)}}};
        };
    }

    // compare
    std::string dataset_path, target, ratios = "0.5,1,2",
                schemes = "ridge_prac,ridge_loocv,ridge_kfold,ols,zero";
    Eigen::Index compare_d = 100;
    int kfold = 5;
    double test_fraction = 0.25;
    double prac_sigma2 = 0.0;
    {
        auto [sub, c] = make_sub("compare", "held-out MSE of Prac-MDL-COMP against CV, OLS and zero", 1.0, true);
        add_simulation(sub, sim);
        sub->add_option("--d", compare_d, "simulated dimension")->check(CLI::PositiveNumber);
        sub->add_option("--dataset", dataset_path, "headered CSV instead of simulation")->check(CLI::ExistingFile);
        sub->add_option("--target", target, "response column of --dataset");
        sub->add_option("--ratios", ratios, "comma-separated d/n targets");
        sub->add_option("--replicates", replicates, "replicates per ratio")->check(CLI::PositiveNumber);
        sub->add_option("--schemes", schemes, "comma-separated selection schemes");
        sub->add_option("--kfold", kfold, "folds of ridge_kfold")->check(CLI::Range(2, 1 << 20));
        sub->add_option("--n-test", n_test, "simulated held-out samples")->check(CLI::PositiveNumber);
        sub->add_option("--test-fraction", test_fraction, "holdout share of --dataset")
            ->check(CLI::Range(0.0, 1.0));
        auto* ps = sub->add_option("--prac-sigma2", prac_sigma2, "noise variance assumed by Prac-MDL-COMP")
                       ->check(CLI::PositiveNumber);
        sub->add_flag("--estimate-sigma2", estimate_sigma2, "plug-in noise variance for Prac-MDL-COMP")
            ->excludes(ps);
        handlers["compare"] = [&, c = c, ps = ps] {
            ComparisonConfig cfg;
            cfg.ratios = parse_real_list(ratios);
            cfg.replicates = replicates;
            cfg.base_seed = c->seed + kNoiseSeedOffset;
            cfg.lambda_grid = c->lambda_grid();
            cfg.schemes = parse_names<SelectionScheme>(schemes, parse_selection_scheme);
            cfg.kfold = kfold;
            cfg.n_test = n_test;
            cfg.test_fraction = test_fraction;
            cfg.estimate_prac_noise = estimate_sigma2;
            if (ps->count() > 0) cfg.prac_noise_variance = prac_sigma2;
            cfg.threads = c->threads;
            cfg.noise_variance = c->sigma2;
            std::vector<ComparisonRow> rows;
            if (!dataset_path.empty()) {
                if (target.empty()) throw InputError("--dataset needs --target");
                const IngestResult ingested = ingest_dataset(dataset_path, target, true);
                rows = run_selector_comparison(cfg, &ingested.data);
            } else {
                cfg.design = design_of(sim, compare_d, c->seed);
                cfg.truth = TruthSpec{sim.true_dim, sim.norm, c->seed + kTruthSeedOffset};
                rows = run_selector_comparison(cfg);
            }
            return Output{std::nullopt, {{"compare.csv", comparison_csv(rows)}}};
        };
    }

    // ingest-check
    bool raw = false;
    std::string write_path;
    {
        auto [sub, c] = make_sub("ingest-check", "load a dataset and summarize it", 1.0, false);
        sub->add_option("--dataset", dataset_path, "headered CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--target", target, "response column")->required();
        sub->add_flag("--no-standardize", raw, "keep the original scale");
        sub->add_option("--write", write_path, "write the cleaned dataset here");
        handlers["ingest-check"] = [&] {
            const IngestResult r = ingest_dataset(dataset_path, target, !raw);
            if (!write_path.empty()) write_dataset_csv(write_path, r.data, r.feature_names, r.target);
            json j;
            j["n"] = r.data.samples();
            j["d"] = r.data.features();
            j["target"] = r.target;
            j["features"] = r.feature_names;
            j["column_means"] = num_array(Vector(r.data.covariates.colwise().mean().transpose()));
            j["response_mean"] = num(r.data.response.mean());
            j["dropped_rows"] = r.dropped_rows;
            j["dropped_columns"] = r.dropped_columns;
            j["warnings"] = r.warnings;
            return Output{j, {}};
        };
    }

    std::vector<std::string> args;
    try {
        args = expand_config(raw_args);
        if (!args.empty() && args.front().rfind('-', 0) != 0 && !handlers.count(args.front())) {
            err << "error: unknown subcommand '" << args.front() << "'\n" << app.help();
            return kExitInput;
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitInput;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        const Output output = handlers.at(name)();
        emit(output, *commons.at(name), resolved_config(sub), out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

int run_command(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_command(args, std::cout, std::cerr);
}

}  // namespace mdlcomp
