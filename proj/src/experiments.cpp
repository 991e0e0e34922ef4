#include "mdlcomp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "mdlcomp/io.hpp"
#include "mdlcomp/optimize.hpp"
#include "mdlcomp/oracle.hpp"
#include "mdlcomp/prac.hpp"
#include "mdlcomp/ridge.hpp"
#include "mdlcomp/rng.hpp"

namespace mdlcomp {

namespace {

// Runs fn(0..count-1) on up to `threads` workers. Each index writes only its
// own output slot, so results do not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

double mean_sq(const Vector& v) { return v.squaredNorm() / static_cast<double>(v.size()); }

double median(std::vector<double> values) {
    if (values.empty()) return std::nan("");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

constexpr SpectralOptions kThin{.complete_basis = false};

}  // namespace

const char* to_string(Estimator e) {
    switch (e) {
    case Estimator::ols: return "ols";
    case Estimator::ridge_cv: return "ridge_cv";
    case Estimator::ridge_prac: return "ridge_prac";
    case Estimator::zero: return "zero";
    }
    return "unknown";
}

Estimator parse_estimator(const std::string& name) {
    if (name == "ols") return Estimator::ols;
    if (name == "ridge_cv") return Estimator::ridge_cv;
    if (name == "ridge_prac") return Estimator::ridge_prac;
    if (name == "zero") return Estimator::zero;
    throw InputError("unknown estimator '" + name + "'");
}

const char* to_string(SelectionScheme s) {
    switch (s) {
    case SelectionScheme::ridge_prac: return "ridge_prac";
    case SelectionScheme::ridge_loocv: return "ridge_loocv";
    case SelectionScheme::ridge_kfold: return "ridge_kfold";
    case SelectionScheme::ols: return "ols";
    case SelectionScheme::zero: return "zero";
    }
    return "unknown";
}

SelectionScheme parse_selection_scheme(const std::string& name) {
    if (name == "ridge_prac") return SelectionScheme::ridge_prac;
    if (name == "ridge_loocv") return SelectionScheme::ridge_loocv;
    if (name == "ridge_kfold") return SelectionScheme::ridge_kfold;
    if (name == "ols") return SelectionScheme::ols;
    if (name == "zero") return SelectionScheme::zero;
    throw InputError("unknown selection scheme '" + name + "'");
}

Stat summarize(const std::vector<double>& values) {
    Stat s;
    if (values.empty()) return s;
    const double count = static_cast<double>(values.size());
    for (double v : values) s.mean += v;
    s.mean /= count;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std_error = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
    }
    return s;
}

void ExperimentConfig::validate() const {
    design.validate();
    truth.validate();
    if (!(noise_variance > 0.0)) throw InputError("noise variance must be positive");
    if (d_grid.empty()) throw InputError("d grid is empty");
    for (Eigen::Index d : d_grid)
        if (d < 1 || d > design.d)
            throw InputError("d grid entry " + std::to_string(d) + " outside [1, " +
                             std::to_string(design.d) + "]");
    if (n_replicates < 1) throw InputError("need at least one replicate");
    if (n_test < 1) throw InputError("test set is empty");
    if (truth.true_dim > design.d)
        throw InputError("true dimension exceeds the number of generated features");
}

std::vector<double> ExperimentConfig::resolved_grid() const {
    return lambda_grid.empty() ? preset_grid(GridPreset::sim20) : lambda_grid;
}

std::vector<double> ComparisonConfig::resolved_grid() const {
    return lambda_grid.empty() ? preset_grid(GridPreset::sim20) : lambda_grid;
}

std::vector<CurvePoint> run_bias_variance(const ExperimentConfig& config) {
    config.validate();
    const std::vector<double> grid = config.resolved_grid();
    const Matrix x = generate_design(config.design);
    DesignSpec test_spec = config.design;
    test_spec.n = config.n_test;
    test_spec.seed = config.design.seed + kTestDesignSeedOffset;
    const Matrix x_test = generate_design(test_spec);

    const Vector theta = generate_truth(config.truth);
    const Vector theta_full = project_truth(theta, config.design.d);
    const Vector clean_train = x * theta_full;
    const Vector clean_test = x_test * theta_full;

    const auto replicates = static_cast<std::size_t>(config.n_replicates);
    std::vector<Vector> responses(replicates);
    for (std::size_t r = 0; r < replicates; ++r)
        responses[r] = sample_linear_model(x, theta_full, config.noise_variance, config.base_seed + r);

    const std::size_t per_d = config.estimators.size();
    std::vector<CurvePoint> points(config.d_grid.size() * per_d);

    parallel_for(config.d_grid.size(), config.threads, [&](std::size_t cell) {
        const Eigen::Index d = config.d_grid[cell];
        const Matrix xd = x.leftCols(d);
        const Matrix xd_test = x_test.leftCols(d);
        const SpectralDecomposition decomp =
            spectral_decompose(xd, project_truth(theta, d), kThin);
        const ComplexityReport oracle = oracle_complexity_report(decomp, config.noise_variance);

        for (std::size_t e = 0; e < per_d; ++e) {
            const Estimator est = config.estimators[e];
            Matrix predictions(config.n_test, config.n_replicates);
            std::vector<double> lambdas, approx;
            for (std::size_t r = 0; r < replicates; ++r) {
                const Vector& y = responses[r];
                Vector coef = Vector::Zero(d);
                switch (est) {
                case Estimator::ols:
                    coef = fit_ridge(decomp, xd, y, PenaltySpec::ols()).coefficients;
                    break;
                case Estimator::ridge_cv: {
                    const CvResult cv = loocv_select(decomp, y, grid);
                    coef = fit_ridge(decomp, xd, y, PenaltySpec::scalar(cv.selected_lambda)).coefficients;
                    lambdas.push_back(cv.selected_lambda);
                    break;
                }
                case Estimator::ridge_prac: {
                    const PracSelection sel =
                        select_lambda_prac_linear(decomp, xd, y, grid, config.noise_variance);
                    coef = sel.fit.coefficients;
                    lambdas.push_back(sel.selected_lambda);
                    approx.push_back(sel.approx_ropt);
                    break;
                }
                case Estimator::zero:
                    break;
                }
                predictions.col(static_cast<Eigen::Index>(r)) = xd_test * coef;
            }

            const Vector mean_prediction = predictions.rowwise().mean();
            std::vector<double> mse;
            double variance = 0.0;
            for (Eigen::Index r = 0; r < predictions.cols(); ++r) {
                mse.push_back(mean_sq(clean_test - predictions.col(r)));
                variance += mean_sq(predictions.col(r) - mean_prediction);
            }

            CurvePoint& p = points[cell * per_d + e];
            p.d = d;
            p.n = config.design.n;
            p.estimator = to_string(est);
            p.replicates = config.n_replicates;
            p.test_mse = summarize(mse);
            p.bias = mean_sq(clean_test - mean_prediction);
            p.variance = variance / static_cast<double>(predictions.cols());
            p.mdl_comp = Stat{oracle.mdl_comp, 0.0};
            p.ropt = Stat{oracle.ropt, 0.0};
            if (!lambdas.empty()) p.selected_lambda = summarize(lambdas);
            if (!approx.empty()) p.approx_ropt = summarize(approx);
        }
    });
    (void)clean_train;
    return points;
}

std::vector<CurvePoint> run_mdl_scaling(const ExperimentConfig& config) {
    config.validate();
    const auto replicates = static_cast<std::size_t>(config.n_replicates);
    const std::size_t cells = config.d_grid.size();
    std::vector<std::vector<double>> mdl(cells, std::vector<double>(replicates));
    std::vector<std::vector<double>> ropt(cells, std::vector<double>(replicates));

    parallel_for(replicates, config.threads, [&](std::size_t r) {
        DesignSpec spec = config.design;
        spec.seed += r;
        TruthSpec truth = config.truth;
        truth.seed += r;
        const Matrix x = generate_design(spec);
        const Vector theta = generate_truth(truth);
        for (std::size_t c = 0; c < cells; ++c) {
            const Eigen::Index d = config.d_grid[c];
            const SpectralDecomposition decomp =
                spectral_decompose(x.leftCols(d), project_truth(theta, d), kThin);
            const ComplexityReport report = oracle_complexity_report(decomp, config.noise_variance);
            mdl[c][r] = report.mdl_comp;
            ropt[c][r] = report.ropt;
        }
    });

    std::vector<CurvePoint> points;
    for (std::size_t c = 0; c < cells; ++c) {
        CurvePoint p;
        p.d = config.d_grid[c];
        p.n = config.design.n;
        p.estimator = "oracle";
        p.replicates = config.n_replicates;
        p.mdl_comp = summarize(mdl[c]);
        p.ropt = summarize(ropt[c]);
        const ScalingRegimeInput in{static_cast<double>(p.d), static_cast<double>(p.n),
                                    static_cast<double>(config.truth.true_dim),
                                    config.truth.norm * config.truth.norm, config.noise_variance};
        p.scaling_mdl_comp = scaling_approximation(in, ScalingQuantity::mdl_comp);
        p.scaling_ropt = scaling_approximation(in, ScalingQuantity::ropt);
        points.push_back(std::move(p));
    }
    return points;
}

namespace {

struct TrainTest {
    Matrix x, x_test;
    Vector y, y_test;
};

struct SchemeOutcome {
    double mse = 0.0;
    std::optional<double> lambda;
    std::optional<double> prac_sigma2;
};

SchemeOutcome evaluate_scheme(SelectionScheme scheme, const TrainTest& tt,
                              const SpectralDecomposition& decomp, const ComparisonConfig& config,
                              const std::vector<double>& grid, double default_prac_sigma2,
                              std::uint64_t seed) {
    SchemeOutcome out;
    const Eigen::Index n = tt.x.rows();
    Vector coef = Vector::Zero(tt.x.cols());
    switch (scheme) {
    case SelectionScheme::ols:
        coef = fit_ridge(decomp, tt.x, tt.y, PenaltySpec::ols()).coefficients;
        break;
    case SelectionScheme::zero:
        break;
    case SelectionScheme::ridge_loocv: {
        const CvResult cv = loocv_select(decomp, tt.y, grid);
        coef = fit_ridge(decomp, tt.x, tt.y, PenaltySpec::scalar(cv.selected_lambda)).coefficients;
        out.lambda = cv.selected_lambda;
        break;
    }
    case SelectionScheme::ridge_kfold: {
        const int k = static_cast<int>(std::min<Eigen::Index>(config.kfold, n));
        const CvResult cv = kfold_select(Dataset{tt.x, tt.y, 1.0}, grid, k, seed);
        coef = fit_ridge(decomp, tt.x, tt.y, PenaltySpec::scalar(cv.selected_lambda)).coefficients;
        out.lambda = cv.selected_lambda;
        break;
    }
    case SelectionScheme::ridge_prac: {
        const double sigma2 = config.estimate_prac_noise
                                  ? estimate_noise_variance(Dataset{tt.x, tt.y, 1.0}, grid)
                                  : config.prac_noise_variance.value_or(default_prac_sigma2);
        const PracSelection sel = select_lambda_prac_linear(decomp, tt.x, tt.y, grid, sigma2);
        coef = sel.fit.coefficients;
        out.lambda = sel.selected_lambda;
        out.prac_sigma2 = sigma2;
        break;
    }
    }
    out.mse = mean_sq(tt.y_test - tt.x_test * coef);
    return out;
}

Eigen::Index target_rows(Eigen::Index d, double ratio) {
    if (!(ratio > 0.0)) throw InputError("d/n ratios must be positive");
    return std::max<Eigen::Index>(1, std::llround(static_cast<double>(d) / ratio));
}

}  // namespace

std::vector<ComparisonRow> run_selector_comparison(const ComparisonConfig& config,
                                                   const Dataset* dataset) {
    if (config.ratios.empty()) throw InputError("no d/n ratios requested");
    if (config.replicates < 1) throw InputError("need at least one replicate");
    if (config.schemes.empty()) throw InputError("no selection schemes requested");
    const std::vector<double> grid = config.resolved_grid();

    const std::size_t replicates = static_cast<std::size_t>(config.replicates);
    const std::size_t cells = config.ratios.size() * replicates;
    std::vector<std::vector<SchemeOutcome>> outcomes(cells);
    std::vector<Eigen::Index> used_n(config.ratios.size(), 0);
    Eigen::Index d = 0;
    double default_sigma2 = 1.0;

    // Real data: one seeded holdout split shared by all replicates.
    std::vector<Eigen::Index> pool;
    Matrix x_holdout;
    Vector y_holdout;
    if (dataset) {
        dataset->validate();
        d = dataset->features();
        const Eigen::Index total = dataset->samples();
        const auto n_test = static_cast<Eigen::Index>(std::ceil(config.test_fraction * static_cast<double>(total)));
        if (n_test < 1) throw InputError("test set is empty");
        if (n_test >= total) throw InputError("holdout leaves no training rows");
        Rng rng(config.base_seed);
        const auto perm = rng.permutation(total);
        const std::vector<Eigen::Index> test_rows(perm.begin(), perm.begin() + n_test);
        pool.assign(perm.begin() + n_test, perm.end());
        x_holdout = dataset->covariates(test_rows, Eigen::all);
        y_holdout = dataset->response(test_rows);
    } else {
        config.design.validate();
        config.truth.validate();
        if (!(config.noise_variance > 0.0)) throw InputError("noise variance must be positive");
        if (config.n_test < 1) throw InputError("test set is empty");
        d = config.design.d;
        default_sigma2 = config.noise_variance;
    }

    for (std::size_t k = 0; k < config.ratios.size(); ++k) {
        Eigen::Index n = target_rows(d, config.ratios[k]);
        if (dataset) n = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(pool.size()));
        if (n < 2) throw InputError("selector comparison needs at least two training rows");
        used_n[k] = n;
    }

    parallel_for(cells, config.threads, [&](std::size_t cell) {
        const std::size_t k = cell / replicates;
        const std::size_t r = cell % replicates;
        const Eigen::Index n = used_n[k];
        TrainTest tt;
        if (dataset) {
            Rng rng(config.base_seed + 1 + r);
            const auto pick = rng.permutation(static_cast<Eigen::Index>(pool.size()));
            std::vector<Eigen::Index> rows;
            for (Eigen::Index i = 0; i < n; ++i) rows.push_back(pool[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])]);
            tt.x = dataset->covariates(rows, Eigen::all);
            tt.y = dataset->response(rows);
            tt.x_test = x_holdout;
            tt.y_test = y_holdout;
        } else {
            DesignSpec spec = config.design;
            spec.n = n;
            spec.seed = config.design.seed + r;
            DesignSpec test_spec = spec;
            test_spec.n = config.n_test;
            test_spec.seed = config.design.seed + kTestDesignSeedOffset + r;
            TruthSpec truth = config.truth;
            truth.seed += r;
            const Vector theta = project_truth(generate_truth(truth), d);
            tt.x = generate_design(spec);
            tt.x_test = generate_design(test_spec);
            tt.y = sample_linear_model(tt.x, theta, config.noise_variance, config.base_seed + r);
            tt.y_test = sample_linear_model(tt.x_test, theta, config.noise_variance,
                                            config.base_seed + kTestNoiseSeedOffset + r);
        }
        const SpectralDecomposition decomp = spectral_decompose(tt.x, kThin);
        for (SelectionScheme scheme : config.schemes)
            outcomes[cell].push_back(
                evaluate_scheme(scheme, tt, decomp, config, grid, default_sigma2, config.base_seed + r));
    });

    std::vector<ComparisonRow> rows;
    for (std::size_t k = 0; k < config.ratios.size(); ++k) {
        for (std::size_t s = 0; s < config.schemes.size(); ++s) {
            ComparisonRow row;
            row.ratio = config.ratios[k];
            row.n = used_n[k];
            row.d = d;
            row.scheme = to_string(config.schemes[s]);
            std::vector<double> lambdas, sigmas;
            for (std::size_t r = 0; r < replicates; ++r) {
                const SchemeOutcome& o = outcomes[k * replicates + r][s];
                row.test_mse.push_back(o.mse);
                if (o.lambda) lambdas.push_back(*o.lambda);
                if (o.prac_sigma2) sigmas.push_back(*o.prac_sigma2);
            }
            row.mse = summarize(row.test_mse);
            row.median_mse = median(row.test_mse);
            if (!lambdas.empty()) row.selected_lambda = summarize(lambdas);
            if (!sigmas.empty()) row.prac_noise_variance = summarize(sigmas);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace {

bool is_missing(const std::string& cell) {
    static const char* tokens[] = {"", "NA", "na", "N/A", "NaN", "nan", "?", "null", "NULL"};
    for (const char* t : tokens)
        if (cell == t) return true;
    return false;
}

}  // namespace

IngestResult ingest_dataset(const std::string& path, const std::string& target_column,
                            bool standardize) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
    const std::vector<std::string> header = io::split_csv_line(line);
    const auto target_it = std::find(header.begin(), header.end(), target_column);
    if (target_it == header.end())
        throw InputError("target column '" + target_column + "' not found in '" + path + "'");
    const auto target_idx = static_cast<std::size_t>(target_it - header.begin());

    IngestResult out;
    out.target = target_column;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> cells = io::split_csv_line(line);
        if (cells.size() != header.size())
            throw InputError(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " cells, found " +
                             std::to_string(cells.size()));
        std::vector<double> row;
        bool missing = false;
        for (const std::string& cell : cells) {
            if (is_missing(cell)) {
                missing = true;
                break;
            }
            try {
                row.push_back(io::parse_number(cell));
            } catch (const InputError&) {
                throw InputError(path + ":" + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
            }
        }
        if (missing) {
            ++out.dropped_rows;
            continue;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("'" + path + "' has no complete rows");

    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix table(n, static_cast<Eigen::Index>(header.size()));
    for (Eigen::Index i = 0; i < n; ++i)
        for (std::size_t j = 0; j < header.size(); ++j)
            table(i, static_cast<Eigen::Index>(j)) = rows[static_cast<std::size_t>(i)][j];

    Vector response = table.col(static_cast<Eigen::Index>(target_idx));
    std::vector<Eigen::Index> keep;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j == target_idx) continue;
        const auto col = static_cast<Eigen::Index>(j);
        if (standardize) {
            const double mean = table.col(col).mean();
            const double sd = std::sqrt((table.col(col).array() - mean).square().mean());
            if (!(sd > 0.0)) {
                out.dropped_columns.push_back(header[j]);
                out.warnings.push_back("dropped zero-variance column '" + header[j] + "'");
                continue;
            }
            table.col(col) = (table.col(col).array() - mean) / sd;
        }
        keep.push_back(col);
        out.feature_names.push_back(header[j]);
    }
    if (keep.empty()) throw InputError("no covariate columns remain in '" + path + "'");
    if (standardize) {
        const double mean = response.mean();
        const double sd = std::sqrt((response.array() - mean).square().mean());
        if (!(sd > 0.0)) throw InputError("target column '" + target_column + "' has zero variance");
        response = (response.array() - mean) / sd;
    }
    out.data.covariates = table(Eigen::all, keep);
    out.data.response = response;
    if (out.dropped_rows > 0)
        out.warnings.push_back("dropped " + std::to_string(out.dropped_rows) + " rows with missing values");
    return out;
}

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::vector<std::string>& feature_names, const std::string& target) {
    if (static_cast<Eigen::Index>(feature_names.size()) != data.features())
        throw InputError("feature name count does not match covariate columns");
    std::string text;
    for (const auto& name : feature_names) text += name + ",";
    text += target + "\n";
    for (Eigen::Index i = 0; i < data.samples(); ++i) {
        for (Eigen::Index j = 0; j < data.features(); ++j) text += io::format_number(data.covariates(i, j)) + ",";
        text += io::format_number(data.response(i)) + "\n";
    }
    io::write_text_file(path, text);
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? io::format_number(*v) : std::string(); }

std::string cells(const std::optional<Stat>& s) {
    return s ? io::format_number(s->mean) + "," + io::format_number(s->std_error) : std::string(",");
}

}  // namespace

std::string curve_csv(const std::string& experiment, const std::vector<CurvePoint>& points) {
    std::string text =
        "experiment,d,n,estimator,replicates,test_mse_mean,test_mse_stderr,bias,variance,"
        "mdl_comp_mean,mdl_comp_stderr,ropt_mean,ropt_stderr,approx_ropt_mean,approx_ropt_stderr,"
        "selected_lambda_mean,selected_lambda_stderr,scaling_mdl_comp,scaling_ropt\n";
    for (const CurvePoint& p : points) {
        text += experiment + "," + std::to_string(p.d) + "," + std::to_string(p.n) + "," + p.estimator + "," +
                std::to_string(p.replicates) + "," + cells(p.test_mse) + "," + cell(p.bias) + "," +
                cell(p.variance) + "," + cells(p.mdl_comp) + "," + cells(p.ropt) + "," +
                cells(p.approx_ropt) + "," + cells(p.selected_lambda) + "," + cell(p.scaling_mdl_comp) +
                "," + cell(p.scaling_ropt) + "\n";
    }
    return text;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::string text =
        "experiment,d,n,ratio,estimator,replicates,test_mse_mean,test_mse_stderr,test_mse_median,"
        "selected_lambda_mean,selected_lambda_stderr,prac_sigma2_mean\n";
    for (const ComparisonRow& r : rows) {
        text += "compare," + std::to_string(r.d) + "," + std::to_string(r.n) + "," + io::format_number(r.ratio) +
                "," + r.scheme + "," + std::to_string(r.test_mse.size()) + "," + io::format_number(r.mse.mean) +
                "," + io::format_number(r.mse.std_error) + "," + io::format_number(r.median_mse) + "," +
                cells(r.selected_lambda) + "," +
                (r.prac_noise_variance ? io::format_number(r.prac_noise_variance->mean) : std::string()) + "\n";
    }
    return text;
}

}  // namespace mdlcomp
