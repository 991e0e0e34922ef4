#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdlcomp/linalg.hpp"

namespace mdlcomp {

enum class Estimator { ols, ridge_cv, ridge_prac, zero };

const char* to_string(Estimator e);
Estimator parse_estimator(const std::string& name);

/// Seed offset of the held-out design relative to the training design.
inline constexpr std::uint64_t kTestDesignSeedOffset = 1'000'003;
/// Seed offset of held-out noise relative to the training noise.
inline constexpr std::uint64_t kTestNoiseSeedOffset = 2'000'003;

struct ExperimentConfig {
    DesignSpec design;
    TruthSpec truth;
    double noise_variance = 0.01;
    std::vector<Eigen::Index> d_grid;
    int n_replicates = 50;
    std::uint64_t base_seed = 0;
    std::vector<Estimator> estimators = {Estimator::ols, Estimator::ridge_cv};
    std::vector<double> lambda_grid;  // empty: the sim20 preset
    Eigen::Index n_test = 1000;
    int threads = 1;

    void validate() const;
    std::vector<double> resolved_grid() const;
};

struct Stat {
    double mean = 0.0;
    double std_error = 0.0;  // sample sd / sqrt(count); 0 for a single value
};

Stat summarize(const std::vector<double>& values);

struct CurvePoint {
    Eigen::Index d = 0;
    Eigen::Index n = 0;
    std::string estimator;
    int replicates = 0;
    std::optional<Stat> test_mse;
    std::optional<double> bias;
    std::optional<double> variance;
    std::optional<Stat> mdl_comp;
    std::optional<Stat> ropt;
    std::optional<Stat> approx_ropt;
    std::optional<Stat> selected_lambda;
    std::optional<double> scaling_mdl_comp;
    std::optional<double> scaling_ropt;
};

/// Fixed design and truth, training noise redrawn per replicate (seed
/// base_seed + r); bias and variance measured against the noiseless held-out
/// response. Points are ordered by (d, estimator).
std::vector<CurvePoint> run_bias_variance(const ExperimentConfig& config);

/// Oracle MDL-COMP and R_opt of the first d columns, averaged over
/// replicates r that redraw the design (seed design.seed + r) and the truth
/// (seed truth.seed + r). Noise plays no role.
std::vector<CurvePoint> run_mdl_scaling(const ExperimentConfig& config);

enum class SelectionScheme { ridge_prac, ridge_loocv, ridge_kfold, ols, zero };

const char* to_string(SelectionScheme s);
SelectionScheme parse_selection_scheme(const std::string& name);

struct ComparisonConfig {
    /// Simulated source; ignored when a dataset is passed.
    DesignSpec design;
    TruthSpec truth;
    double noise_variance = 1.0;

    std::vector<double> ratios = {1.0};  // target d / n
    int replicates = 3;
    std::uint64_t base_seed = 0;
    std::vector<double> lambda_grid;  // empty: the sim20 preset
    std::vector<SelectionScheme> schemes = {SelectionScheme::ridge_prac, SelectionScheme::ridge_loocv,
                                            SelectionScheme::ridge_kfold, SelectionScheme::ols,
                                            SelectionScheme::zero};
    int kfold = 5;
    Eigen::Index n_test = 1000;
    double test_fraction = 0.25;
    /// sigma^2 used by the Prac-MDL-COMP objective. Defaults to the
    /// simulation's noise variance, or 1 for real data.
    std::optional<double> prac_noise_variance;
    /// Use the plug-in estimate instead (see estimate_noise_variance).
    bool estimate_prac_noise = false;
    int threads = 1;

    std::vector<double> resolved_grid() const;
};

struct ComparisonRow {
    double ratio = 0.0;
    Eigen::Index n = 0;
    Eigen::Index d = 0;
    std::string scheme;
    std::vector<double> test_mse;  // per replicate
    Stat mse;
    double median_mse = 0.0;
    std::optional<Stat> selected_lambda;
    std::optional<Stat> prac_noise_variance;
};

/// Trains every scheme on each replicate and scores it by held-out MSE.
/// Without a dataset, data are simulated per replicate with a fresh noisy
/// test set of n_test rows. With a dataset, a seeded test_fraction holdout is
/// split off once and each replicate subsamples the remaining rows to reach
/// n = d / ratio (capped at the available rows).
std::vector<ComparisonRow> run_selector_comparison(const ComparisonConfig& config,
                                                   const Dataset* dataset = nullptr);

struct IngestResult {
    Dataset data;
    std::vector<std::string> feature_names;
    std::string target;
    std::size_t dropped_rows = 0;
    std::vector<std::string> dropped_columns;
    std::vector<std::string> warnings;
};

/// Reads a headered CSV. Rows with missing cells (empty, NA, NaN, ?, null)
/// are dropped and counted. standardize centers every column and divides by
/// its population standard deviation; zero-variance covariates are dropped.
IngestResult ingest_dataset(const std::string& path, const std::string& target_column,
                            bool standardize);

/// Headered CSV writer matching ingest_dataset's format.
void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::vector<std::string>& feature_names, const std::string& target);

std::string curve_csv(const std::string& experiment, const std::vector<CurvePoint>& points);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

}  // namespace mdlcomp
