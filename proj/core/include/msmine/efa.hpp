#pragma once

#include "msmine/language_matrix.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace msmine {

/// Data-adequacy and factor-count diagnostics for one analysis run.
struct EfaDiagnostics {
    double kmo = 0.0;
    double bartlett_chi2 = 0.0;
    int bartlett_df = 0;
    double bartlett_p = 1.0;
    std::vector<double> observed_eigenvalues;  // descending
    std::vector<double> simulated_eigenvalues; // descending, means over simulations
    int retained_factors = 0;
    std::vector<std::string> analyzed_columns; // after zero-variance pruning
    std::vector<std::string> dropped_columns;  // zero-variance
};

struct BartlettResult {
    double chi2 = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Pearson correlation matrix of the columns of `data` (rows = observations).
/// Requires >= 2 rows and no zero-variance columns; diagonal is exactly 1.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& data);

/// Column indices with (numerically) zero variance.
std::vector<int> zero_variance_columns(const Eigen::MatrixXd& data);

/// Copy of `data` without the given columns.
Eigen::MatrixXd drop_columns(const Eigen::MatrixXd& data, const std::vector<int>& columns);

/// Sphericity test: chi2 = -(n - 1 - (2p + 5) / 6) * ln det R, df = p(p-1)/2.
/// Requires n > p; throws AnalysisError when det R <= 0 numerically (advises
/// pruning collinear columns).
BartlettResult bartlett_test(const Eigen::MatrixXd& correlation, int sample_size);

/// Kaiser-Meyer-Olkin sampling adequacy in [0, 1]: squared correlations
/// against squared correlations plus squared anti-image partial correlations.
/// Throws AnalysisError when R is singular.
double kmo_test(const Eigen::MatrixXd& correlation);

/// Eigenvalues of a symmetric matrix, descending.
std::vector<double> correlation_eigenvalues(const Eigen::MatrixXd& correlation);

/// Horn-style parallel analysis plus the adequacy tests, on raw data
/// (rows = observations, columns = variables). Zero-variance columns are
/// dropped first and reported. Simulations draw i.i.d. standard normal
/// matrices of the same shape; each simulation's RNG stream depends only on
/// (seed, simulation index), so results are schedule-independent.
EfaDiagnostics run_efa_diagnostics(const Eigen::MatrixXd& data,
                                   const std::vector<std::string>& column_names, int n_sims,
                                   std::uint64_t seed);

/// Convenience overload with V0..Vn column names.
EfaDiagnostics parallel_analysis(const Eigen::MatrixXd& data, int n_sims, std::uint64_t seed);

struct ExtractionOptions {
    double tol = 1e-6;
    int max_iter = 200;
};

struct ExtractionResult {
    Eigen::MatrixXd loadings; // p x k
    Eigen::VectorXd communalities;
    int iterations = 0;
    bool converged = false;
    bool heywood = false; // some communality hit 1 and was clipped
};

/// Principal-axis factoring with iterated communalities. Initial
/// communalities are squared multiple correlations (falling back to the
/// largest absolute off-diagonal correlation when R is singular).
ExtractionResult extract_factors(const Eigen::MatrixXd& correlation, int n_factors,
                                 const ExtractionOptions& options = {});

struct VarimaxOptions {
    double tol = 1e-6;
    int max_iter = 1000;
    bool kaiser_normalize = true;
};

struct VarimaxResult {
    Eigen::MatrixXd loadings; // rotated, sign convention applied
    Eigen::MatrixXd rotation; // k x k orthogonal
    std::vector<double> criterion_history; // per sweep, on the optimized scale
    int iterations = 0;
    bool converged = false;
};

/// Sum over factors of the variance of squared loadings.
double varimax_criterion(const Eigen::MatrixXd& loadings);

/// Orthogonal varimax rotation via pairwise planar rotations, with optional
/// Kaiser row normalization (applied before, undone after). Each factor's
/// largest-magnitude loading ends up positive.
VarimaxResult varimax_rotate(const Eigen::MatrixXd& loadings, const VarimaxOptions& options = {});

/// Rotated factor model over the analyzed columns.
struct FactorModel {
    std::vector<std::string> variables; // analyzed column names
    Eigen::MatrixXd loadings;           // variables x factors
    Eigen::VectorXd communalities;
    double stable_threshold = 0.4;
    bool extraction_converged = true;
    bool heywood = false;
};

} // namespace msmine
