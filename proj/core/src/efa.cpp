#include "msmine/efa.hpp"

#include "msmine/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace msmine {

namespace {

constexpr double kSingularEigen = 1e-12;

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_symmetric(const Eigen::MatrixXd& m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw AnalysisError("eigendecomposition failed");
    return solver;
}

// Deterministic standard-normal stream: explicit Box-Muller on top of
// mt19937_64 bits, so the sequence does not depend on the C++ runtime's
// std::normal_distribution implementation.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    double operator()()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double next_uniform()
    {
        // in (0, 1]: 53 mantissa bits, never 0 so log() is safe
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index)
{
    // splitmix64 finalizer over (seed, index)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::vector<int> zero_variance_columns(const Eigen::MatrixXd& data)
{
    std::vector<int> out;
    for (int c = 0; c < data.cols(); ++c) {
        double mean = data.col(c).mean();
        double ss = (data.col(c).array() - mean).square().sum();
        if (ss <= kSingularEigen * std::max<double>(1, data.rows()))
            out.push_back(c);
    }
    return out;
}

Eigen::MatrixXd drop_columns(const Eigen::MatrixXd& data, const std::vector<int>& columns)
{
    if (columns.empty())
        return data;
    std::vector<bool> drop(data.cols(), false);
    for (int c : columns)
        drop[c] = true;
    Eigen::MatrixXd out(data.rows(), data.cols() - static_cast<int>(columns.size()));
    int j = 0;
    for (int c = 0; c < data.cols(); ++c)
        if (!drop[c])
            out.col(j++) = data.col(c);
    return out;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& data)
{
    const int n = static_cast<int>(data.rows());
    const int p = static_cast<int>(data.cols());
    if (n < 2)
        throw AnalysisError("correlation requires at least 2 observations");

    Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    Eigen::VectorXd norms(p);
    for (int c = 0; c < p; ++c) {
        double ss = centered.col(c).squaredNorm();
        if (ss <= 0.0)
            throw AnalysisError("zero-variance column " + std::to_string(c) +
                                " in correlation input; drop it first");
        norms(c) = std::sqrt(ss);
    }

    Eigen::MatrixXd r = centered.transpose() * centered;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            r(i, j) /= norms(i) * norms(j);

    // force exact symmetry and a unit diagonal
    r = ((r + r.transpose()) / 2.0).eval();
    r.diagonal().setOnes();
    return r;
}

BartlettResult bartlett_test(const Eigen::MatrixXd& correlation, int sample_size)
{
    const int p = static_cast<int>(correlation.cols());
    if (sample_size <= p)
        throw AnalysisError("Bartlett test needs more observations than variables (n=" +
                            std::to_string(sample_size) + ", p=" + std::to_string(p) + ")");

    auto solver = solve_symmetric(correlation);
    double log_det = 0.0;
    for (int i = 0; i < p; ++i) {
        double ev = solver.eigenvalues()(i);
        if (ev <= kSingularEigen)
            throw AnalysisError("correlation matrix is numerically singular (det <= 0); "
                                "prune collinear columns before testing");
        log_det += std::log(ev);
    }

    BartlettResult res;
    res.chi2 = -(sample_size - 1 - (2.0 * p + 5.0) / 6.0) * log_det;
    if (res.chi2 < 0.0)
        res.chi2 = 0.0; // log_det can be +epsilon on an identity matrix
    res.df = p * (p - 1) / 2;
    boost::math::chi_squared dist(static_cast<double>(res.df));
    res.p_value = boost::math::cdf(boost::math::complement(dist, res.chi2));
    return res;
}

double kmo_test(const Eigen::MatrixXd& correlation)
{
    const int p = static_cast<int>(correlation.cols());
    auto solver = solve_symmetric(correlation);
    if (solver.eigenvalues().minCoeff() <= kSingularEigen)
        throw AnalysisError("correlation matrix is singular; KMO undefined, prune collinear columns");

    Eigen::MatrixXd inv = solver.eigenvectors() *
                          solver.eigenvalues().cwiseInverse().asDiagonal() *
                          solver.eigenvectors().transpose();

    double sum_r2 = 0.0;
    double sum_q2 = 0.0;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i == j)
                continue;
            double q = -inv(i, j) / std::sqrt(inv(i, i) * inv(j, j));
            sum_r2 += correlation(i, j) * correlation(i, j);
            sum_q2 += q * q;
        }
    }
    if (sum_r2 + sum_q2 == 0.0)
        return 0.0;
    return sum_r2 / (sum_r2 + sum_q2);
}

std::vector<double> correlation_eigenvalues(const Eigen::MatrixXd& correlation)
{
    auto solver = solve_symmetric(correlation);
    std::vector<double> ev(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

EfaDiagnostics run_efa_diagnostics(const Eigen::MatrixXd& data,
                                   const std::vector<std::string>& column_names, int n_sims,
                                   std::uint64_t seed)
{
    if (n_sims < 1)
        throw AnalysisError("parallel analysis needs at least 1 simulation");
    if (column_names.size() != static_cast<std::size_t>(data.cols()))
        throw AnalysisError("column name count does not match data width");

    EfaDiagnostics diag;
    auto dead = zero_variance_columns(data);
    for (int c : dead)
        diag.dropped_columns.push_back(column_names[c]);
    Eigen::MatrixXd live = drop_columns(data, dead);
    {
        std::vector<bool> drop(data.cols(), false);
        for (int c : dead)
            drop[c] = true;
        for (int c = 0; c < data.cols(); ++c)
            if (!drop[c])
                diag.analyzed_columns.push_back(column_names[c]);
    }

    const int n = static_cast<int>(live.rows());
    const int p = static_cast<int>(live.cols());
    if (p < 2)
        throw AnalysisError("fewer than 2 variable columns left after pruning");

    Eigen::MatrixXd corr = correlation_matrix(live);
    diag.observed_eigenvalues = correlation_eigenvalues(corr);

    auto bart = bartlett_test(corr, n);
    diag.bartlett_chi2 = bart.chi2;
    diag.bartlett_df = bart.df;
    diag.bartlett_p = bart.p_value;
    diag.kmo = kmo_test(corr);

    Eigen::VectorXd sums = Eigen::VectorXd::Zero(p);
    for (int s = 0; s < n_sims; ++s) {
        NormalSampler normal(mix_seed(seed, static_cast<std::uint64_t>(s)));
        Eigen::MatrixXd sim(n, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j)
                sim(i, j) = normal();
        auto ev = correlation_eigenvalues(correlation_matrix(sim));
        for (int i = 0; i < p; ++i)
            sums(i) += ev[i];
    }
    diag.simulated_eigenvalues.resize(p);
    for (int i = 0; i < p; ++i)
        diag.simulated_eigenvalues[i] = sums(i) / n_sims;

    diag.retained_factors = 0;
    for (int i = 0; i < p; ++i) {
        if (diag.observed_eigenvalues[i] > diag.simulated_eigenvalues[i])
            ++diag.retained_factors;
        else
            break;
    }
    return diag;
}

EfaDiagnostics parallel_analysis(const Eigen::MatrixXd& data, int n_sims, std::uint64_t seed)
{
    std::vector<std::string> names;
    names.reserve(data.cols());
    for (int c = 0; c < data.cols(); ++c)
        names.push_back("V" + std::to_string(c));
    return run_efa_diagnostics(data, names, n_sims, seed);
}

ExtractionResult extract_factors(const Eigen::MatrixXd& correlation, int n_factors,
                                 const ExtractionOptions& options)
{
    const int p = static_cast<int>(correlation.cols());
    if (n_factors < 1 || n_factors >= p)
        throw AnalysisError("factor count must satisfy 1 <= k < p");

    // initial communalities: squared multiple correlations when R is
    // invertible, else the largest absolute off-diagonal correlation
    Eigen::VectorXd h(p);
    auto solver = solve_symmetric(correlation);
    if (solver.eigenvalues().minCoeff() > kSingularEigen) {
        Eigen::MatrixXd inv = solver.eigenvectors() *
                              solver.eigenvalues().cwiseInverse().asDiagonal() *
                              solver.eigenvectors().transpose();
        for (int i = 0; i < p; ++i)
            h(i) = 1.0 - 1.0 / inv(i, i);
    } else {
        for (int i = 0; i < p; ++i) {
            double best = 0.0;
            for (int j = 0; j < p; ++j)
                if (j != i)
                    best = std::max(best, std::abs(correlation(i, j)));
            h(i) = best;
        }
    }
    h = h.cwiseMax(0.0).cwiseMin(1.0);

    ExtractionResult result;
    Eigen::MatrixXd reduced = correlation;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        reduced.diagonal() = h;
        auto eig = solve_symmetric(reduced);

        // top k eigenpairs, descending
        Eigen::MatrixXd loadings(p, n_factors);
        for (int f = 0; f < n_factors; ++f) {
            int idx = p - 1 - f;
            double ev = std::max(eig.eigenvalues()(idx), 0.0);
            loadings.col(f) = eig.eigenvectors().col(idx) * std::sqrt(ev);
        }

        Eigen::VectorXd h_next = loadings.array().square().rowwise().sum().matrix();
        for (int i = 0; i < p; ++i) {
            if (h_next(i) > 1.0) {
                h_next(i) = 1.0;
                result.heywood = true;
            }
        }

        double delta = (h_next - h).cwiseAbs().maxCoeff();
        h = h_next;
        result.loadings = std::move(loadings);
        result.iterations = iter;
        if (delta < options.tol) {
            result.converged = true;
            break;
        }
    }
    result.communalities =
        result.loadings.array().square().rowwise().sum().min(1.0).matrix();
    return result;
}

double varimax_criterion(const Eigen::MatrixXd& loadings)
{
    double crit = 0.0;
    for (int f = 0; f < loadings.cols(); ++f) {
        Eigen::ArrayXd sq = loadings.col(f).array().square();
        double mean_sq = sq.mean();
        crit += sq.square().mean() - mean_sq * mean_sq;
    }
    return crit;
}

VarimaxResult varimax_rotate(const Eigen::MatrixXd& loadings, const VarimaxOptions& options)
{
    const int p = static_cast<int>(loadings.rows());
    const int k = static_cast<int>(loadings.cols());
    if (k < 1)
        throw AnalysisError("varimax needs at least one factor");

    VarimaxResult result;
    result.rotation = Eigen::MatrixXd::Identity(k, k);

    Eigen::MatrixXd work = loadings;
    Eigen::VectorXd row_norms = Eigen::VectorXd::Ones(p);
    if (options.kaiser_normalize) {
        for (int i = 0; i < p; ++i) {
            double norm = work.row(i).norm();
            if (norm > 0.0) {
                row_norms(i) = norm;
                work.row(i) /= norm;
            }
        }
    }

    result.criterion_history.push_back(varimax_criterion(work));

    if (k == 1) {
        result.converged = true;
    } else {
        for (int sweep = 1; sweep <= options.max_iter; ++sweep) {
            for (int a = 0; a < k - 1; ++a) {
                for (int b = a + 1; b < k; ++b) {
                    Eigen::ArrayXd x = work.col(a).array();
                    Eigen::ArrayXd y = work.col(b).array();
                    Eigen::ArrayXd u = x.square() - y.square();
                    Eigen::ArrayXd v = 2.0 * x * y;
                    double A = u.sum();
                    double B = v.sum();
                    double C = (u.square() - v.square()).sum();
                    double D = 2.0 * (u * v).sum();

                    double num = D - 2.0 * A * B / p;
                    double den = C - (A * A - B * B) / p;
                    if (std::abs(num) < 1e-15 && std::abs(den) < 1e-15)
                        continue;
                    double angle = 0.25 * std::atan2(num, den);
                    if (std::abs(angle) < 1e-15)
                        continue;

                    double c = std::cos(angle);
                    double s = std::sin(angle);
                    Eigen::VectorXd ca = work.col(a);
                    work.col(a) = c * ca + s * work.col(b);
                    work.col(b) = -s * ca + c * work.col(b).eval();
                    Eigen::VectorXd ra = result.rotation.col(a);
                    result.rotation.col(a) = c * ra + s * result.rotation.col(b);
                    result.rotation.col(b) = -s * ra + c * result.rotation.col(b).eval();
                }
            }
            result.iterations = sweep;
            double crit = varimax_criterion(work);
            double prev = result.criterion_history.back();
            result.criterion_history.push_back(crit);
            if (crit - prev < options.tol) {
                result.converged = true;
                break;
            }
        }
    }

    if (options.kaiser_normalize)
        work.array().colwise() *= row_norms.array();

    // sign convention: the largest-magnitude loading of each factor is positive
    for (int f = 0; f < k; ++f) {
        int idx = 0;
        work.col(f).cwiseAbs().maxCoeff(&idx);
        if (work(idx, f) < 0.0) {
            work.col(f) = -work.col(f);
            result.rotation.col(f) = -result.rotation.col(f);
        }
    }

    result.loadings = std::move(work);
    return result;
}

} // namespace msmine
