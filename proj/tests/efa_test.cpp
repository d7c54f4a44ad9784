#include "msmine/efa.hpp"
#include "msmine/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace msmine;

namespace {

// Cyclic Jacobi eigenvalue iteration for symmetric matrices; deliberately
// separate from the production eigensolver so the two can check each other.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a)
{
    const int n = static_cast<int>(a.rows());
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                off += a(i, j) * a(i, j);
        if (off < 1e-24)
            break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-18)
                    continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i)
        ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

// Textbook two-pass Pearson correlation of two columns.
double pearson_two_pass(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    const int n = static_cast<int>(x.size());
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += x(i);
        my += y(i);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxy += (x(i) - mx) * (y(i) - my);
        sxx += (x(i) - mx) * (x(i) - mx);
        syy += (y(i) - my) * (y(i) - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

Eigen::MatrixXd equicorrelation(int p, double rho)
{
    Eigen::MatrixXd r = Eigen::MatrixXd::Constant(p, p, rho);
    r.diagonal().setOnes();
    return r;
}

// test-local gaussian stream, independent of the library's sampler
class TestNormal {
public:
    explicit TestNormal(unsigned seed) : rng_(seed), dist_(0.0, 1.0) {}
    double operator()() { return dist_(rng_); }

private:
    std::mt19937 rng_;
    std::normal_distribution<double> dist_;
};

Eigen::MatrixXd random_matrix(int rows, int cols, unsigned seed)
{
    TestNormal g(seed);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = g();
    return m;
}

// Data drawn from x = L f + sqrt(psi) e with standard-normal factors/noise.
Eigen::MatrixXd sample_factor_model(const Eigen::MatrixXd& loadings, int n, unsigned seed)
{
    TestNormal g(seed);
    const int p = static_cast<int>(loadings.rows());
    const int k = static_cast<int>(loadings.cols());
    Eigen::VectorXd psi =
        (Eigen::VectorXd::Ones(p) - loadings.array().square().rowwise().sum().matrix())
            .cwiseMax(0.0);
    Eigen::MatrixXd data(n, p);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd f(k);
        for (int j = 0; j < k; ++j)
            f(j) = g();
        for (int v = 0; v < p; ++v)
            data(i, v) = loadings.row(v).dot(f) + std::sqrt(psi(v)) * g();
    }
    return data;
}

// exhaustive single-angle rotation search for two factors
double grid_search_best_criterion(const Eigen::MatrixXd& loadings, double step_degrees)
{
    double best = -1.0;
    for (double deg = 0.0; deg < 90.0; deg += step_degrees) {
        double a = deg * M_PI / 180.0;
        Eigen::Matrix2d rot;
        rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        best = std::max(best, varimax_criterion(loadings * rot));
    }
    return best;
}

} // namespace

TEST_SUITE_BEGIN("efa");

TEST_CASE("correlation of identical and negated columns")
{
    Eigen::MatrixXd data(5, 3);
    data << 1, 1, -1, 2, 2, -2, 4, 4, -4, 3, 3, -3, 7, 7, -7;
    auto r = correlation_matrix(data);
    CHECK(r(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r(0, 2) == doctest::Approx(-1.0).epsilon(1e-12));
    for (int i = 0; i < 3; ++i)
        CHECK(r(i, i) == 1.0);
}

TEST_CASE("correlation matches a two-pass oracle on a hand dataset")
{
    Eigen::MatrixXd data(6, 3);
    data << 1.0, 2.0, 0.5,
            2.0, 1.5, 0.6,
            3.0, 4.0, 0.1,
            4.0, 3.5, 0.9,
            5.0, 6.5, 0.2,
            6.0, 5.0, 0.8;
    auto r = correlation_matrix(data);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double expected = i == j ? 1.0 : pearson_two_pass(data.col(i), data.col(j));
            CHECK(r(i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
    CHECK((r - r.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("correlation input validation")
{
    Eigen::MatrixXd one_row(1, 2);
    one_row << 1, 2;
    CHECK_THROWS_AS(correlation_matrix(one_row), AnalysisError);

    Eigen::MatrixXd constant(4, 2);
    constant << 1, 1, 1, 2, 1, 3, 1, 4;
    CHECK_THROWS_WITH_AS(correlation_matrix(constant), doctest::Contains("zero-variance"),
                         AnalysisError);
}

TEST_CASE("zero-variance detection and column dropping")
{
    Eigen::MatrixXd data(4, 3);
    data << 1, 5, 1, 1, 6, 2, 1, 7, 3, 1, 8, 4;
    auto dead = zero_variance_columns(data);
    CHECK(dead == std::vector<int>{0});
    auto live = drop_columns(data, dead);
    CHECK(live.cols() == 2);
    CHECK(live(0, 0) == 5);
    CHECK(live(3, 1) == 4);
}

TEST_CASE("bartlett test")
{
    SUBCASE("identity correlation gives chi2 0 and p 1")
    {
        auto r = bartlett_test(Eigen::MatrixXd::Identity(5, 5), 100);
        CHECK(r.chi2 == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.df == 10);
    }
    SUBCASE("closed form for p=2, r=0.5, n=100")
    {
        Eigen::MatrixXd r = equicorrelation(2, 0.5);
        auto res = bartlett_test(r, 100);
        double expected = -(99.0 - 9.0 / 6.0) * std::log(0.75);
        CHECK(res.chi2 == doctest::Approx(expected).epsilon(1e-10));
        CHECK(res.df == 1);
        CHECK(res.p_value < 1e-6); // strongly non-spherical
    }
    SUBCASE("df for 33 variables is 528")
    {
        auto res = bartlett_test(Eigen::MatrixXd::Identity(33, 33), 1536);
        CHECK(res.df == 528);
    }
    SUBCASE("singular correlation is rejected with pruning advice")
    {
        Eigen::MatrixXd r = equicorrelation(3, 1.0); // rank 1
        CHECK_THROWS_WITH_AS(bartlett_test(r, 100), doctest::Contains("prune"), AnalysisError);
    }
    SUBCASE("requires n > p")
    {
        CHECK_THROWS_AS(bartlett_test(Eigen::MatrixXd::Identity(5, 5), 5), AnalysisError);
    }
}

TEST_CASE("kmo test")
{
    SUBCASE("any 2-variable correlation gives exactly 0.5")
    {
        for (double rho : {0.1, 0.5, 0.9, -0.4, -0.8}) {
            CHECK(kmo_test(equicorrelation(2, rho)) == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
    SUBCASE("strong within-block structure scores above 0.5")
    {
        Eigen::MatrixXd r = Eigen::MatrixXd::Identity(6, 6);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) {
                    r(i, j) = 0.8;
                    r(i + 3, j + 3) = 0.8;
                }
        CHECK(kmo_test(r) > 0.5);
    }
    SUBCASE("singular correlation is an error")
    {
        CHECK_THROWS_AS(kmo_test(equicorrelation(4, 1.0)), AnalysisError);
    }
}

TEST_CASE("equicorrelation eigenvalues match the closed form and the jacobi oracle")
{
    const int p = 6;
    const double rho = 0.4;
    auto r = equicorrelation(p, rho);

    auto observed = correlation_eigenvalues(r);
    auto brute = jacobi_eigenvalues(r);

    REQUIRE(observed.size() == static_cast<std::size_t>(p));
    CHECK(observed[0] == doctest::Approx(1.0 + (p - 1) * rho).epsilon(1e-8));
    CHECK(brute[0] == doctest::Approx(1.0 + (p - 1) * rho).epsilon(1e-8));
    for (int i = 1; i < p; ++i) {
        CHECK(observed[i] == doctest::Approx(1.0 - rho).epsilon(1e-8));
        CHECK(brute[i] == doctest::Approx(1.0 - rho).epsilon(1e-8));
    }
}

TEST_CASE("correlation eigenvalues sum to the variable count")
{
    auto data = random_matrix(60, 7, 123);
    auto r = correlation_matrix(data);
    auto ev = correlation_eigenvalues(r);
    double sum = 0;
    for (double v : ev)
        sum += v;
    CHECK(sum == doctest::Approx(7.0).epsilon(1e-8));

    // and they agree with the jacobi oracle pointwise
    auto brute = jacobi_eigenvalues(r);
    for (std::size_t i = 0; i < ev.size(); ++i)
        CHECK(ev[i] == doctest::Approx(brute[i]).epsilon(1e-9));
}

TEST_CASE("parallel analysis on pure noise retains almost nothing")
{
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        auto data = random_matrix(300, 6, seed);
        auto diag = parallel_analysis(data, 50, seed * 977);
        CHECK(diag.retained_factors <= 2);
    }
}

TEST_CASE("parallel analysis recovers two strong orthogonal factors")
{
    Eigen::MatrixXd loadings = Eigen::MatrixXd::Zero(8, 2);
    for (int i = 0; i < 4; ++i)
        loadings(i, 0) = 0.8;
    for (int i = 4; i < 8; ++i)
        loadings(i, 1) = 0.8;
    auto data = sample_factor_model(loadings, 1000, 42);
    auto diag = parallel_analysis(data, 100, 7);
    CHECK(diag.retained_factors == 2);
    CHECK(diag.bartlett_p < 1e-10);
    CHECK(diag.kmo > 0.5);
}

TEST_CASE("parallel analysis is deterministic for a fixed seed")
{
    auto data = random_matrix(100, 5, 9);
    auto a = parallel_analysis(data, 30, 1234);
    auto b = parallel_analysis(data, 30, 1234);
    CHECK(a.retained_factors == b.retained_factors);
    REQUIRE(a.simulated_eigenvalues.size() == b.simulated_eigenvalues.size());
    for (std::size_t i = 0; i < a.simulated_eigenvalues.size(); ++i)
        CHECK(a.simulated_eigenvalues[i] == b.simulated_eigenvalues[i]); // bitwise

    auto c = parallel_analysis(data, 30, 4321);
    bool all_equal = true;
    for (std::size_t i = 0; i < c.simulated_eigenvalues.size(); ++i)
        all_equal = all_equal && c.simulated_eigenvalues[i] == a.simulated_eigenvalues[i];
    CHECK_FALSE(all_equal); // a different seed actually changes the draw
}

TEST_CASE("diagnostics report dropped zero-variance columns")
{
    Eigen::MatrixXd data = random_matrix(50, 3, 17);
    Eigen::MatrixXd padded(50, 4);
    padded.col(0) = data.col(0);
    padded.col(1) = Eigen::VectorXd::Constant(50, 0.25);
    padded.col(2) = data.col(1);
    padded.col(3) = data.col(2);
    auto diag = run_efa_diagnostics(padded, {"a", "flat", "b", "c"}, 20, 5);
    CHECK(diag.dropped_columns == std::vector<std::string>{"flat"});
    CHECK(diag.analyzed_columns == std::vector<std::string>{"a", "b", "c"});
    CHECK(diag.bartlett_df == 3);
}

TEST_CASE("extract_factors on an identity correlation finds nothing")
{
    auto res = extract_factors(Eigen::MatrixXd::Identity(5, 5), 1);
    CHECK(res.loadings.cwiseAbs().maxCoeff() < 1e-6);
    CHECK(res.converged);
}

TEST_CASE("extract_factors recovers a one-factor model")
{
    Eigen::VectorXd l(5);
    l << 0.9, 0.8, 0.7, 0.6, 0.5;
    Eigen::MatrixXd r = l * l.transpose();
    for (int i = 0; i < 5; ++i)
        r(i, i) = 1.0; // implied uniquenesses on the diagonal

    auto res = extract_factors(r, 1);
    REQUIRE(res.loadings.cols() == 1);
    Eigen::VectorXd got = res.loadings.col(0);
    if (got(0) < 0)
        got = -got;
    for (int i = 0; i < 5; ++i)
        CHECK(got(i) == doctest::Approx(l(i)).epsilon(1e-3));
    CHECK(res.converged);
}

TEST_CASE("extract_factors on an equicorrelation matrix is symmetric across variables")
{
    auto res = extract_factors(equicorrelation(4, 0.6), 1);
    Eigen::VectorXd got = res.loadings.col(0);
    for (int i = 1; i < 4; ++i)
        CHECK(got(i) == doctest::Approx(got(0)).epsilon(1e-6));
    // the single factor explains the common eigenvalue direction
    CHECK(std::abs(got(0)) > 0.5);
}

TEST_CASE("extract_factors validates the factor count")
{
    CHECK_THROWS_AS(extract_factors(equicorrelation(4, 0.3), 0), AnalysisError);
    CHECK_THROWS_AS(extract_factors(equicorrelation(4, 0.3), 4), AnalysisError);
}

TEST_CASE("varimax with one factor only applies the sign convention")
{
    Eigen::MatrixXd l(4, 1);
    l << -0.9, -0.5, 0.1, -0.2;
    auto res = varimax_rotate(l);
    CHECK(res.loadings(0, 0) == doctest::Approx(0.9));
    CHECK(res.loadings(2, 0) == doctest::Approx(-0.1));
    CHECK(res.converged);
}

TEST_CASE("varimax leaves a simple structure alone")
{
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(6, 2);
    for (int i = 0; i < 3; ++i)
        l(i, 0) = 0.8;
    for (int i = 3; i < 6; ++i)
        l(i, 1) = 0.7;
    auto res = varimax_rotate(l);
    double diff = std::min((res.loadings - l).cwiseAbs().maxCoeff(),
                           (res.loadings - [&] {
                               Eigen::MatrixXd swapped(6, 2);
                               swapped.col(0) = l.col(1);
                               swapped.col(1) = l.col(0);
                               return swapped;
                           }())
                               .cwiseAbs()
                               .maxCoeff());
    CHECK(diff < 1e-9);
}

TEST_CASE("varimax matches an exhaustive grid search for two factors")
{
    for (unsigned seed : {100u, 200u, 300u}) {
        Eigen::MatrixXd l = random_matrix(6, 2, seed) * 0.4;

        VarimaxOptions opts;
        opts.kaiser_normalize = false; // optimize the raw criterion, same as the grid
        auto res = varimax_rotate(l, opts);

        double before = varimax_criterion(l);
        double rotated = varimax_criterion(res.loadings);
        CHECK(rotated >= before - 1e-12);

        double grid = grid_search_best_criterion(l, 0.1);
        CHECK(rotated >= grid - 1e-4);
        CHECK(rotated <= grid + 1e-4 + 1e-9);
    }
}

TEST_CASE("varimax preserves communalities and the rotation is orthogonal")
{
    for (unsigned seed : {7u, 8u, 9u, 10u}) {
        Eigen::MatrixXd l = random_matrix(9, 3, seed) * 0.3;
        auto res = varimax_rotate(l);

        Eigen::VectorXd before = l.array().square().rowwise().sum().matrix();
        Eigen::VectorXd after = res.loadings.array().square().rowwise().sum().matrix();
        CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);

        Eigen::MatrixXd rtr = res.rotation.transpose() * res.rotation;
        CHECK((rtr - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);

        // loadings transform as L * R
        CHECK((l * res.rotation - res.loadings).cwiseAbs().maxCoeff() < 1e-10);

        for (std::size_t i = 1; i < res.criterion_history.size(); ++i)
            CHECK(res.criterion_history[i] >= res.criterion_history[i - 1] - 1e-12);
    }
}

TEST_CASE("varimax sign convention makes each factor's peak loading positive")
{
    Eigen::MatrixXd l = random_matrix(8, 3, 55) * 0.4;
    auto res = varimax_rotate(l);
    for (int f = 0; f < 3; ++f) {
        int idx = 0;
        res.loadings.col(f).cwiseAbs().maxCoeff(&idx);
        CHECK(res.loadings(idx, f) > 0.0);
    }
}

TEST_CASE("frozen dataset matches values from an independent numerical tool")
{
    // 12 observations x 4 variables; expected values below were computed
    // outside this codebase with numpy/scipy implementations of the same
    // definitions and frozen here.
    Eigen::MatrixXd data(12, 4);
    data << 2, 3, 1, 5,
            4, 5, 2, 4,
            6, 7, 2, 3,
            8, 9, 4, 6,
            1, 2, 1, 2,
            3, 3, 2, 1,
            5, 6, 3, 7,
            7, 8, 3, 8,
            2, 4, 1, 4,
            6, 5, 3, 5,
            9, 9, 5, 9,
            4, 4, 2, 3;

    auto r = correlation_matrix(data);
    CHECK(r(0, 1) == doctest::Approx(0.951381085171).epsilon(1e-10));
    CHECK(r(0, 2) == doctest::Approx(0.935511560771).epsilon(1e-10));
    CHECK(r(0, 3) == doctest::Approx(0.718187078966).epsilon(1e-10));
    CHECK(r(1, 2) == doctest::Approx(0.855703507725).epsilon(1e-10));
    CHECK(r(1, 3) == doctest::Approx(0.758888372784).epsilon(1e-10));
    CHECK(r(2, 3) == doctest::Approx(0.735559452728).epsilon(1e-10));

    auto bart = bartlett_test(r, 12);
    CHECK(bart.chi2 == doctest::Approx(49.379949000502).epsilon(1e-8));
    CHECK(bart.df == 6);
    CHECK(bart.p_value == doctest::Approx(6.257995059706e-09).epsilon(1e-6));

    CHECK(kmo_test(r) == doctest::Approx(0.667981307802).epsilon(1e-9));

    auto extracted = extract_factors(r, 2);
    CHECK(extracted.converged);
    CHECK(extracted.heywood); // two variables saturate at communality 1
    const double expected_comm[4] = {1.0, 0.8861311667, 0.8528617533, 1.0};
    for (int i = 0; i < 4; ++i)
        CHECK(extracted.communalities(i) == doctest::Approx(expected_comm[i]).epsilon(1e-6));
    const double expected_abs[4][2] = {{0.9788460125, 0.2428946594},
                                       {0.9359433043, 0.1007040107},
                                       {0.9164183789, 0.1141889144},
                                       {0.8629987211, 0.5059735575}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(extracted.loadings(i, j)) ==
                  doctest::Approx(expected_abs[i][j]).epsilon(1e-5));

    auto rotated = varimax_rotate(extracted.loadings);
    const double expected_rot[4][2] = {{0.9416017977, 0.3612802046},
                                       {0.8250174785, 0.4532960699},
                                       {0.8167299835, 0.4310613500},
                                       {0.4178669579, 0.9089352227}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(rotated.loadings(i, j) == doctest::Approx(expected_rot[i][j]).epsilon(1e-4));
    CHECK(varimax_criterion(rotated.loadings) == doctest::Approx(0.149037769443).epsilon(1e-8));
}

TEST_CASE("factor model reconstruction improves with more factors")
{
    Eigen::MatrixXd loadings = Eigen::MatrixXd::Zero(8, 2);
    for (int i = 0; i < 4; ++i)
        loadings(i, 0) = 0.75;
    for (int i = 4; i < 8; ++i)
        loadings(i, 1) = 0.75;
    loadings(2, 1) = 0.3;
    auto data = sample_factor_model(loadings, 2000, 31);
    auto r = correlation_matrix(data);

    auto off_max_residual = [&](int k) {
        auto res = extract_factors(r, k);
        Eigen::MatrixXd implied = res.loadings * res.loadings.transpose();
        double worst = 0.0;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                if (i != j)
                    worst = std::max(worst, std::abs(r(i, j) - implied(i, j)));
        return worst;
    };

    double with_one = off_max_residual(1);
    double with_two = off_max_residual(2);
    CHECK(with_two < with_one);
    CHECK(with_two < 0.1);
}

TEST_SUITE_END();
