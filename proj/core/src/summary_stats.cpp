#include "msmine/summary_stats.hpp"

#include "msmine/errors.hpp"

#include <algorithm>
#include <cmath>

namespace msmine {

double quantile(std::vector<double> values, double q)
{
    if (values.empty())
        throw AnalysisError("quantile of empty distribution");
    std::sort(values.begin(), values.end());
    double h = (static_cast<double>(values.size()) - 1.0) * q;
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = static_cast<std::size_t>(std::ceil(h));
    if (lo == hi)
        return values[lo];
    double w = h - static_cast<double>(lo);
    return values[lo] * (1.0 - w) + values[hi] * w;
}

FiveNumberSummary five_number_summary(const std::vector<double>& values)
{
    if (values.empty())
        throw AnalysisError("five-number summary of empty distribution");
    FiveNumberSummary s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    s.q1 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.q3 = quantile(values, 0.75);
    return s;
}

std::vector<double> upper_outliers(const std::vector<double>& values, const FiveNumberSummary& summary)
{
    double fence = summary.q3 + 1.5 * summary.iqr();
    std::vector<double> out;
    for (double v : values)
        if (v > fence)
            out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace msmine
