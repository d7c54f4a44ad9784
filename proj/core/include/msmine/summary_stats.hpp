#pragma once

#include <vector>

namespace msmine {

struct FiveNumberSummary {
    double min = 0;
    double q1 = 0;
    double median = 0;
    double q3 = 0;
    double max = 0;

    double iqr() const { return q3 - q1; }
};

/// Linear-interpolation quantile (the common plotting default): for sorted
/// values v and q in [0,1], index h = (n-1)q, result v[h] interpolated.
/// Throws AnalysisError on empty input.
double quantile(std::vector<double> values, double q);

FiveNumberSummary five_number_summary(const std::vector<double>& values);

/// Values strictly above q3 + 1.5*IQR, ascending.
std::vector<double> upper_outliers(const std::vector<double>& values, const FiveNumberSummary& summary);

} // namespace msmine
