#pragma once

#include "msmine/summary_stats.hpp"

#include <map>
#include <string>
#include <vector>

namespace msmine {

/// Writes via a temp file + rename so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

struct BoxplotRow {
    std::string label; // project name
    FiveNumberSummary summary;
    std::vector<double> outliers; // above q3 + 1.5 IQR
};

/// CSV: label,min,q1,median,q3,max,outliers ("|"-separated values).
std::string boxplot_csv(const std::vector<BoxplotRow>& rows);

BoxplotRow make_boxplot_row(const std::string& label, const std::vector<double>& values);

/// Static radar chart of per-class mean role scores. Axis order follows
/// `roles`; every class polygon shares the same axes.
std::string radar_svg(const std::vector<std::string>& roles,
                      const std::map<std::string, std::map<std::string, double>>& class_means);

/// Fixed-precision decimal with `digits` places, locale-independent.
std::string format_fixed(double value, int digits);

} // namespace msmine
