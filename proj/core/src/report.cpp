#include "msmine/report.hpp"

#include "msmine/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace msmine {

void write_file_atomic(const std::string& path, const std::string& content)
{
    std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError("cannot write " + tmp);
        out << content;
        out.flush();
        if (!out)
            throw ConfigError("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string format_fixed(double value, int digits)
{
    if (std::abs(value) < 0.5 * std::pow(10.0, -digits))
        value = 0.0; // avoid "-0.000000"
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

namespace {

// trims trailing zeros so integral stats print as integers
std::string format_stat(double v)
{
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    return format_fixed(v, 6);
}

} // namespace

BoxplotRow make_boxplot_row(const std::string& label, const std::vector<double>& values)
{
    BoxplotRow row;
    row.label = label;
    row.summary = five_number_summary(values);
    row.outliers = upper_outliers(values, row.summary);
    return row;
}

std::string boxplot_csv(const std::vector<BoxplotRow>& rows)
{
    std::ostringstream out;
    out << "project,min,q1,median,q3,max,outliers\n";
    for (const auto& row : rows) {
        out << row.label << ',' << format_stat(row.summary.min) << ',' << format_stat(row.summary.q1)
            << ',' << format_stat(row.summary.median) << ',' << format_stat(row.summary.q3) << ','
            << format_stat(row.summary.max) << ',';
        for (std::size_t i = 0; i < row.outliers.size(); ++i) {
            if (i)
                out << '|';
            out << format_stat(row.outliers[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string radar_svg(const std::vector<std::string>& roles,
                      const std::map<std::string, std::map<std::string, double>>& class_means)
{
    const int size = 480;
    const double cx = size / 2.0;
    const double cy = size / 2.0;
    const double radius = size * 0.34;
    const std::size_t n = roles.size();

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    auto point = [&](std::size_t axis, double value) {
        double angle = -M_PI / 2.0 + 2.0 * M_PI * static_cast<double>(axis) / static_cast<double>(n);
        double x = cx + radius * value * std::cos(angle);
        double y = cy + radius * value * std::sin(angle);
        return format_fixed(x, 2) + "," + format_fixed(y, 2);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (int ring = 1; ring <= 4; ++ring) {
        double v = ring / 4.0;
        svg << "  <polygon fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\" points=\"";
        for (std::size_t a = 0; a < n; ++a)
            svg << point(a, v) << ' ';
        svg << "\"/>\n";
    }
    for (std::size_t a = 0; a < n; ++a) {
        double angle = -M_PI / 2.0 + 2.0 * M_PI * static_cast<double>(a) / static_cast<double>(n);
        svg << "  <line stroke=\"#cccccc\" stroke-width=\"1\" x1=\"" << format_fixed(cx, 2)
            << "\" y1=\"" << format_fixed(cy, 2) << "\" x2=\""
            << format_fixed(cx + radius * std::cos(angle), 2) << "\" y2=\""
            << format_fixed(cy + radius * std::sin(angle), 2) << "\"/>\n";
        double lx = cx + (radius + 16) * std::cos(angle);
        double ly = cy + (radius + 16) * std::sin(angle);
        const char* anchor = std::cos(angle) > 0.25 ? "start" : (std::cos(angle) < -0.25 ? "end" : "middle");
        svg << "  <text x=\"" << format_fixed(lx, 2) << "\" y=\"" << format_fixed(ly + 4, 2)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" << anchor << "\">"
            << roles[a] << "</text>\n";
    }

    int color = 0;
    int legend_y = 16;
    for (const auto& [cls, means] : class_means) {
        const char* stroke = palette[color % 5];
        svg << "  <polygon fill=\"" << stroke << "\" fill-opacity=\"0.12\" stroke=\"" << stroke
            << "\" stroke-width=\"2\" points=\"";
        for (std::size_t a = 0; a < n; ++a) {
            auto it = means.find(roles[a]);
            double v = it == means.end() ? 0.0 : it->second;
            svg << point(a, std::clamp(v, 0.0, 1.0)) << ' ';
        }
        svg << "\"/>\n";
        svg << "  <rect x=\"8\" y=\"" << (legend_y - 10) << "\" width=\"12\" height=\"12\" fill=\""
            << stroke << "\"/>\n";
        svg << "  <text x=\"24\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << cls << "</text>\n";
        legend_y += 18;
        ++color;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace msmine
