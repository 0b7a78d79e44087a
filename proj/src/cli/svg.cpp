#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

namespace mas::cli {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::vector<std::size_t> decimate(std::size_t count, std::size_t max_points) {
    std::vector<std::size_t> idx;
    if (count <= max_points) {
        for (std::size_t i = 0; i < count; ++i) idx.push_back(i);
        return idx;
    }
    // Evenly spaced, first and last kept.
    for (std::size_t m = 0; m < max_points; ++m) idx.push_back(m * (count - 1) / (max_points - 1));
    return idx;
}

}  // namespace

void write_trajectories_svg(std::ostream& out, const std::vector<Trajectory>& runs, const std::string& title,
                            std::size_t max_points) {
    max_points = std::max<std::size_t>(max_points, 2);
    double k_max = 1.0;
    double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
    for (const auto& t : runs) {
        k_max = std::max(k_max, static_cast<double>(t.iterations));
        for (const auto& p : t.points) {
            y_lo = std::min(y_lo, p.x.min());
            y_hi = std::max(y_hi, p.x.max());
        }
    }
    if (!std::isfinite(y_lo)) y_lo = 0.0, y_hi = 1.0;
    if (y_hi - y_lo < 1e-12) y_lo -= 0.5, y_hi += 0.5;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double k) { return kLeft + pw * k / k_max; };
    auto sy = [&](double y) { return kTop + ph * (1.0 - (y - y_lo) / (y_hi - y_lo)); };

    out << fmt::format(R"svg(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)svg",
                       kWidth, kHeight, kWidth, kHeight)
        << '\n';
    out << R"svg(<rect width="100%" height="100%" fill="white"/>)svg" << '\n';
    out << fmt::format(R"svg(<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>)svg",
                       kLeft + pw / 2, escape(title))
        << '\n';
    out << fmt::format(R"svg(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)svg", kLeft, kTop, pw,
                       ph)
        << '\n';

    for (int t = 0; t <= 5; ++t) {
        const double k = k_max * t / 5.0, y = y_lo + (y_hi - y_lo) * t / 5.0;
        out << fmt::format(R"svg(<line x1="{0:.3f}" y1="{1}" x2="{0:.3f}" y2="{2}" stroke="black"/>)svg", sx(k), kTop + ph,
                           kTop + ph + 5)
            << '\n';
        out << fmt::format(
                   R"svg(<text x="{:.3f}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{:.4g}</text>)svg",
                   sx(k), kTop + ph + 18, k)
            << '\n';
        out << fmt::format(R"svg(<line x1="{}" y1="{:.3f}" x2="{}" y2="{:.3f}" stroke="black"/>)svg", kLeft - 5, sy(y), kLeft,
                           sy(y))
            << '\n';
        out << fmt::format(
                   R"svg(<text x="{}" y="{:.3f}" text-anchor="end" font-family="sans-serif" font-size="11">{:.4g}</text>)svg",
                   kLeft - 8, sy(y) + 4, y)
            << '\n';
    }
    out << fmt::format(R"svg(<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">k</text>)svg",
                       kLeft + pw / 2, kHeight - 12)
        << '\n';
    out << fmt::format(
               R"svg(<text x="18" y="{0}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {0})">x_i(k)</text>)svg",
               kTop + ph / 2)
        << '\n';

    for (const auto& t : runs) {
        if (t.points.empty()) continue;
        const std::size_t n = t.points.front().x.size();
        const auto idx = decimate(t.points.size(), max_points);
        for (std::size_t i = 0; i < n; ++i) {
            out << fmt::format(R"svg(<polyline fill="none" stroke="{}" stroke-width="1" stroke-opacity="0.7" points=")svg",
                               kPalette[i % kPalette.size()]);
            for (std::size_t m = 0; m < idx.size(); ++m) {
                const auto& p = t.points[idx[m]];
                out << fmt::format("{}{:.3f},{:.3f}", m ? " " : "", sx(static_cast<double>(p.k)), sy(p.x[i]));
            }
            out << "\"/>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace mas::cli
