#include "mdlcomp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mdlcomp/types.hpp"

namespace mdlcomp {

std::vector<double> log_grid(double lo, double hi, int count) {
    if (count < 1) throw InputError("grid needs at least one point");
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
        throw InputError("log grid needs 0 < lo <= hi");
    if (count == 1) return {lo};
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int k = 0; k < count; ++k)
        grid[static_cast<std::size_t>(k)] = std::pow(10.0, a + (b - a) * k / (count - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<double> preset_grid(GridPreset preset) {
    switch (preset) {
    case GridPreset::sim20: return log_grid(1e-3, 1e6, 20);
    case GridPreset::pmlb10: return log_grid(1e-3, 1e3, 10);
    case GridPreset::fmri40: return log_grid(1e0, 1e6, 40);
    }
    throw InputError("unknown grid preset");
}

GridPreset parse_grid_preset(const std::string& name) {
    if (name == "sim20") return GridPreset::sim20;
    if (name == "pmlb10") return GridPreset::pmlb10;
    if (name == "fmri40") return GridPreset::fmri40;
    throw InputError("unknown grid preset '" + name + "' (expected sim20, pmlb10 or fmri40)");
}

const char* to_string(GridPreset preset) {
    switch (preset) {
    case GridPreset::sim20: return "sim20";
    case GridPreset::pmlb10: return "pmlb10";
    case GridPreset::fmri40: return "fmri40";
    }
    return "unknown";
}

std::vector<double> parse_grid(const std::string& text) {
    std::istringstream in(text);
    std::string lo, hi, count;
    if (!std::getline(in, lo, ':') || !std::getline(in, hi, ':') || !std::getline(in, count))
        throw InputError("grid must look like lo:hi:count, got '" + text + "'");
    try {
        std::size_t used = 0;
        const double l = std::stod(lo, &used);
        if (used != lo.size()) throw InputError("bad grid lower bound");
        const double h = std::stod(hi, &used);
        if (used != hi.size()) throw InputError("bad grid upper bound");
        const int c = std::stoi(count, &used);
        if (used != count.size()) throw InputError("bad grid count");
        return log_grid(l, h, c);
    } catch (const std::logic_error&) {
        throw InputError("grid must look like lo:hi:count, got '" + text + "'");
    }
}

ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double rel_tol, double abs_tol, int max_iter) {
    if (hi < lo) std::swap(lo, hi);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(b - a) <= rel_tol * (std::abs(c) + std::abs(d)) + abs_tol) break;
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

int argmin_smallest_key(const std::vector<double>& keys, const std::vector<double>& values) {
    int best = -1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (std::isnan(v) || std::isinf(v)) continue;
        if (best < 0) {
            best = static_cast<int>(i);
            continue;
        }
        const double bv = values[static_cast<std::size_t>(best)];
        if (v < bv || (v == bv && keys[i] < keys[static_cast<std::size_t>(best)]))
            best = static_cast<int>(i);
    }
    return best;
}

LogGridMinimum minimize_on_log_grid(const std::function<double(double)>& f,
                                    std::vector<double> grid, bool refine, double rel_tol) {
    if (grid.empty()) throw InputError("lambda grid is empty");
    for (double g : grid)
        if (!(g > 0.0) || !std::isfinite(g)) throw InputError("lambda grid values must be positive");
    std::sort(grid.begin(), grid.end());

    LogGridMinimum out;
    out.grid = grid;
    out.objective.reserve(grid.size());
    for (double g : grid) out.objective.push_back(f(g));

    const int best = argmin_smallest_key(out.grid, out.objective);
    if (best < 0) throw NumericError("objective is not finite anywhere on the grid");
    const auto k = static_cast<std::size_t>(best);
    out.argmin = grid[k];
    out.value = out.objective[k];
    out.on_endpoint = grid.size() > 1 && (k == 0 || k + 1 == grid.size());
    if (!refine || grid.size() < 3 || out.on_endpoint) return out;

    auto in_log = [&f](double t) { return f(std::exp(t)); };
    const ScalarMinimum m =
        golden_section(in_log, std::log(grid[k - 1]), std::log(grid[k + 1]), 0.0, rel_tol);
    if (m.value < out.value) {
        out.argmin = std::exp(m.argmin);
        out.value = m.value;
    }
    return out;
}

}  // namespace mdlcomp
