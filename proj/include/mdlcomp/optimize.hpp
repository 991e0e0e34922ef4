#pragma once

#include <functional>
#include <string>
#include <vector>

namespace mdlcomp {

/// count values equally spaced in log10 between lo and hi. Both endpoints
/// are reproduced exactly.
std::vector<double> log_grid(double lo, double hi, int count);

/// Named lambda grids used by the selection experiments.
enum class GridPreset {
    sim20,   // 20 values, 1e-3 .. 1e6
    pmlb10,  // 10 values, 1e-3 .. 1e3
    fmri40,  // 40 values, 1e0 .. 1e6
};

std::vector<double> preset_grid(GridPreset preset);
GridPreset parse_grid_preset(const std::string& name);
const char* to_string(GridPreset preset);

/// Parses "lo:hi:count" into a log grid.
std::vector<double> parse_grid(const std::string& text);

struct ScalarMinimum {
    double argmin = 0.0;
    double value = 0.0;
};

/// Golden-section search for a unimodal f on [lo, hi]; stops when the
/// bracket is narrower than rel_tol * (|x| + abs_tol).
ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double rel_tol = 1e-10, double abs_tol = 1e-12,
                             int max_iter = 500);

/// Index of the smallest value; ties go to the smaller key. Infinite or
/// NaN values never win over finite ones. Returns -1 when nothing is finite.
int argmin_smallest_key(const std::vector<double>& keys, const std::vector<double>& values);

/// Grid scan followed by golden-section refinement in log(lambda) on the
/// bracket around the best grid point. When the best grid point is an
/// endpoint of the (sorted) grid it is returned unrefined and on_endpoint is
/// set.
struct LogGridMinimum {
    double argmin = 0.0;
    double value = 0.0;
    bool on_endpoint = false;
    std::vector<double> grid;     // sorted ascending
    std::vector<double> objective;
};

LogGridMinimum minimize_on_log_grid(const std::function<double(double)>& f,
                                    std::vector<double> grid, bool refine = true,
                                    double rel_tol = 1e-10);

}  // namespace mdlcomp
