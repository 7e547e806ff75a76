#pragma once

// One-dimensional root finding and maximization used across the solver and
// the strategy searches.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace pricing::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Final bracket of a bisection: the predicate is false at `below` and true at
/// `above`.
struct Bracket {
  double below;
  double above;
};

/// Bisection on a predicate that is false at `lo` and true at `hi` (monotone in
/// between).
Bracket bisect_threshold(const std::function<bool(double)>& holds, double lo,
                        double hi, double relative_tolerance = 1e-13,
                        int max_iterations = 400);

/// Same as bisect_threshold but the search is carried out in log space, which
/// suits quantities spanning several decades (rates, bandwidths). Requires
/// 0 < lo < hi.
Bracket bisect_threshold_log(const std::function<bool(double)>& holds, double lo,
                            double hi, double relative_tolerance = 1e-13,
                            int max_iterations = 400);

struct Extremum {
  double argument;
  double value;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// The returned point is the best of the converged interior point and the two
/// end points, so monotone objectives resolve to the right boundary.
Extremum golden_section_max(const std::function<double(double)>& f, double lo,
                            double hi, double tolerance = 1e-12,
                            int max_iterations = 300);

/// Golden-section maximization over log(x) for 0 < lo < hi.
Extremum golden_section_max_log(const std::function<double(double)>& f,
                                double lo, double hi,
                                double relative_tolerance = 1e-12);

/// n points, geometrically spaced from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t n);

}  // namespace pricing::numeric
