#include "prospect_pricing/numeric.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace pricing::numeric {

Bracket bisect_threshold(const std::function<bool(double)>& holds, double lo,
                        double hi, double relative_tolerance,
                        int max_iterations) {
  if (!(lo < hi)) throw std::invalid_argument("bisect_threshold: empty bracket");
  for (int i = 0; i < max_iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= relative_tolerance * std::max(std::abs(hi), std::abs(lo)))
      break;
  }
  return {lo, hi};
}

Bracket bisect_threshold_log(const std::function<bool(double)>& holds, double lo,
                            double hi, double relative_tolerance,
                            int max_iterations) {
  if (!(lo > 0.0 && lo < hi))
    throw std::invalid_argument("bisect_threshold_log: invalid bracket");
  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  for (int i = 0; i < max_iterations; ++i) {
    const double mid = 0.5 * (log_lo + log_hi);
    if (mid <= log_lo || mid >= log_hi) break;
    if (holds(std::exp(mid))) {
      log_hi = mid;
    } else {
      log_lo = mid;
    }
    if (log_hi - log_lo <= relative_tolerance) break;
  }
  return {std::exp(log_lo), std::exp(log_hi)};
}

Extremum golden_section_max(const std::function<double(double)>& f, double lo,
                            double hi, double tolerance, int max_iterations) {
  if (lo > hi) std::swap(lo, hi);
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < max_iterations && (b - a) > tolerance; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  Extremum best = f1 >= f2 ? Extremum{x1, f1} : Extremum{x2, f2};
  if (f_lo > best.value) best = {lo, f_lo};
  if (f_hi > best.value) best = {hi, f_hi};
  return best;
}

Extremum golden_section_max_log(const std::function<double(double)>& f,
                                double lo, double hi,
                                double relative_tolerance) {
  if (!(lo > 0.0 && hi > 0.0))
    throw std::invalid_argument("golden_section_max_log: non-positive bracket");
  const auto in_log = [&f](double t) { return f(std::exp(t)); };
  const Extremum e =
      golden_section_max(in_log, std::log(lo), std::log(hi), relative_tolerance);
  return {std::exp(e.argument), e.value};
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  if (n == 1) return {lo};
  out.reserve(n);
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(lo * std::exp(step * static_cast<double>(i)));
  out.back() = hi;
  return out;
}

}  // namespace pricing::numeric
