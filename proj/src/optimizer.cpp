#include "iqcc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "iqcc/errors.hpp"

namespace iqcc {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string describe(const Vec& t) {
  std::ostringstream out;
  out.precision(17);
  out << '[';
  for (std::size_t i = 0; i < t.size(); ++i) out << (i ? ", " : "") << t[i];
  out << ']';
  return out.str();
}

/// Counts evaluations and rejects non-finite output.
class Evaluator {
 public:
  Evaluator(const ObjectiveWithGradient& f, int budget) : f_(f), budget_(budget) {}

  double operator()(const Vec& t, Vec& g) {
    g.assign(t.size(), 0.0);
    const double v = f_(t, g);
    ++count_;
    if (!std::isfinite(v) || !std::all_of(g.begin(), g.end(), [](double x) { return std::isfinite(x); })) {
      throw NumericError("non-finite objective or gradient at t = " + describe(t));
    }
    return v;
  }

  int count() const noexcept { return count_; }
  bool exhausted() const noexcept { return count_ >= budget_; }

 private:
  const ObjectiveWithGradient& f_;
  int budget_;
  int count_ = 0;
};

/// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db), clamped
/// into the interior of [a, b] (either order).
double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  double x = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom != 0.0) x = b - (b - a) * (db + d2 - d1) / denom;
  }
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(x) || x < lo + margin || x > hi - margin) x = 0.5 * (a + b);
  return x;
}

struct LinePoint {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;
  Vec t;
  Vec g;
};

/// Strong-Wolfe search along p from (t, f0, g0). Returns the best point
/// found with f below f0; alpha = 0 signals failure.
LinePoint line_search(Evaluator& eval, const Vec& t, double f0, const Vec& g0, const Vec& p, double alpha0) {
  constexpr double c1 = 1e-4;
  constexpr double c2 = 0.9;
  constexpr int kMaxSteps = 30;
  const double slope0 = dot(g0, p);

  LinePoint best{0.0, f0, slope0, t, g0};
  auto probe = [&](double alpha) {
    LinePoint pt;
    pt.alpha = alpha;
    pt.t = t;
    for (std::size_t i = 0; i < t.size(); ++i) pt.t[i] += alpha * p[i];
    pt.f = eval(pt.t, pt.g);
    pt.slope = dot(pt.g, p);
    if (pt.f < best.f) best = pt;
    return pt;
  };
  auto sufficient = [&](const LinePoint& pt) { return pt.f <= f0 + c1 * pt.alpha * slope0; };
  auto curvature = [&](const LinePoint& pt) { return std::abs(pt.slope) <= c2 * std::abs(slope0); };

  auto zoom = [&](LinePoint lo, LinePoint hi) -> LinePoint {
    for (int i = 0; i < kMaxSteps && !eval.exhausted(); ++i) {
      const double alpha = cubic_step(lo.alpha, lo.f, lo.slope, hi.alpha, hi.f, hi.slope);
      LinePoint pt = probe(alpha);
      if (!sufficient(pt) || pt.f >= lo.f) {
        hi = std::move(pt);
      } else {
        if (curvature(pt)) return pt;
        if (pt.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(pt);
      }
      if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, lo.alpha)) break;
    }
    return best;
  };

  LinePoint prev{0.0, f0, slope0, t, g0};
  double alpha = alpha0;
  for (int i = 0; i < kMaxSteps && !eval.exhausted(); ++i) {
    LinePoint pt = probe(alpha);
    if (!sufficient(pt) || (i > 0 && pt.f >= prev.f)) return zoom(prev, pt);
    if (curvature(pt)) return pt;
    if (pt.slope >= 0.0) return zoom(pt, prev);
    prev = std::move(pt);
    alpha *= 2.0;
  }
  return best;
}

}  // namespace

OptimizationResult minimize(const ObjectiveWithGradient& objective, std::span<const double> t0,
                            const OptimizationConfig& cfg) {
  if (!(cfg.gradient_tolerance > 0.0) || cfg.max_evaluations <= 0 || cfg.memory_depth <= 0) {
    throw InvalidArgumentError("optimization configuration fields must be positive");
  }
  Evaluator eval(objective, cfg.max_evaluations);
  OptimizationResult result;
  Vec t(t0.begin(), t0.end());
  Vec g;
  double f = eval(t, g);
  result.accepted_energies.push_back(f);

  std::deque<std::pair<Vec, Vec>> history;  // (s, y)
  const std::size_t n = t.size();
  bool first = true;
  while (inf_norm(g) > cfg.gradient_tolerance && !eval.exhausted()) {
    // two-loop recursion: p = -H g
    Vec q = g;
    std::vector<double> alphas(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      const auto& [s, y] = history[k];
      alphas[k] = dot(s, q) / dot(y, s);
      for (std::size_t i = 0; i < n; ++i) q[i] -= alphas[k] * y[i];
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      const double gamma = dot(s, y) / dot(y, y);
      for (double& v : q) v *= gamma;
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const auto& [s, y] = history[k];
      const double beta = dot(y, q) / dot(y, s);
      for (std::size_t i = 0; i < n; ++i) q[i] += s[i] * (alphas[k] - beta);
    }
    Vec p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = -q[i];
    if (dot(p, g) >= 0.0) {  // not a descent direction: reset memory
      history.clear();
      for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
      first = true;
    }
    const double alpha0 = first ? std::min(1.0, 1.0 / std::max(inf_norm(g), 1e-300)) : 1.0;
    LinePoint pt = line_search(eval, t, f, g, p, alpha0);
    if (pt.alpha == 0.0 || !(pt.f < f)) break;  // no progress possible

    Vec s(n);
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = pt.t[i] - t[i];
      y[i] = pt.g[i] - g[i];
    }
    if (dot(s, y) > 1e-16 * std::sqrt(dot(s, s) * dot(y, y))) {
      history.emplace_back(std::move(s), std::move(y));
      if (history.size() > static_cast<std::size_t>(cfg.memory_depth)) history.pop_front();
    }
    t = std::move(pt.t);
    g = std::move(pt.g);
    f = pt.f;
    result.accepted_energies.push_back(f);
    first = false;
  }
  result.t_opt = std::move(t);
  result.energy = f;
  result.evaluations = eval.count();
  result.converged = inf_norm(g) <= cfg.gradient_tolerance;
  return result;
}

OptimizationResult minimize(const std::function<double(std::span<const double>)>& objective,
                            const std::function<std::vector<double>(std::span<const double>)>& gradient,
                            std::span<const double> t0, const OptimizationConfig& cfg) {
  const ObjectiveWithGradient combined = [&](std::span<const double> t, std::span<double> g) {
    const auto grad = gradient(t);
    if (grad.size() != g.size()) throw DimensionError("gradient length does not match the parameter count");
    std::copy(grad.begin(), grad.end(), g.begin());
    return objective(t);
  };
  return minimize(combined, t0, cfg);
}

}  // namespace iqcc
