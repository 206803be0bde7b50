#include "qbound/direct_search.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "qbound/errors.hpp"
#include "qbound/splitmix.hpp"

namespace qbound {

namespace {

using Point = std::vector<double>;

struct Vertex {
  Point x;
  double f;
};

class Evaluator {
 public:
  Evaluator(const std::function<double(std::span<const double>)>& f, std::size_t budget,
            std::size_t workers)
      : f_(f), budget_(budget), workers_(std::max<std::size_t>(1, workers)) {}

  std::size_t used() const { return used_; }
  std::size_t remaining() const { return budget_ - used_; }
  bool exhausted() const { return used_ >= budget_; }

  double operator()(const Point& x) {
    ++used_;
    return sanitize(f_(x));
  }

  // Evaluates as many points as the budget allows; the rest get +inf.
  std::vector<double> batch(const std::vector<Point>& xs) {
    const std::size_t n = std::min(xs.size(), remaining());
    std::vector<double> out(xs.size(), std::numeric_limits<double>::infinity());
    if (workers_ == 1 || n < 2) {
      for (std::size_t i = 0; i < n; ++i) out[i] = sanitize(f_(xs[i]));
    } else {
      std::vector<std::future<void>> jobs;
      const std::size_t w = std::min(workers_, n);
      for (std::size_t k = 0; k < w; ++k) {
        jobs.push_back(std::async(std::launch::async, [&, k] {
          for (std::size_t i = k; i < n; i += w) out[i] = sanitize(f_(xs[i]));
        }));
      }
      for (auto& j : jobs) j.get();
    }
    used_ += n;
    return out;
  }

 private:
  static double sanitize(double v) {
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }

  const std::function<double(std::span<const double>)>& f_;
  std::size_t budget_;
  std::size_t workers_;
  std::size_t used_ = 0;
};

Point affine(const Point& a, const Point& b, double t) {  // a + t (b - a)
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

double diameter(const std::vector<Vertex>& s) {
  double d = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i)
    for (std::size_t k = 0; k < s[0].x.size(); ++k) d = std::max(d, std::abs(s[i].x[k] - s[0].x[k]));
  return d;
}

bool converged(const std::vector<Vertex>& s) {
  const double spread = s.back().f - s.front().f;
  const double scale = std::max(1.0, std::abs(s.front().f));
  return spread <= 1e-14 * scale || diameter(s) <= 1e-10;
}

// One Nelder-Mead run from an initial simplex whose first vertex is already
// evaluated. Returns false when the budget ran out before convergence.
bool nelder_mead(std::vector<Vertex>& simplex, Evaluator& eval) {
  const std::size_t n = simplex.size() - 1;
  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  order();
  while (!converged(simplex)) {
    if (eval.exhausted()) return false;

    Point centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i].x[k] / static_cast<double>(n);

    Vertex& worst = simplex[n];
    Point xr = affine(centroid, worst.x, -1.0);
    const double fr = eval(xr);

    if (fr < simplex[0].f) {
      if (eval.exhausted()) {
        worst = {xr, fr};
      } else {
        Point xe = affine(centroid, worst.x, -2.0);
        const double fe = eval(xe);
        worst = fe < fr ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
      }
    } else if (fr < simplex[n - 1].f) {
      worst = {std::move(xr), fr};
    } else {
      if (eval.exhausted()) {
        if (fr < worst.f) worst = {std::move(xr), fr};
        order();
        return false;
      }
      const bool outside = fr < worst.f;
      Point xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, worst.x, 0.5);
      const double fc = eval(xc);
      if ((outside && fc <= fr) || (!outside && fc < worst.f)) {
        worst = {std::move(xc), fc};
      } else {
        std::vector<Point> shrunk;
        for (std::size_t i = 1; i <= n; ++i) shrunk.push_back(affine(simplex[0].x, simplex[i].x, 0.5));
        const auto fs = eval.batch(shrunk);
        for (std::size_t i = 1; i <= n; ++i) simplex[i] = {std::move(shrunk[i - 1]), fs[i - 1]};
      }
    }
    order();
  }
  return true;
}

}  // namespace

DirectSearchResult minimize_direct_search(const std::function<double(std::span<const double>)>& f,
                                          std::vector<double> start,
                                          const DirectSearchOptions& options) {
  if (start.empty()) throw DomainError("direct search needs at least one coordinate");
  if (options.budget < 1) throw DomainError("direct search budget must be at least 1");
  if (!(options.initial_step > 0.0)) throw DomainError("initial step must be positive");

  const std::size_t n = start.size();
  Evaluator eval(f, options.budget, options.workers);
  SplitMix64 rng(options.seed);

  Vertex best{start, eval(start)};
  bool exhausted = false;
  double step = options.initial_step;

  for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
    if (eval.exhausted()) {
      exhausted = true;
      break;
    }
    std::vector<Point> others;
    for (std::size_t k = 0; k < n; ++k) {
      Point x = best.x;
      // First run steps along +e_k; restarts pick seeded signs.
      const double sign = restart == 0 ? 1.0 : ((rng.next() >> 63) ? -1.0 : 1.0);
      x[k] += sign * step;
      others.push_back(std::move(x));
    }
    const auto fo = eval.batch(others);
    std::vector<Vertex> simplex{best};
    for (std::size_t k = 0; k < n; ++k) simplex.push_back({std::move(others[k]), fo[k]});

    const double before = best.f;
    if (!nelder_mead(simplex, eval)) exhausted = true;
    if (simplex.front().f < best.f) best = simplex.front();
    if (exhausted) break;
    if (restart > 0 && before - best.f <= 1e-13 * std::max(1.0, std::abs(best.f))) break;
    step *= 0.5;
  }

  return DirectSearchResult{best.x, best.f, eval.used(), exhausted};
}

}  // namespace qbound
