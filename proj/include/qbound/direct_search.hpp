#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qbound {

struct DirectSearchOptions {
  std::size_t budget = 200;       // maximum number of objective evaluations
  std::uint64_t seed = 0;         // drives the restart directions
  double initial_step = 0.5;      // edge length of the first simplex
  std::size_t max_restarts = 3;
  std::size_t workers = 1;        // concurrent evaluations of simplex batches
};

struct DirectSearchResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

/// Nelder-Mead simplex minimization with seeded restarts around the incumbent.
/// The start point is always a vertex of the first simplex, so the returned
/// value never exceeds f(start). Batches of vertices (initial simplex, shrink
/// steps) are evaluated concurrently and reduced in index order, so results
/// do not depend on the worker count.
DirectSearchResult minimize_direct_search(const std::function<double(std::span<const double>)>& f,
                                          std::vector<double> start,
                                          const DirectSearchOptions& options);

}  // namespace qbound
