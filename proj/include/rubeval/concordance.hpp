#pragma once

// Tie-aware Kendall tau (tau-b) over scalar sequences and over general
// pairwise preference relations.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "rubeval/aggregation.hpp"

namespace rubeval {

/// Pair-count decomposition of tau-b. `ties_x` and `ties_y` count pairs tied
/// on that side only; `ties_both` counts pairs tied on both sides.
struct TauResult {
  double tau = 0.0;
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  std::int64_t ties_x = 0;
  std::int64_t ties_y = 0;
  std::int64_t ties_both = 0;
  std::int64_t n_items = 0;

  std::int64_t n_pairs() const { return n_items * (n_items - 1) / 2; }

  friend bool operator==(const TauResult&, const TauResult&) = default;
};

/// Fills in `tau` from the pair counts:
///   (nc - nd) / sqrt((n0 - Tx)(n0 - Ty)),  Tx = ties_x + ties_both, Ty = ties_y + ties_both.
/// Throws DegenerateVariable when either factor is zero.
TauResult finish_tau(TauResult counts);

/// O(n log n) tau-b (Knight's merge-sort counting). Exact integer counts.
TauResult tau_scalar(std::span<const double> x, std::span<const double> y);

using PreferenceFn = std::function<Preference(std::size_t, std::size_t)>;

enum class IncomparablePolicy { CountAsTie };

/// Tau over two preference relations on items 0..n_items-1. Each unordered
/// pair (i < j) is evaluated once as prefer(i, j).
TauResult tau_preference(std::size_t n_items, const PreferenceFn& prefer_x, const PreferenceFn& prefer_y,
                         IncomparablePolicy policy = IncomparablePolicy::CountAsTie);

}  // namespace rubeval
