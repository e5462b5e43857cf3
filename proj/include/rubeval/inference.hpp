#pragma once

// Paired bootstrap of differences between two agreement coefficients.
//
// Each resample is an item-index multiset drawn with replacement and applied
// to both conditions. The per-resample differences are sorted ascending and
// the interval is read off fixed 1-based ranks: 25 and 975 for a plain 95%
// interval over 1000 resamples, or the averages of ranks 8/9 and 991/992 for
// the Bonferroni-adjusted three-way version. Other resample counts scale the
// ranks proportionally, round(n * r / 1000), clamped to [1, n].
//
// A resample on which either coefficient is undefined (all items tied on one
// side) is redrawn; at most 10 * n_resamples draws are attempted.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace rubeval {

enum class Correction { None95, Bonferroni3 };
enum class Direction { AFavored, BFavored, NoCall };

std::string_view to_string(Correction c);
std::string_view to_string(Direction d);
Correction parse_correction(std::string_view text);

struct BootstrapInterval {
  double diff_point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n_resamples = 0;
  Correction correction = Correction::None95;
  bool significant = false;
  Direction direction = Direction::NoCall;
  std::uint64_t seed = 0;
  std::size_t skipped_resamples = 0;
  std::vector<double> sorted_diffs;
};

struct BootstrapOptions {
  std::size_t n_resamples = 1000;
  Correction correction = Correction::None95;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Coefficient of one condition on the items selected by `indices`
/// (duplicates allowed). Throws Error(DegenerateVariable) when undefined.
using ResampleTauFn = std::function<double(std::span<const std::size_t>)>;

/// 1-based ranks {lo_a, lo_b, hi_a, hi_b}; bounds are mean(sorted[lo_a], sorted[lo_b]) etc.
struct RankBounds {
  std::size_t lo_a, lo_b, hi_a, hi_b;
};
RankBounds rank_bounds(std::size_t n_resamples, Correction correction);

/// Reads the interval bounds out of an ascending vector of differences.
std::pair<double, double> interval_from_sorted(std::span<const double> sorted, Correction correction);

/// Fills significance and direction from lo/hi.
void classify_interval(BootstrapInterval& interval);

BootstrapInterval bootstrap_tau_diff(std::size_t n_items, const ResampleTauFn& tau_a,
                                     const ResampleTauFn& tau_b, const BootstrapOptions& options);

struct TripleIntervals {
  BootstrapInterval edited_vs_separate;
  BootstrapInterval edited_vs_batch;
  BootstrapInterval separate_vs_batch;
};

/// Three pairwise Bonferroni3 bootstraps. Comparison k (in the member order
/// above) uses seed derive_seed(options.seed, {k}).
TripleIntervals compare_triple(std::size_t n_items, const ResampleTauFn& tau_separate,
                               const ResampleTauFn& tau_batch, const ResampleTauFn& tau_edited,
                               const BootstrapOptions& options);

/// tau-b between x and y restricted to the resampled items.
ResampleTauFn scalar_tau_fn(std::vector<double> x, std::vector<double> y);

}  // namespace rubeval
