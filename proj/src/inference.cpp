#include "rubeval/inference.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>

#include <fmt/format.h>

#include "rubeval/concordance.hpp"
#include "rubeval/error.hpp"
#include "rubeval/parallel.hpp"
#include "rubeval/random.hpp"

namespace rubeval {

std::string_view to_string(Correction c) { return c == Correction::None95 ? "None95" : "Bonferroni3"; }

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::AFavored: return "AFavored";
    case Direction::BFavored: return "BFavored";
    case Direction::NoCall: return "NoCall";
  }
  return "?";
}

Correction parse_correction(std::string_view text) {
  if (text == "None95" || text == "none") return Correction::None95;
  if (text == "Bonferroni3" || text == "bonferroni") return Correction::Bonferroni3;
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown correction '{}'", text));
}

RankBounds rank_bounds(std::size_t n, Correction correction) {
  auto scaled = [n](std::size_t per_mille) {
    std::size_t r = (n * per_mille + 500) / 1000;
    return std::clamp<std::size_t>(r, 1, n);
  };
  if (correction == Correction::None95) {
    return {scaled(25), scaled(25), scaled(975), scaled(975)};
  }
  return {scaled(8), scaled(9), scaled(991), scaled(992)};
}

std::pair<double, double> interval_from_sorted(std::span<const double> sorted, Correction correction) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidArgument, "no resampled differences");
  auto r = rank_bounds(sorted.size(), correction);
  auto at = [&](std::size_t rank) { return sorted[rank - 1]; };
  double lo = r.lo_a == r.lo_b ? at(r.lo_a) : (at(r.lo_a) + at(r.lo_b)) / 2.0;
  double hi = r.hi_a == r.hi_b ? at(r.hi_a) : (at(r.hi_a) + at(r.hi_b)) / 2.0;
  return {lo, hi};
}

void classify_interval(BootstrapInterval& interval) {
  interval.significant = interval.lo > 0.0 || interval.hi < 0.0;
  if (!interval.significant) {
    interval.direction = Direction::NoCall;
  } else {
    interval.direction = interval.lo > 0.0 ? Direction::AFavored : Direction::BFavored;
  }
}

namespace {

std::optional<double> resample_diff(std::span<const std::size_t> indices, const ResampleTauFn& tau_a,
                                    const ResampleTauFn& tau_b) {
  try {
    return tau_a(indices) - tau_b(indices);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateVariable) return std::nullopt;
    throw;
  }
}

}  // namespace

BootstrapInterval bootstrap_tau_diff(std::size_t n_items, const ResampleTauFn& tau_a,
                                     const ResampleTauFn& tau_b, const BootstrapOptions& options) {
  if (n_items < 2) throw Error(ErrorCode::TooFewItems, fmt::format("{} items cannot be resampled", n_items));
  if (options.n_resamples == 0) throw Error(ErrorCode::InvalidArgument, "n_resamples must be positive");

  std::vector<std::size_t> identity(n_items);
  std::iota(identity.begin(), identity.end(), std::size_t{0});

  BootstrapInterval out;
  out.diff_point = tau_a(identity) - tau_b(identity);
  out.n_resamples = options.n_resamples;
  out.correction = options.correction;
  out.seed = options.seed;

  const std::size_t wanted = options.n_resamples;
  const std::size_t max_draws = 10 * wanted;
  std::vector<double> diffs;
  diffs.reserve(wanted);
  std::size_t next_draw = 0;

  // Draw d is a pure function of (seed, d). Accepting the first `wanted`
  // non-degenerate draws in d order keeps the result schedule-independent.
  while (diffs.size() < wanted && next_draw < max_draws) {
    std::size_t batch = std::min(wanted - diffs.size(), max_draws - next_draw);
    std::vector<std::optional<double>> results(batch);
    parallel_for(batch, options.threads, [&](std::size_t k) {
      std::mt19937_64 engine(derive_seed(options.seed, {next_draw + k}));
      std::vector<std::size_t> indices(n_items);
      for (auto& idx : indices) idx = uniform_index(engine, n_items);
      results[k] = resample_diff(indices, tau_a, tau_b);
    });
    for (const auto& r : results) {
      if (r) diffs.push_back(*r);
    }
    next_draw += batch;
  }
  if (diffs.size() < wanted) {
    throw Error(ErrorCode::AllResamplesDegenerate,
                fmt::format("only {} of {} draws gave a defined coefficient", diffs.size(), next_draw));
  }
  out.skipped_resamples = next_draw - wanted;

  std::sort(diffs.begin(), diffs.end());
  std::tie(out.lo, out.hi) = interval_from_sorted(diffs, options.correction);
  out.sorted_diffs = std::move(diffs);
  classify_interval(out);
  return out;
}

TripleIntervals compare_triple(std::size_t n_items, const ResampleTauFn& tau_separate,
                               const ResampleTauFn& tau_batch, const ResampleTauFn& tau_edited,
                               const BootstrapOptions& options) {
  auto opts = [&](std::uint64_t k) {
    BootstrapOptions o = options;
    o.correction = Correction::Bonferroni3;
    o.seed = derive_seed(options.seed, {k});
    return o;
  };
  TripleIntervals out;
  out.edited_vs_separate = bootstrap_tau_diff(n_items, tau_edited, tau_separate, opts(0));
  out.edited_vs_batch = bootstrap_tau_diff(n_items, tau_edited, tau_batch, opts(1));
  out.separate_vs_batch = bootstrap_tau_diff(n_items, tau_separate, tau_batch, opts(2));
  return out;
}

ResampleTauFn scalar_tau_fn(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, fmt::format("{} vs {} values", x.size(), y.size()));
  }
  return [x = std::move(x), y = std::move(y)](std::span<const std::size_t> indices) {
    std::vector<double> xs(indices.size()), ys(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
      xs[k] = x[indices[k]];
      ys[k] = y[indices[k]];
    }
    return tau_scalar(xs, ys).tau;
  };
}

}  // namespace rubeval
