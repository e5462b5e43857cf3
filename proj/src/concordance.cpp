#include "rubeval/concordance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "rubeval/error.hpp"

namespace rubeval {

TauResult finish_tau(TauResult r) {
  std::int64_t n0 = r.n_pairs();
  std::int64_t tx = r.ties_x + r.ties_both;
  std::int64_t ty = r.ties_y + r.ties_both;
  if (n0 - tx == 0 || n0 - ty == 0) {
    throw Error(ErrorCode::DegenerateVariable,
                fmt::format("every pair among {} items is tied on {}", r.n_items, n0 - tx == 0 ? "x" : "y"));
  }
  double denom = std::sqrt(static_cast<double>(n0 - tx) * static_cast<double>(n0 - ty));
  r.tau = std::clamp(static_cast<double>(r.concordant - r.discordant) / denom, -1.0, 1.0);
  return r;
}

namespace {

std::int64_t tied_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Sorts `v` ascending and returns the number of pairs i < j with v[i] > v[j].
std::int64_t count_inversions(std::vector<double>& v) {
  std::vector<double> buf(v.size());
  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      std::size_t mid = std::min(lo + width, v.size());
      std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    v.swap(buf);
  }
  return swaps;
}

}  // namespace

TauResult tau_scalar(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, fmt::format("{} vs {} values", x.size(), y.size()));
  }
  if (x.size() < 2) throw Error(ErrorCode::TooFewItems, "tau needs at least two items");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw Error(ErrorCode::NonFiniteValue, fmt::format("non-finite value at position {}", i));
    }
  }

  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  std::int64_t tx = 0;
  std::int64_t txy = 0;
  std::int64_t run_x = 1;
  std::int64_t run_xy = 1;
  for (std::size_t k = 1; k < n; ++k) {
    bool same_x = x[order[k]] == x[order[k - 1]];
    bool same_xy = same_x && y[order[k]] == y[order[k - 1]];
    if (same_x) {
      ++run_x;
    } else {
      tx += tied_pairs(run_x);
      run_x = 1;
    }
    if (same_xy) {
      ++run_xy;
    } else {
      txy += tied_pairs(run_xy);
      run_xy = 1;
    }
  }
  tx += tied_pairs(run_x);
  txy += tied_pairs(run_xy);

  std::vector<double> ys(n);
  for (std::size_t k = 0; k < n; ++k) ys[k] = y[order[k]];
  std::int64_t discordant = count_inversions(ys);

  std::int64_t ty = 0;
  std::int64_t run_y = 1;
  for (std::size_t k = 1; k < n; ++k) {
    if (ys[k] == ys[k - 1]) {
      ++run_y;
    } else {
      ty += tied_pairs(run_y);
      run_y = 1;
    }
  }
  ty += tied_pairs(run_y);

  TauResult r;
  r.n_items = static_cast<std::int64_t>(n);
  r.discordant = discordant;
  r.ties_both = txy;
  r.ties_x = tx - txy;
  r.ties_y = ty - txy;
  r.concordant = r.n_pairs() - tx - ty + txy - discordant;
  return finish_tau(r);
}

TauResult tau_preference(std::size_t n_items, const PreferenceFn& prefer_x, const PreferenceFn& prefer_y,
                         IncomparablePolicy /*policy*/) {
  if (n_items < 2) throw Error(ErrorCode::TooFewItems, "tau needs at least two items");
  TauResult r;
  r.n_items = static_cast<std::int64_t>(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    for (std::size_t j = i + 1; j < n_items; ++j) {
      // CountAsTie: anything that is not a strict preference is a tie
      Preference px = prefer_x(i, j);
      Preference py = prefer_y(i, j);
      bool sx = is_strict(px);
      bool sy = is_strict(py);
      if (sx && sy) {
        if (px == py) {
          ++r.concordant;
        } else {
          ++r.discordant;
        }
      } else if (sx) {
        ++r.ties_y;
      } else if (sy) {
        ++r.ties_x;
      } else {
        ++r.ties_both;
      }
    }
  }
  return finish_tau(r);
}

}  // namespace rubeval
