#include "rubeval/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string_view>

#include <fmt/format.h>

#include "rubeval/error.hpp"

namespace rubeval {

void validate_distribution(const ScoreDistribution& dist, const ScoreScale& scale) {
  if (dist.entries.empty()) throw Error(ErrorCode::EmptyDistribution, "no score entries");
  for (std::size_t i = 0; i < dist.entries.size(); ++i) {
    auto [score, logprob] = dist.entries[i];
    if (score < scale.min_score || score > scale.max_score) {
      throw Error(ErrorCode::OutOfRangeScore,
                  fmt::format("score {} outside [{}, {}]", score, scale.min_score, scale.max_score));
    }
    if (!std::isfinite(logprob)) {
      throw Error(ErrorCode::NonFiniteProbability, fmt::format("score {} has logprob {}", score, logprob));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (dist.entries[j].first == score) {
        throw Error(ErrorCode::DuplicateScore, fmt::format("score {} listed twice", score));
      }
    }
  }
}

double weighted_score(const ScoreDistribution& dist, const ScoreScale& scale) {
  validate_distribution(dist, scale);
  double top = dist.entries.front().second;
  for (const auto& e : dist.entries) top = std::max(top, e.second);

  double mass = 0.0;
  double weighted = 0.0;
  for (const auto& [score, logprob] : dist.entries) {
    double p = std::exp(logprob - top);
    mass += p;
    weighted += p * score;
  }
  // mass >= 1 because the top entry contributes exp(0)
  if (!std::isfinite(mass) || !std::isfinite(weighted)) {
    throw Error(ErrorCode::NonFiniteProbability, "probability mass is not finite");
  }
  return std::clamp(weighted / mass, static_cast<double>(scale.min_score),
                    static_cast<double>(scale.max_score));
}

namespace {

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::optional<int> token_score(std::string_view token, const ScoreScale& scale) {
  token = trim(token);
  if (token.empty()) return std::nullopt;
  if (scale.kind == ScaleKind::BinaryYesNo) {
    if (iequals(token, "yes")) return 1;
    if (iequals(token, "no")) return 0;
    return std::nullopt;
  }
  int value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size()) return std::nullopt;
  if (value < scale.min_score || value > scale.max_score) return std::nullopt;
  return value;
}

double log_add(double a, double b) {
  double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

ScoreDistribution parse_answer_tokens(std::span<const TokenLogprob> tokens, const ScoreScale& scale) {
  ScoreDistribution dist;
  for (const auto& [text, logprob] : tokens) {
    auto score = token_score(text, scale);
    if (!score) continue;
    // zero mass
    if (logprob == -HUGE_VAL) continue;
    if (!std::isfinite(logprob)) {
      throw Error(ErrorCode::NonFiniteProbability, fmt::format("token '{}' has logprob {}", text, logprob));
    }
    auto it = std::find_if(dist.entries.begin(), dist.entries.end(),
                           [&](const auto& e) { return e.first == *score; });
    if (it == dist.entries.end()) {
      dist.entries.emplace_back(*score, logprob);
    } else {
      it->second = log_add(it->second, logprob);
    }
  }
  if (dist.entries.empty()) {
    throw Error(ErrorCode::NoValidScoreToken,
                fmt::format("none of {} answer tokens denotes a score", tokens.size()));
  }
  return dist;
}

std::vector<TokenLogprob> distribution_tokens(const ScoreDistribution& dist, const ScoreScale& scale) {
  std::vector<TokenLogprob> out;
  out.reserve(dist.entries.size());
  for (const auto& [score, logprob] : dist.entries) {
    if (scale.kind == ScaleKind::BinaryYesNo) {
      out.emplace_back(score == 1 ? "yes" : "no", logprob);
    } else {
      out.emplace_back(std::to_string(score), logprob);
    }
  }
  return out;
}

}  // namespace rubeval
