#include "soue/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "soue/errors.hpp"

namespace soue {

namespace {

void check_window(std::size_t u, double value_scale) {
  if (u < 2) throw ConfigError("a trend window needs at least two observations");
  if (!(value_scale > 0.0)) throw ConfigError("value scale must be positive");
}

}  // namespace

TrendVectorSequence to_trend_vectors(std::span<const std::optional<double>> window, double value_scale) {
  check_window(window.size(), value_scale);
  TrendVectorSequence out;
  out.reserve(window.size() - 1);
  for (std::size_t i = 0; i + 1 < window.size(); ++i) {
    if (!window[i] || !window[i + 1]) throw ConfigError("trend window contains a missing slot");
    out.push_back({1.0, (*window[i + 1] - *window[i]) / value_scale});
  }
  return out;
}

TrendVectorSequence to_trend_vectors(std::span<const double> window, double value_scale) {
  check_window(window.size(), value_scale);
  TrendVectorSequence out;
  out.reserve(window.size() - 1);
  for (std::size_t i = 0; i + 1 < window.size(); ++i) {
    out.push_back({1.0, (window[i + 1] - window[i]) / value_scale});
  }
  return out;
}

double vector_angle(const TrendVector& a, const TrendVector& b) {
  // Same angle as acos(dot / norms), but exact for parallel vectors where
  // acos of a rounded 1 - eps would give ~1e-8.
  const double dot = a.dt * b.dt + a.dv * b.dv;
  const double cross = a.dt * b.dv - a.dv * b.dt;
  return std::atan2(std::abs(cross), dot);
}

double similarity_from_warp(double cumulative_distance, std::size_t path_length) {
  const double mean = cumulative_distance / static_cast<double>(path_length);
  return mean > std::numbers::pi / 2.0 ? 0.0 : std::cos(mean);
}

WarpResult dtw_align(std::span<const TrendVector> a, std::span<const TrendVector> b) {
  if (a.empty() || b.empty()) throw ConfigError("cannot align an empty vector sequence");
  if (a.size() != b.size()) throw ConfigError("trend sequences differ in length");
  const std::size_t rows = a.size();
  const std::size_t cols = b.size();
  std::vector<double> cost(rows * cols);
  const auto at = [&](std::size_t r, std::size_t c) -> double& { return cost[r * cols + c]; };

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double theta = vector_angle(a[r], b[c]);
      if (r == 0 && c == 0) {
        at(r, c) = theta;
      } else if (r == 0) {
        at(r, c) = at(r, c - 1) + theta;
      } else if (c == 0) {
        at(r, c) = at(r - 1, c) + theta;
      } else {
        at(r, c) = std::min({at(r - 1, c - 1), at(r - 1, c), at(r, c - 1)}) + theta;
      }
    }
  }

  std::size_t r = rows - 1;
  std::size_t c = cols - 1;
  std::size_t length = 1;
  while (r > 0 || c > 0) {
    if (r == 0) {
      --c;
    } else if (c == 0) {
      --r;
    } else {
      const double diag = at(r - 1, c - 1);
      const double up = at(r - 1, c);
      const double left = at(r, c - 1);
      if (diag <= up && diag <= left) {
        --r;
        --c;
      } else if (up <= left) {
        --r;
      } else {
        --c;
      }
    }
    ++length;
  }

  WarpResult out;
  out.cumulative_distance = at(rows - 1, cols - 1);
  out.path_length = length;
  out.similarity = similarity_from_warp(out.cumulative_distance, length);
  return out;
}

double trend_similarity(std::span<const std::optional<double>> window_a,
                        std::span<const std::optional<double>> window_b, double value_scale) {
  if (window_a.size() != window_b.size()) throw ConfigError("trend windows differ in length");
  const auto va = to_trend_vectors(window_a, value_scale);
  const auto vb = to_trend_vectors(window_b, value_scale);
  return dtw_align(va, vb).similarity;
}

double trend_similarity(std::span<const double> window_a, std::span<const double> window_b,
                        double value_scale) {
  if (window_a.size() != window_b.size()) throw ConfigError("trend windows differ in length");
  const auto va = to_trend_vectors(window_a, value_scale);
  const auto vb = to_trend_vectors(window_b, value_scale);
  return dtw_align(va, vb).similarity;
}

}  // namespace soue
