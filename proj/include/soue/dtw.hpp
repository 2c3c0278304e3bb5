#pragma once

// Angle-based dynamic time warping between equal-length observation windows.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace soue {

/// Step between consecutive observations: dt in grid steps, dv in scaled value units.
struct TrendVector {
  double dt = 1.0;
  double dv = 0.0;
};

using TrendVectorSequence = std::vector<TrendVector>;

/// Converts a complete window of u >= 2 contiguous grid slots into u - 1 steps.
/// Throws ConfigError on a missing slot, u < 2 or a non-positive scale.
TrendVectorSequence to_trend_vectors(std::span<const std::optional<double>> window, double value_scale);
TrendVectorSequence to_trend_vectors(std::span<const double> window, double value_scale);

/// Angle in [0, pi] between two nonzero vectors.
double vector_angle(const TrendVector& a, const TrendVector& b);

struct WarpResult {
  double cumulative_distance = 0.0;  ///< sum of angles along the optimal path
  std::size_t path_length = 0;       ///< cells on the backtracked path
  double similarity = 0.0;
};

/// Maps a mean path angle to [0, 1]: 0 beyond pi/2, cos otherwise.
double similarity_from_warp(double cumulative_distance, std::size_t path_length);

/// Full DTW over the angle grid. Backtracking prefers the diagonal predecessor,
/// then (a-1, b), then (a, b-1) when costs tie.
WarpResult dtw_align(std::span<const TrendVector> a, std::span<const TrendVector> b);

/// to_trend_vectors on both windows, then dtw_align; returns the similarity.
double trend_similarity(std::span<const std::optional<double>> window_a,
                        std::span<const std::optional<double>> window_b, double value_scale = 1.0);
double trend_similarity(std::span<const double> window_a, std::span<const double> window_b,
                        double value_scale = 1.0);

}  // namespace soue
