#pragma once

// Sliding-window segmentation, neighbor similarity tensors and suspicion voting.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soue/ingest.hpp"
#include "soue/topology.hpp"

namespace soue {

/// Windows of `eta` slots advancing by eta / 2; trailing slots that cannot
/// fill a window are left out.
struct WindowPlan {
  std::size_t eta = 12;
  std::size_t count = 0;

  std::size_t stride() const { return eta / 2; }
  /// First slot of window `l` (0-based window and slot indices).
  std::size_t first_slot(std::size_t l) const { return l * stride(); }
  /// Last slot of window `l`, inclusive.
  std::size_t last_slot(std::size_t l) const { return first_slot(l) + eta - 1; }

  friend bool operator==(const WindowPlan&, const WindowPlan&) = default;
};

/// Throws ConfigError unless eta is even and >= 2. Returns an empty plan when g < eta.
WindowPlan plan_windows(std::size_t g, std::size_t eta);

/// Per-property trend similarities between neighboring sensors, per window.
class SimilarityTensor {
 public:
  struct Pair {
    std::size_t j = 0;
    std::size_t k = 0;  // j < k
    std::vector<std::optional<double>> values;  // one per window
  };

  SimilarityTensor() = default;
  SimilarityTensor(PropertyKind property, std::vector<std::string> node_order, std::size_t windows);

  const PropertyKind& property() const { return property_; }
  const std::vector<std::string>& node_order() const { return node_order_; }
  std::size_t nodes() const { return node_order_.size(); }
  std::size_t windows() const { return windows_; }
  const std::vector<Pair>& pairs() const { return pairs_; }

  /// Entry for (j, k, l); symmetric in j and k. Absent when the sensors are not
  /// neighbors or either window is incomplete.
  std::optional<double> at(std::size_t j, std::size_t k, std::size_t l) const;

  /// Present similarities of node j's neighbors in window l.
  std::vector<double> neighbor_values(std::size_t j, std::size_t l) const;

  /// Whether node j's own window l can be screened (sensor exists and window complete).
  bool evaluable(std::size_t j, std::size_t l) const { return evaluable_[j * windows_ + l] != 0; }
  void set_evaluable(std::size_t j, std::size_t l, bool v) { evaluable_[j * windows_ + l] = v ? 1 : 0; }

  std::size_t add_pair(std::size_t j, std::size_t k);
  void set(std::size_t pair_index, std::size_t l, double value) { pairs_[pair_index].values[l] = value; }

  std::size_t present_entries() const;

 private:
  PropertyKind property_{"unset"};
  std::vector<std::string> node_order_;
  std::size_t windows_ = 0;
  std::vector<Pair> pairs_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> incident_;  // node -> (other, pair)
  std::vector<std::uint8_t> evaluable_;
};

/// Fills the tensor for every neighbor pair of `sensor_matrix`. `series[j]` is
/// node j's series for this property, or nullptr when the node has no such
/// sensor. `window_mask`, when non-empty, restricts which windows are computed.
SimilarityTensor build_similarity_tensor(const PropertyKind& property,
                                         std::span<const ObservationSeries* const> series,
                                         const SensorNeighborhoodMatrix& sensor_matrix,
                                         const WindowPlan& plan, double value_scale = 1.0,
                                         std::span<const std::uint8_t> window_mask = {});

enum class Flag : std::uint8_t { Normal, Suspicious, Unevaluated };

const char* to_string(Flag f);

struct SuspicionTable {
  PropertyKind property{"unset"};
  std::vector<std::string> node_order;
  std::size_t windows = 0;
  std::vector<Flag> flags;  // node-major

  Flag at(std::size_t j, std::size_t l) const { return flags[j * windows + l]; }
  Flag& at(std::size_t j, std::size_t l) { return flags[j * windows + l]; }
  std::size_t count(Flag f) const;
};

/// Normal when at least half of the present neighbor similarities reach beta,
/// Suspicious otherwise, Unevaluated when nothing is present. Requires 0 < beta <= 1.
SuspicionTable vote_suspicious(const SimilarityTensor& tensor, double beta);

}  // namespace soue
