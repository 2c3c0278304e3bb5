#include "soue/screening.hpp"

#include <algorithm>

#include "soue/dtw.hpp"
#include "soue/errors.hpp"

namespace soue {

WindowPlan plan_windows(std::size_t g, std::size_t eta) {
  if (eta < 2 || eta % 2 != 0) throw ConfigError("window length must be an even integer >= 2");
  WindowPlan plan{eta, 0};
  if (g >= eta) plan.count = (g - eta) / plan.stride() + 1;
  return plan;
}

SimilarityTensor::SimilarityTensor(PropertyKind property, std::vector<std::string> node_order,
                                   std::size_t windows)
    : property_(std::move(property)),
      node_order_(std::move(node_order)),
      windows_(windows),
      incident_(node_order_.size()),
      evaluable_(node_order_.size() * windows, 0) {}

std::size_t SimilarityTensor::add_pair(std::size_t j, std::size_t k) {
  if (j > k) std::swap(j, k);
  pairs_.push_back({j, k, std::vector<std::optional<double>>(windows_)});
  const std::size_t idx = pairs_.size() - 1;
  incident_[j].emplace_back(k, idx);
  incident_[k].emplace_back(j, idx);
  return idx;
}

std::optional<double> SimilarityTensor::at(std::size_t j, std::size_t k, std::size_t l) const {
  for (const auto& [other, idx] : incident_[j]) {
    if (other == k) return pairs_[idx].values[l];
  }
  return std::nullopt;
}

std::vector<double> SimilarityTensor::neighbor_values(std::size_t j, std::size_t l) const {
  std::vector<double> out;
  for (const auto& [other, idx] : incident_[j]) {
    if (const auto& v = pairs_[idx].values[l]) out.push_back(*v);
  }
  return out;
}

std::size_t SimilarityTensor::present_entries() const {
  std::size_t n = 0;
  for (const auto& p : pairs_) {
    n += static_cast<std::size_t>(
        std::count_if(p.values.begin(), p.values.end(), [](const auto& v) { return v.has_value(); }));
  }
  return n;
}

SimilarityTensor build_similarity_tensor(const PropertyKind& property,
                                         std::span<const ObservationSeries* const> series,
                                         const SensorNeighborhoodMatrix& sensor_matrix,
                                         const WindowPlan& plan, double value_scale,
                                         std::span<const std::uint8_t> window_mask) {
  const std::size_t n = sensor_matrix.node_order.size();
  if (series.size() != n) throw ConfigError("series count does not match the sensor matrix");
  if (!window_mask.empty() && window_mask.size() != plan.count) {
    throw ConfigError("window mask does not match the window plan");
  }
  SimilarityTensor tensor(property, sensor_matrix.node_order, plan.count);

  // Trend vectors per (node, window), computed once and shared by every pair.
  std::vector<std::vector<TrendVectorSequence>> vectors(n);
  for (std::size_t j = 0; j < n; ++j) {
    const ObservationSeries* s = series[j];
    if (!s) continue;
    if (s->slots.size() < (plan.count == 0 ? 0 : plan.last_slot(plan.count - 1) + 1)) {
      throw ConfigError("series for node " + sensor_matrix.node_order[j] + " is shorter than the window plan");
    }
    vectors[j].resize(plan.count);
    for (std::size_t l = 0; l < plan.count; ++l) {
      if (!window_mask.empty() && !window_mask[l]) continue;
      if (!s->complete(plan.first_slot(l), plan.eta)) continue;
      const std::span<const std::optional<double>> w(s->slots.data() + plan.first_slot(l), plan.eta);
      vectors[j][l] = to_trend_vectors(w, value_scale);
      tensor.set_evaluable(j, l, true);
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      if (!sensor_matrix.cells.at(j, k)) continue;
      if (!series[j] || !series[k]) continue;
      const std::size_t idx = tensor.add_pair(j, k);
      for (std::size_t l = 0; l < plan.count; ++l) {
        if (!tensor.evaluable(j, l) || !tensor.evaluable(k, l)) continue;
        tensor.set(idx, l, dtw_align(vectors[j][l], vectors[k][l]).similarity);
      }
    }
  }
  return tensor;
}

const char* to_string(Flag f) {
  switch (f) {
    case Flag::Normal: return "Normal";
    case Flag::Suspicious: return "Suspicious";
    case Flag::Unevaluated: return "Unevaluated";
  }
  return "?";
}

std::size_t SuspicionTable::count(Flag f) const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), f));
}

SuspicionTable vote_suspicious(const SimilarityTensor& tensor, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("similarity threshold must lie in (0, 1]");
  const std::size_t n = tensor.nodes();
  const std::size_t windows = tensor.windows();
  SuspicionTable table{tensor.property(), tensor.node_order(), windows,
                       std::vector<Flag>(n * windows, Flag::Unevaluated)};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < windows; ++l) {
      if (!tensor.evaluable(j, l)) continue;
      std::size_t present = 0;
      std::size_t similar = 0;
      for (const double v : tensor.neighbor_values(j, l)) {
        ++present;
        if (v >= beta) ++similar;
      }
      if (present == 0) continue;
      table.at(j, l) = 2 * similar >= present ? Flag::Normal : Flag::Suspicious;
    }
  }
  return table;
}

}  // namespace soue
