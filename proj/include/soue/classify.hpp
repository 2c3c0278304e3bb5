#pragma once

// Cross-property corroboration of suspicious windows.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soue/rules.hpp"
#include "soue/screening.hpp"

namespace soue {

enum class Verdict : std::uint8_t { Normal, ErroneousOutlier, UnusualEvent, Unevaluated };

std::string_view to_string(Verdict v);
/// Accepts `Normal`, `ErroneousOutlier`, `UnusualEvent`, `Unevaluated` and the
/// kebab-case forms `erroneous-outlier`, `unusual-event`.
std::optional<Verdict> verdict_from_string(std::string_view text);

struct ClassifiedWindow {
  Verdict verdict = Verdict::Unevaluated;
  std::uint16_t c1 = 0;  ///< correlated properties also suspicious here
  std::uint16_t c2 = 0;  ///< correlated properties evaluated here

  friend bool operator==(const ClassifiedWindow&, const ClassifiedWindow&) = default;
};

struct DecisionTable {
  PropertyKind property{"unset"};
  std::vector<std::string> node_order;
  std::size_t windows = 0;
  std::vector<ClassifiedWindow> cells;  // node-major

  const ClassifiedWindow& at(std::size_t j, std::size_t l) const { return cells[j * windows + l]; }
  std::size_t count(Verdict v) const;

  friend bool operator==(const DecisionTable&, const DecisionTable&) = default;
};

/// Classifies the suspicious window (property i, node j, window l). `tables`
/// must follow y.property_order. UnusualEvent iff c2 > 0 and 2 * c1 >= c2.
/// Throws std::logic_error when the flag there is not Suspicious.
ClassifiedWindow classify_window(std::span<const SuspicionTable> tables, const RelationshipMatrix& y,
                                 std::size_t i, std::size_t j, std::size_t l);

/// Decision tables for every property. Normal and Unevaluated flags pass through.
std::vector<DecisionTable> classify_all(std::span<const SuspicionTable> tables,
                                        const RelationshipMatrix& y);

}  // namespace soue
