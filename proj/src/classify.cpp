#include "soue/classify.hpp"

#include <algorithm>
#include <stdexcept>

#include "soue/errors.hpp"

namespace soue {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Normal: return "Normal";
    case Verdict::ErroneousOutlier: return "ErroneousOutlier";
    case Verdict::UnusualEvent: return "UnusualEvent";
    case Verdict::Unevaluated: return "Unevaluated";
  }
  return "?";
}

std::optional<Verdict> verdict_from_string(std::string_view text) {
  if (text == "Normal" || text == "normal") return Verdict::Normal;
  if (text == "ErroneousOutlier" || text == "erroneous-outlier") return Verdict::ErroneousOutlier;
  if (text == "UnusualEvent" || text == "unusual-event") return Verdict::UnusualEvent;
  if (text == "Unevaluated" || text == "unevaluated") return Verdict::Unevaluated;
  return std::nullopt;
}

std::size_t DecisionTable::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [v](const auto& c) { return c.verdict == v; }));
}

ClassifiedWindow classify_window(std::span<const SuspicionTable> tables, const RelationshipMatrix& y,
                                 std::size_t i, std::size_t j, std::size_t l) {
  if (tables[i].at(j, l) != Flag::Suspicious) {
    throw std::logic_error("classify_window called on a window that is not suspicious");
  }
  ClassifiedWindow out;
  for (std::size_t other = 0; other < tables.size(); ++other) {
    if (!y.cells.at(i, other)) continue;
    const Flag f = tables[other].at(j, l);
    if (f == Flag::Unevaluated) continue;
    ++out.c2;
    if (f == Flag::Suspicious) ++out.c1;
  }
  // Zero corroborating properties means no evidence of an event.
  const bool event = out.c2 > 0 && 2 * out.c1 >= out.c2;
  out.verdict = event ? Verdict::UnusualEvent : Verdict::ErroneousOutlier;
  return out;
}

std::vector<DecisionTable> classify_all(std::span<const SuspicionTable> tables,
                                        const RelationshipMatrix& y) {
  if (tables.size() != y.size()) throw ConfigError("suspicion tables do not match the relationship matrix");
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (tables[i].property != y.property_order[i]) {
      throw ConfigError("suspicion table order differs from the relationship matrix");
    }
    if (tables[i].node_order != tables[0].node_order || tables[i].windows != tables[0].windows) {
      throw ConfigError("suspicion tables disagree on nodes or windows");
    }
  }
  std::vector<DecisionTable> out;
  out.reserve(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& t = tables[i];
    DecisionTable d{t.property, t.node_order, t.windows,
                    std::vector<ClassifiedWindow>(t.flags.size())};
    for (std::size_t j = 0; j < t.node_order.size(); ++j) {
      for (std::size_t l = 0; l < t.windows; ++l) {
        auto& cell = d.cells[j * t.windows + l];
        switch (t.at(j, l)) {
          case Flag::Normal: cell.verdict = Verdict::Normal; break;
          case Flag::Unevaluated: cell.verdict = Verdict::Unevaluated; break;
          case Flag::Suspicious: cell = classify_window(tables, y, i, j, l); break;
        }
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace soue
