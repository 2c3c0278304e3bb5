#pragma once

// Cross-property correlation rules and the property relationship matrix.
//
// A rule file holds one `<subject> <predicate> <object>` triple per line.
// `#` starts a comment. Predicates come from a fixed 16-token vocabulary in
// five categories; a `cesp:` prefix on any token is accepted and ignored.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soue/ingest.hpp"
#include "soue/matrix.hpp"

namespace soue {

enum class PredicateCategory : std::uint8_t { Strength, Direction, Shape, SpaceTime, Composition };

enum class CorrelationPredicate : std::uint8_t {
  VeryStrong,
  Strong,
  Medium,
  Weak,
  VeryWeak,
  Positive,
  Negative,
  Linear,
  Curvilinear,
  Scattered,
  Spatial,
  Temporal,
  SpatioTemporal,
  Partial,
  Simple,
  Multiple,
};

std::span<const CorrelationPredicate> all_predicates();

/// Vocabulary token, e.g. `hasStrongCorrelation`.
std::string_view token(CorrelationPredicate p);
/// CLI name, e.g. `strong`, `very-strong`, `spatio-temporal`.
std::string_view short_name(CorrelationPredicate p);
PredicateCategory category(CorrelationPredicate p);
std::string_view to_string(PredicateCategory c);

std::optional<CorrelationPredicate> predicate_from_token(std::string_view text);
std::optional<CorrelationPredicate> predicate_from_short_name(std::string_view text);

using PredicateSet = std::set<CorrelationPredicate>;

/// {hasStrongCorrelation, hasMediumCorrelation}
PredicateSet default_active_predicates();
PredicateSet predicates_in(PredicateCategory c);
/// Comma-separated short names. Throws ConfigError on an unknown name.
PredicateSet parse_predicate_list(std::string_view text);
std::string format_predicate_list(const PredicateSet& set);

struct CorrelationRule {
  PropertyKind subject;
  CorrelationPredicate predicate;
  PropertyKind object;

  friend auto operator<=>(const CorrelationRule&, const CorrelationRule&) = default;
  friend bool operator==(const CorrelationRule&, const CorrelationRule&) = default;
};

/// Deduplicated, order-independent set of rules.
class RuleSet {
 public:
  /// Throws ConfigError when subject == object.
  void add(CorrelationRule rule);

  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  auto begin() const { return rules_.begin(); }
  auto end() const { return rules_.end(); }

  friend bool operator==(const RuleSet&, const RuleSet&) = default;

 private:
  std::set<CorrelationRule> rules_;
};

/// Parses a rule stream. When `known` is non-empty, properties outside it are rejected.
RuleSet parse_rules(std::istream& in, const std::string& source,
                    std::span<const PropertyKind> known = {});
RuleSet load_rules(const std::filesystem::path& path, std::span<const PropertyKind> known = {});
void write_rules(std::ostream& out, const RuleSet& rules);

/// True iff a rule with an active predicate links the pair in either direction.
bool ask_correlated(const RuleSet& rules, const PropertyKind& a, const PropertyKind& b,
                    const PredicateSet& active);

struct RelationshipMatrix {
  std::vector<PropertyKind> property_order;
  BinaryMatrix cells;  // symmetric, zero diagonal
  PredicateSet active_predicates;

  std::size_t size() const { return property_order.size(); }
};

RelationshipMatrix build_relationship_matrix(const RuleSet& rules,
                                             const std::vector<PropertyKind>& property_order,
                                             const PredicateSet& active);

}  // namespace soue
