#include "soue/rules.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <ostream>
#include <sstream>

#include "soue/errors.hpp"

namespace soue {
namespace {

struct PredicateInfo {
  CorrelationPredicate predicate;
  std::string_view token;
  std::string_view short_name;
  PredicateCategory category;
};

using P = CorrelationPredicate;
using C = PredicateCategory;

constexpr std::array<PredicateInfo, 16> kVocabulary{{
    {P::VeryStrong, "hasVeryStrongCorrelation", "very-strong", C::Strength},
    {P::Strong, "hasStrongCorrelation", "strong", C::Strength},
    {P::Medium, "hasMediumCorrelation", "medium", C::Strength},
    {P::Weak, "hasWeakCorrelation", "weak", C::Strength},
    {P::VeryWeak, "hasVeryWeakCorrelation", "very-weak", C::Strength},
    {P::Positive, "hasPositiveCorrelation", "positive", C::Direction},
    {P::Negative, "hasNegativeCorrelation", "negative", C::Direction},
    {P::Linear, "hasLinearCorrelation", "linear", C::Shape},
    {P::Curvilinear, "hasCurvilinearCorrelation", "curvilinear", C::Shape},
    {P::Scattered, "hasScatteredCorrelation", "scattered", C::Shape},
    {P::Spatial, "hasSpatialCorrelation", "spatial", C::SpaceTime},
    {P::Temporal, "hasTemporalCorrelation", "temporal", C::SpaceTime},
    {P::SpatioTemporal, "hasSpatioTemporalCorrelation", "spatio-temporal", C::SpaceTime},
    {P::Partial, "hasPartialCorrelation", "partial", C::Composition},
    {P::Simple, "hasSimpleCorrelation", "simple", C::Composition},
    {P::Multiple, "hasMultipleCorrelation", "multiple", C::Composition},
}};

constexpr std::array<CorrelationPredicate, 16> kAll = [] {
  std::array<CorrelationPredicate, 16> a{};
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = kVocabulary[i].predicate;
  return a;
}();

const PredicateInfo& info(CorrelationPredicate p) { return kVocabulary[static_cast<std::size_t>(p)]; }

std::string_view strip_prefix(std::string_view s) {
  constexpr std::string_view prefix = "cesp:";
  if (s.substr(0, prefix.size()) == prefix) s.remove_prefix(prefix.size());
  return s;
}

}  // namespace

std::span<const CorrelationPredicate> all_predicates() { return kAll; }
std::string_view token(CorrelationPredicate p) { return info(p).token; }
std::string_view short_name(CorrelationPredicate p) { return info(p).short_name; }
PredicateCategory category(CorrelationPredicate p) { return info(p).category; }

std::string_view to_string(PredicateCategory c) {
  switch (c) {
    case C::Strength: return "Strength";
    case C::Direction: return "Direction";
    case C::Shape: return "Shape";
    case C::SpaceTime: return "SpaceTime";
    case C::Composition: return "Composition";
  }
  return "?";
}

std::optional<CorrelationPredicate> predicate_from_token(std::string_view text) {
  text = strip_prefix(text);
  for (const auto& e : kVocabulary) {
    if (e.token == text) return e.predicate;
  }
  return std::nullopt;
}

std::optional<CorrelationPredicate> predicate_from_short_name(std::string_view text) {
  for (const auto& e : kVocabulary) {
    if (e.short_name == text) return e.predicate;
  }
  return std::nullopt;
}

PredicateSet default_active_predicates() { return {P::Strong, P::Medium}; }

PredicateSet predicates_in(PredicateCategory c) {
  PredicateSet out;
  for (const auto& e : kVocabulary) {
    if (e.category == c) out.insert(e.predicate);
  }
  return out;
}

PredicateSet parse_predicate_list(std::string_view text) {
  PredicateSet out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      auto p = predicate_from_short_name(item);
      if (!p) p = predicate_from_token(item);
      if (!p) throw ConfigError("unknown correlation predicate '" + std::string(item) + "'");
      out.insert(*p);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty predicate list");
  return out;
}

std::string format_predicate_list(const PredicateSet& set) {
  std::string out;
  for (const auto p : set) {
    if (!out.empty()) out += ',';
    out += short_name(p);
  }
  return out;
}

void RuleSet::add(CorrelationRule rule) {
  if (rule.subject == rule.object) {
    throw ConfigError("rule relates " + rule.subject.name() + " to itself");
  }
  rules_.insert(std::move(rule));
}

RuleSet parse_rules(std::istream& in, const std::string& source, std::span<const PropertyKind> known) {
  RuleSet rules;
  std::string line;
  std::size_t line_no = 0;
  const auto check_property = [&](std::string_view raw) {
    const std::string name(strip_prefix(raw));
    if (!PropertyKind::valid_name(name)) {
      throw ParseError(source, line_no, "invalid property name '" + name + "'");
    }
    PropertyKind p(name);
    if (!known.empty() && std::find(known.begin(), known.end(), p) == known.end()) {
      throw ParseError(source, line_no, "unknown property '" + name + "'");
    }
    return p;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(f);
    if (parts.empty()) continue;
    // Tolerate a trailing N-Triples style terminator.
    if (parts.size() == 4 && parts.back() == ".") parts.pop_back();
    if (parts.size() == 3 && parts[2].size() > 1 && parts[2].back() == '.') parts[2].pop_back();
    if (parts.size() != 3) {
      throw ParseError(source, line_no, "expected '<subject> <predicate> <object>'");
    }
    const auto predicate = predicate_from_token(parts[1]);
    if (!predicate) throw ParseError(source, line_no, "unknown predicate '" + parts[1] + "'");
    CorrelationRule rule{check_property(parts[0]), *predicate, check_property(parts[2])};
    if (rule.subject == rule.object) {
      throw ParseError(source, line_no, "rule relates " + rule.subject.name() + " to itself");
    }
    rules.add(std::move(rule));
  }
  return rules;
}

RuleSet load_rules(const std::filesystem::path& path, std::span<const PropertyKind> known) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_rules(in, path.string(), known);
}

void write_rules(std::ostream& out, const RuleSet& rules) {
  for (const auto& r : rules) {
    out << r.subject.name() << ' ' << token(r.predicate) << ' ' << r.object.name() << '\n';
  }
}

bool ask_correlated(const RuleSet& rules, const PropertyKind& a, const PropertyKind& b,
                    const PredicateSet& active) {
  return std::any_of(rules.begin(), rules.end(), [&](const CorrelationRule& r) {
    if (!active.contains(r.predicate)) return false;
    return (r.subject == a && r.object == b) || (r.subject == b && r.object == a);
  });
}

RelationshipMatrix build_relationship_matrix(const RuleSet& rules,
                                             const std::vector<PropertyKind>& property_order,
                                             const PredicateSet& active) {
  for (std::size_t i = 0; i < property_order.size(); ++i) {
    for (std::size_t k = i + 1; k < property_order.size(); ++k) {
      if (property_order[i] == property_order[k]) {
        throw ConfigError("duplicate property " + property_order[i].name() + " in property order");
      }
    }
  }
  RelationshipMatrix y{property_order, BinaryMatrix(property_order.size()), active};
  for (std::size_t i = 0; i < property_order.size(); ++i) {
    for (std::size_t k = i + 1; k < property_order.size(); ++k) {
      const std::uint8_t v = ask_correlated(rules, property_order[i], property_order[k], active) ? 1 : 0;
      y.cells.set(i, k, v);
      y.cells.set(k, i, v);
    }
  }
  return y;
}

}  // namespace soue
