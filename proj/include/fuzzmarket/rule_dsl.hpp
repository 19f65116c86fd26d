#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzmarket/fuzzy.hpp"
#include "fuzzmarket/indicators.hpp"
#include "fuzzmarket/rule_groups.hpp"

namespace fuzzmarket {

// Antecedent vocabulary: the seven terms plus the positive/negative
// aggregates.
enum class RuleTerm { PS, PM, PL, NS, NM, NL, AZ, P, N };

std::string_view to_string(RuleTerm term);
std::optional<RuleTerm> rule_term_from_string(std::string_view text);

double rule_term_membership(const TermFamily& family, RuleTerm term, double x);

struct Condition {
  Feature feature = Feature::X1;
  RuleTerm term = RuleTerm::AZ;

  bool operator==(const Condition&) const = default;
};

struct Rule {
  std::vector<Condition> antecedents;
  Action consequent = Action::N;

  bool operator==(const Rule&) const = default;
};

enum class GuardComparison { Less, Greater };

// feature < threshold or feature > threshold; false when the feature is
// absent.
struct GuardPredicate {
  Feature feature = Feature::X1;
  GuardComparison comparison = GuardComparison::Less;
  double threshold = 0.0;

  bool operator==(const GuardPredicate&) const = default;
};

// Disjunction of conjunctions: AND binds tighter than OR.
struct GuardExpr {
  std::vector<std::vector<GuardPredicate>> disjuncts;

  bool operator==(const GuardExpr&) const = default;
};

struct RuleBlock {
  std::string name;
  std::optional<GuardExpr> guard;
  std::vector<Rule> rules;

  bool operator==(const RuleBlock&) const = default;
};

struct ParseDiagnostic {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based
  std::string message;
};

struct ParseResult {
  std::optional<RuleBlock> block;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return block.has_value() && diagnostics.empty(); }
};

// Parses one GROUP block. Never throws on malformed input; every problem
// lands in the diagnostics with its source position.
ParseResult parse_rule_block(std::string_view source);

// Canonical source form; parsing the output reproduces the block.
std::string pretty_print(const RuleBlock& block);

// A rule block bound to a membership family and centers, ready to evaluate.
class CompiledRules {
 public:
  CompiledRules(RuleBlock block, TermFamily family, ConsequentCenters centers);

  // Guard false or total firing under epsilon yields an inactive result.
  // Rules touching an absent feature fire at degree 0.
  ExcessDemand evaluate(const FeatureVector& features) const;

  const RuleBlock& block() const noexcept { return block_; }
  const TermFamily& family() const noexcept { return family_; }

  // Features the block reads, for lookback planning.
  std::vector<Feature> referenced_features() const;

 private:
  RuleBlock block_;
  TermFamily family_;
  ConsequentCenters centers_;
};

CompiledRules compile_rule_block(const RuleBlock& block, const TermFamily& family,
                                 const ConsequentCenters& centers = {});

}  // namespace fuzzmarket
