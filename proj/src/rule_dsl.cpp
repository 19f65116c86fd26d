#include "fuzzmarket/rule_dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>

namespace fuzzmarket {

std::string_view to_string(RuleTerm term) {
  switch (term) {
    case RuleTerm::PS:
      return "PS";
    case RuleTerm::PM:
      return "PM";
    case RuleTerm::PL:
      return "PL";
    case RuleTerm::NS:
      return "NS";
    case RuleTerm::NM:
      return "NM";
    case RuleTerm::NL:
      return "NL";
    case RuleTerm::AZ:
      return "AZ";
    case RuleTerm::P:
      return "P";
    case RuleTerm::N:
      return "N";
  }
  return "?";
}

std::optional<RuleTerm> rule_term_from_string(std::string_view text) {
  static constexpr std::array<RuleTerm, 9> all = {RuleTerm::PS, RuleTerm::PM, RuleTerm::PL,
                                                  RuleTerm::NS, RuleTerm::NM, RuleTerm::NL,
                                                  RuleTerm::AZ, RuleTerm::P,  RuleTerm::N};
  for (RuleTerm t : all) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

double rule_term_membership(const TermFamily& family, RuleTerm term, double x) {
  switch (term) {
    case RuleTerm::PS:
      return family.membership(Term::PS, x);
    case RuleTerm::PM:
      return family.membership(Term::PM, x);
    case RuleTerm::PL:
      return family.membership(Term::PL, x);
    case RuleTerm::NS:
      return family.membership(Term::NS, x);
    case RuleTerm::NM:
      return family.membership(Term::NM, x);
    case RuleTerm::NL:
      return family.membership(Term::NL, x);
    case RuleTerm::AZ:
      return family.membership(Term::AZ, x);
    case RuleTerm::P:
      return family.aggregate(Polarity::Positive, x);
    case RuleTerm::N:
      return family.aggregate(Polarity::Negative, x);
  }
  return 0.0;
}

namespace {

struct Token {
  enum class Kind { Ident, Number, LBrace, RBrace, Semicolon, Less, Greater, End };

  Kind kind = Kind::End;
  std::string_view text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  Lexer(std::string_view source, std::vector<ParseDiagnostic>& diagnostics)
      : source_(source), diagnostics_(diagnostics) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (pos_ < source_.size()) {
      const char c = source_[pos_];
      if (c == '\n') {
        advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos_ < source_.size() && source_[pos_] != '\n') advance();
        continue;
      }
      const std::size_t line = line_;
      const std::size_t column = column_;
      switch (c) {
        case '{':
          tokens.push_back({Token::Kind::LBrace, take(1), line, column});
          continue;
        case '}':
          tokens.push_back({Token::Kind::RBrace, take(1), line, column});
          continue;
        case ';':
          tokens.push_back({Token::Kind::Semicolon, take(1), line, column});
          continue;
        case '<':
          tokens.push_back({Token::Kind::Less, take(1), line, column});
          continue;
        case '>':
          tokens.push_back({Token::Kind::Greater, take(1), line, column});
          continue;
        default:
          break;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        tokens.push_back({Token::Kind::Ident, take_while([](char ch) {
                            return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
                          }),
                          line, column});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
        std::string_view text = take_number();
        if (text.empty()) {
          diagnostics_.push_back({line, column, "stray character '" + std::string(1, c) + "'"});
          advance();
          continue;
        }
        tokens.push_back({Token::Kind::Number, text, line, column});
        continue;
      }
      diagnostics_.push_back({line, column, "stray character '" + std::string(1, c) + "'"});
      advance();
    }
    tokens.push_back({Token::Kind::End, {}, line_, column_});
    return tokens;
  }

 private:
  void advance() {
    if (source_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view take(std::size_t count) {
    std::string_view out = source_.substr(pos_, count);
    for (std::size_t i = 0; i < count; ++i) advance();
    return out;
  }

  template <typename Pred>
  std::string_view take_while(Pred pred) {
    const std::size_t start = pos_;
    while (pos_ < source_.size() && pred(source_[pos_])) advance();
    return source_.substr(start, pos_ - start);
  }

  // Sign, integer part, optional fraction, optional exponent. Returns empty
  // when no digit is present.
  std::string_view take_number() {
    const std::size_t start = pos_;
    std::size_t probe = pos_;
    auto digits = [&](std::size_t& i) {
      std::size_t n = 0;
      while (i < source_.size() && std::isdigit(static_cast<unsigned char>(source_[i]))) {
        ++i;
        ++n;
      }
      return n;
    };
    if (probe < source_.size() && (source_[probe] == '+' || source_[probe] == '-')) ++probe;
    std::size_t seen = digits(probe);
    if (probe < source_.size() && source_[probe] == '.') {
      ++probe;
      seen += digits(probe);
    }
    if (seen == 0) return {};
    if (probe < source_.size() && (source_[probe] == 'e' || source_[probe] == 'E')) {
      std::size_t exp_probe = probe + 1;
      if (exp_probe < source_.size() && (source_[exp_probe] == '+' || source_[exp_probe] == '-')) {
        ++exp_probe;
      }
      if (digits(exp_probe) > 0) probe = exp_probe;
    }
    while (pos_ < probe) advance();
    return source_.substr(start, pos_ - start);
  }

  std::string_view source_;
  std::vector<ParseDiagnostic>& diagnostics_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<ParseDiagnostic>& diagnostics)
      : tokens_(std::move(tokens)), diagnostics_(diagnostics) {}

  std::optional<RuleBlock> run() {
    RuleBlock block;
    if (!expect_keyword("GROUP")) return std::nullopt;
    if (peek().kind != Token::Kind::Ident) {
      fail(peek(), "expected a group name");
      return std::nullopt;
    }
    block.name = std::string(advance().text);
    if (!expect(Token::Kind::LBrace, "expected '{'")) return std::nullopt;
    if (peek().kind == Token::Kind::Ident && peek().text == "GUARD") {
      advance();
      block.guard = parse_guard_expr();
      if (!block.guard.has_value()) return std::nullopt;
      if (!expect(Token::Kind::Semicolon, "expected ';' after the guard")) return std::nullopt;
    }
    while (peek().kind != Token::Kind::RBrace && peek().kind != Token::Kind::End) {
      auto rule = parse_rule();
      if (rule.has_value()) {
        block.rules.push_back(std::move(*rule));
      } else {
        // Resync at the end of the broken rule and keep collecting problems.
        while (peek().kind != Token::Kind::Semicolon && peek().kind != Token::Kind::RBrace &&
               peek().kind != Token::Kind::End) {
          advance();
        }
        if (peek().kind == Token::Kind::Semicolon) advance();
      }
    }
    if (!expect(Token::Kind::RBrace, "expected '}'")) return std::nullopt;
    if (peek().kind != Token::Kind::End) {
      fail(peek(), "trailing content after the group block");
      return std::nullopt;
    }
    if (block.rules.empty()) {
      fail(peek(), "a group needs at least one rule");
      return std::nullopt;
    }
    if (!diagnostics_.empty()) return std::nullopt;
    return block;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }

  const Token& advance() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }

  void fail(const Token& at, std::string message) {
    diagnostics_.push_back({at.line, at.column, std::move(message)});
  }

  bool expect(Token::Kind kind, const char* message) {
    if (peek().kind != kind) {
      fail(peek(), message);
      return false;
    }
    advance();
    return true;
  }

  bool expect_keyword(std::string_view keyword) {
    if (peek().kind != Token::Kind::Ident || peek().text != keyword) {
      fail(peek(), "expected '" + std::string(keyword) + "'");
      return false;
    }
    advance();
    return true;
  }

  std::optional<Feature> parse_feature() {
    if (peek().kind != Token::Kind::Ident) {
      fail(peek(), "expected a feature name x1..x10");
      return std::nullopt;
    }
    auto feature = feature_from_string(peek().text);
    if (!feature.has_value()) {
      fail(peek(), "unknown feature '" + std::string(peek().text) + "'");
      return std::nullopt;
    }
    advance();
    return feature;
  }

  std::optional<GuardPredicate> parse_guard_pred() {
    GuardPredicate pred;
    auto feature = parse_feature();
    if (!feature.has_value()) return std::nullopt;
    pred.feature = *feature;
    if (peek().kind == Token::Kind::Less) {
      pred.comparison = GuardComparison::Less;
    } else if (peek().kind == Token::Kind::Greater) {
      pred.comparison = GuardComparison::Greater;
    } else {
      fail(peek(), "expected '<' or '>'");
      return std::nullopt;
    }
    advance();
    if (peek().kind != Token::Kind::Number) {
      fail(peek(), "expected a number");
      return std::nullopt;
    }
    const std::string text(peek().text);
    char* end = nullptr;
    pred.threshold = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || !std::isfinite(pred.threshold)) {
      fail(peek(), "bad number '" + text + "'");
      return std::nullopt;
    }
    advance();
    return pred;
  }

  // AND binds tighter than OR.
  std::optional<GuardExpr> parse_guard_expr() {
    GuardExpr expr;
    std::vector<GuardPredicate> conjunction;
    auto first = parse_guard_pred();
    if (!first.has_value()) return std::nullopt;
    conjunction.push_back(*first);
    while (peek().kind == Token::Kind::Ident && (peek().text == "AND" || peek().text == "OR")) {
      const bool conjunctive = peek().text == "AND";
      advance();
      auto next = parse_guard_pred();
      if (!next.has_value()) return std::nullopt;
      if (conjunctive) {
        conjunction.push_back(*next);
      } else {
        expr.disjuncts.push_back(std::move(conjunction));
        conjunction = {*next};
      }
    }
    expr.disjuncts.push_back(std::move(conjunction));
    return expr;
  }

  std::optional<Rule> parse_rule() {
    Rule rule;
    if (!expect_keyword("IF")) return std::nullopt;
    while (true) {
      Condition condition;
      auto feature = parse_feature();
      if (!feature.has_value()) return std::nullopt;
      condition.feature = *feature;
      if (!expect_keyword("IS")) return std::nullopt;
      if (peek().kind != Token::Kind::Ident) {
        fail(peek(), "expected a term");
        return std::nullopt;
      }
      auto term = rule_term_from_string(peek().text);
      if (!term.has_value()) {
        fail(peek(), "unknown term '" + std::string(peek().text) + "'");
        return std::nullopt;
      }
      condition.term = *term;
      advance();
      rule.antecedents.push_back(condition);
      if (peek().kind == Token::Kind::Ident && peek().text == "AND") {
        advance();
        continue;
      }
      break;
    }
    if (!expect_keyword("THEN")) return std::nullopt;
    if (!expect_keyword("ed")) return std::nullopt;
    if (!expect_keyword("IS")) return std::nullopt;
    if (peek().kind != Token::Kind::Ident) {
      fail(peek(), "expected an action");
      return std::nullopt;
    }
    auto action = action_from_string(peek().text);
    if (!action.has_value()) {
      fail(peek(), "unknown action '" + std::string(peek().text) + "'");
      return std::nullopt;
    }
    rule.consequent = *action;
    advance();
    if (!expect(Token::Kind::Semicolon, "expected ';' after the rule")) return std::nullopt;
    return rule;
  }

  std::vector<Token> tokens_;
  std::vector<ParseDiagnostic>& diagnostics_;
  std::size_t index_ = 0;
};

std::string format_threshold(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

bool guard_holds(const GuardExpr& guard, const FeatureVector& features) {
  for (const auto& conjunction : guard.disjuncts) {
    bool all = true;
    for (const GuardPredicate& pred : conjunction) {
      auto value = features.get(pred.feature);
      if (!value.has_value()) {
        all = false;
        break;
      }
      const bool holds = pred.comparison == GuardComparison::Less ? *value < pred.threshold
                                                                  : *value > pred.threshold;
      if (!holds) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

ParseResult parse_rule_block(std::string_view source) {
  ParseResult result;
  Lexer lexer(source, result.diagnostics);
  std::vector<Token> tokens = lexer.run();
  Parser parser(std::move(tokens), result.diagnostics);
  result.block = parser.run();
  if (!result.diagnostics.empty()) result.block.reset();
  return result;
}

std::string pretty_print(const RuleBlock& block) {
  std::string out = "GROUP " + block.name + " {\n";
  if (block.guard.has_value()) {
    out += "  GUARD ";
    bool first_disjunct = true;
    for (const auto& conjunction : block.guard->disjuncts) {
      if (!first_disjunct) out += " OR ";
      first_disjunct = false;
      bool first_pred = true;
      for (const GuardPredicate& pred : conjunction) {
        if (!first_pred) out += " AND ";
        first_pred = false;
        out += std::string(to_string(pred.feature));
        out += pred.comparison == GuardComparison::Less ? " < " : " > ";
        out += format_threshold(pred.threshold);
      }
    }
    out += ";\n";
  }
  for (const Rule& rule : block.rules) {
    out += "  IF ";
    bool first = true;
    for (const Condition& condition : rule.antecedents) {
      if (!first) out += " AND ";
      first = false;
      out += std::string(to_string(condition.feature));
      out += " IS ";
      out += std::string(to_string(condition.term));
    }
    out += " THEN ed IS ";
    out += std::string(to_string(rule.consequent));
    out += ";\n";
  }
  out += "}\n";
  return out;
}

CompiledRules::CompiledRules(RuleBlock block, TermFamily family, ConsequentCenters centers)
    : block_(std::move(block)), family_(family), centers_(centers) {
  centers_.validate();
}

ExcessDemand CompiledRules::evaluate(const FeatureVector& features) const {
  if (block_.guard.has_value() && !guard_holds(*block_.guard, features)) return {};
  double numerator = 0.0;
  double denominator = 0.0;
  for (const Rule& rule : block_.rules) {
    double firing = 1.0;
    for (const Condition& condition : rule.antecedents) {
      auto value = features.get(condition.feature);
      if (!value.has_value()) {
        firing = 0.0;
        break;
      }
      firing *= rule_term_membership(family_, condition.term, *value);
    }
    numerator += firing * centers_.of(rule.consequent);
    denominator += firing;
  }
  if (denominator < kDenominatorEpsilon) return {};
  return {numerator / denominator, true};
}

std::vector<Feature> CompiledRules::referenced_features() const {
  std::set<Feature> seen;
  if (block_.guard.has_value()) {
    for (const auto& conjunction : block_.guard->disjuncts) {
      for (const GuardPredicate& pred : conjunction) seen.insert(pred.feature);
    }
  }
  for (const Rule& rule : block_.rules) {
    for (const Condition& condition : rule.antecedents) seen.insert(condition.feature);
  }
  return {seen.begin(), seen.end()};
}

CompiledRules compile_rule_block(const RuleBlock& block, const TermFamily& family,
                                 const ConsequentCenters& centers) {
  return CompiledRules(block, family, centers);
}

}  // namespace fuzzmarket
