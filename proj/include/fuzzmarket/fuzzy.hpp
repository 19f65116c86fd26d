#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace fuzzmarket {

// Linguistic terms over a log-ratio input axis: positive small/medium/large,
// negative small/medium/large, approximately zero.
enum class Term { PS, PM, PL, NS, NM, NL, AZ };

inline constexpr std::array<Term, 7> kAllTerms = {Term::PS, Term::PM, Term::PL, Term::NS,
                                                  Term::NM, Term::NL, Term::AZ};

// Action labels on the excess-demand output axis.
enum class Action { BS, BM, BB, SS, SM, SB, N };

inline constexpr std::array<Action, 7> kAllActions = {Action::BS, Action::BM, Action::BB, Action::SS,
                                                      Action::SM, Action::SB, Action::N};

// Union of the three positive or the three negative terms.
enum class Polarity { Positive, Negative };

// Center-average denominators below this yield zero output instead of dividing.
inline constexpr double kDenominatorEpsilon = 1e-12;

// Piecewise-linear membership family parameterized by a single width w > 0.
// AZ is a triangle centered at 0 with feet at -w and w. PS and PM are unit
// triangles with apexes at w and 2w. PL rises from 2w and saturates at 1 for
// x >= 3w. The negative terms mirror the positive ones through the origin.
// Adjacent memberships sum to 1, so {AZ, PS, PM, PL} partition [0, inf) and
// the full family partitions the real line.
class TermFamily {
 public:
  explicit TermFamily(double width);

  double width() const noexcept { return width_; }

  // Degree of membership of x in the given term, in [0, 1]. Throws
  // std::invalid_argument for non-finite x.
  double membership(Term term, double x) const;

  // max over the three terms of the given sign.
  double aggregate(Polarity side, double x) const;

 private:
  double width_;
};

// One fired rule: a degree in [0, 1] and the center of its action label.
struct Firing {
  double degree = 0.0;
  double center = 0.0;
};

// Centers of the action labels. Defaults give small/medium/big buys of
// 0.1/0.2/0.4, the mirrored sells, and a neutral 0.
struct ConsequentCenters {
  double buy_small = 0.1;
  double buy_medium = 0.2;
  double buy_big = 0.4;
  double sell_small = -0.1;
  double sell_medium = -0.2;
  double sell_big = -0.4;
  double neutral = 0.0;

  double of(Action action) const;

  // Enforces sell = -buy per size, 0 < small < medium < big <= 0.4, neutral 0.
  // Throws std::invalid_argument on violation.
  void validate() const;
};

// Weighted average of centers, sum(degree * center) / sum(degree). A total
// degree under kDenominatorEpsilon yields 0.
double center_average(std::span<const Firing> firings);

// Output fuzzy-set shapes on the demand axis, kept for reference only;
// inference uses the centers above. Feet and apex per label, buy side:
// N {-0.1, 0, 0.1}, BS {0, 0.1, 0.2}, BM {0.1, 0.2, 0.4}, BB rises from 0.2
// and saturates at its 0.4 apex. Sell side mirrors.
struct ActionShape {
  Action action;
  double left_foot;
  double apex;
  double right_foot;
};

inline constexpr std::array<ActionShape, 7> kActionShapes = {{
    {Action::N, -0.1, 0.0, 0.1},
    {Action::BS, 0.0, 0.1, 0.2},
    {Action::BM, 0.1, 0.2, 0.4},
    {Action::BB, 0.2, 0.4, 0.4},
    {Action::SS, -0.2, -0.1, 0.0},
    {Action::SM, -0.4, -0.2, -0.1},
    {Action::SB, -0.4, -0.4, -0.2},
}};

std::string_view to_string(Term term);
std::string_view to_string(Action action);
std::optional<Term> term_from_string(std::string_view text);
std::optional<Action> action_from_string(std::string_view text);

}  // namespace fuzzmarket
