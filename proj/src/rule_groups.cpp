#include "fuzzmarket/rule_groups.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

namespace fuzzmarket {

std::optional<int> ManipulatorSchedule::phase(std::size_t t) const {
  if (t >= accumulation_start && t < markup_start) return 1;
  if (t >= markup_start && t < distribution_start) return 2;
  if (t >= distribution_start && t < end) return 3;
  return std::nullopt;
}

void ManipulatorSchedule::validate() const {
  if (!(accumulation_start <= markup_start && markup_start <= distribution_start &&
        distribution_start <= end)) {
    throw std::invalid_argument("manipulator phases must be contiguous and ordered");
  }
}

namespace {

// Membership of an optional feature; absent features contribute degree 0.
double mu(const TermFamily& family, Term term, std::optional<double> x) {
  return x.has_value() ? family.membership(term, *x) : 0.0;
}

double agg(const TermFamily& family, Polarity side, std::optional<double> x) {
  return x.has_value() ? family.aggregate(side, *x) : 0.0;
}

ExcessDemand from_firings(std::span<const Firing> firings) {
  double total = 0.0;
  for (const Firing& f : firings) total += f.degree;
  if (total < kDenominatorEpsilon) return {};
  return {center_average(firings), true};
}

}  // namespace

ExcessDemand ed1(std::optional<double> x1, const TermFamily& family,
                 const ConsequentCenters& centers) {
  if (!x1.has_value()) return {};
  const Firing firings[] = {
      {mu(family, Term::PS, x1), centers.buy_small},
      {mu(family, Term::PM, x1), centers.buy_big},
      {mu(family, Term::PL, x1), centers.sell_medium},
      {mu(family, Term::NS, x1), centers.sell_small},
      {mu(family, Term::NM, x1), centers.sell_big},
      {mu(family, Term::NL, x1), centers.buy_medium},
      {mu(family, Term::AZ, x1), centers.neutral},
  };
  return from_firings(firings);
}

ExcessDemand ed2(std::optional<double> x2, std::optional<double> x3, const TermFamily& family,
                 const ConsequentCenters& centers) {
  const bool breakout_up = x2.has_value() && *x2 > 0.0;
  const bool breakout_down = x3.has_value() && *x3 < 0.0;
  if (!breakout_up && !breakout_down) return {};
  const Firing firings[] = {
      {mu(family, Term::PS, x2), centers.buy_small},
      {mu(family, Term::PM, x2), centers.buy_medium},
      {mu(family, Term::PL, x2), centers.buy_big},
      {mu(family, Term::NS, x3), centers.sell_small},
      {mu(family, Term::NM, x3), centers.sell_medium},
      {mu(family, Term::NL, x3), centers.sell_big},
  };
  return from_firings(firings);
}

ExcessDemand ed3(std::optional<double> x2, std::optional<double> x3, const TermFamily& family,
                 const ConsequentCenters& centers) {
  const double w = family.width();
  const bool near_resistance = x2.has_value() && std::abs(*x2) < w;
  const bool near_support = x3.has_value() && std::abs(*x3) < w;
  if (!near_resistance && !near_support) return {};
  const Firing firings[] = {
      {mu(family, Term::AZ, x3), centers.buy_medium},
      {mu(family, Term::AZ, x2), centers.sell_medium},
  };
  return from_firings(firings);
}

ExcessDemand ed4(std::optional<double> x4, std::optional<double> x5, const TermFamily& family,
                 const ConsequentCenters& centers) {
  const double w = family.width();
  const bool above_upline = x4.has_value() && *x4 > 0.0 && *x4 < 2.0 * w;
  const bool below_downline = x5.has_value() && *x5 < 0.0 && *x5 > -2.0 * w;
  if (!above_upline && !below_downline) return {};
  const Firing firings[] = {
      {mu(family, Term::PS, x4), centers.buy_medium},
      {mu(family, Term::NS, x5), centers.sell_medium},
  };
  return from_firings(firings);
}

ExcessDemand ed5(std::optional<double> x4, std::optional<double> x5, const TermFamily& family,
                 const ConsequentCenters& centers) {
  const double w = family.width();
  const bool broke_down = x4.has_value() && *x4 < -w;
  const bool broke_up = x5.has_value() && *x5 > w;
  if (!broke_down && !broke_up) return {};
  const Firing firings[] = {
      {mu(family, Term::PM, x5), centers.buy_small},
      {mu(family, Term::PL, x5), centers.buy_big},
      {mu(family, Term::NM, x4), centers.sell_small},
      {mu(family, Term::NL, x4), centers.sell_big},
  };
  return from_firings(firings);
}

ExcessDemand ed6(std::optional<double> x1, const TermFamily& family,
                 const ConsequentCenters& centers) {
  if (!x1.has_value()) return {};
  const Firing firings[] = {
      {mu(family, Term::PS, x1), centers.sell_small},
      {mu(family, Term::PM, x1), centers.sell_medium},
      {mu(family, Term::PL, x1), centers.sell_big},
      {mu(family, Term::AZ, x1), centers.neutral},
  };
  return from_firings(firings);
}

ExcessDemand ed7(std::optional<double> x1, const TermFamily& family,
                 const ConsequentCenters& centers) {
  if (!x1.has_value()) return {};
  const Firing firings[] = {
      {mu(family, Term::NS, x1), centers.buy_small},
      {mu(family, Term::NM, x1), centers.buy_medium},
      {mu(family, Term::NL, x1), centers.buy_big},
      {mu(family, Term::AZ, x1), centers.neutral},
  };
  return from_firings(firings);
}

ExcessDemand ed8(std::optional<double> x1, std::optional<int> phase, const TermFamily& family,
                 const ConsequentCenters& centers) {
  if (!phase.has_value()) return {};
  switch (*phase) {
    case 1:
      return ed7(x1, family, centers);
    case 2:
      return {centers.buy_big, true};
    case 3:
      return ed6(x1, family, centers);
    default:
      throw std::invalid_argument("manipulator phase must be 1, 2, or 3");
  }
}

ExcessDemand ed9(std::optional<double> x6, std::optional<double> x7, const TermFamily& family,
                 const ConsequentCenters& centers) {
  if (!x6.has_value() && !x7.has_value()) return {};
  const Firing firings[] = {
      {mu(family, Term::PS, x6), centers.buy_small},
      {mu(family, Term::PM, x6), centers.buy_medium},
      {mu(family, Term::PL, x6), centers.buy_big},
      {mu(family, Term::NS, x7), centers.sell_small},
      {mu(family, Term::NM, x7), centers.sell_medium},
      {mu(family, Term::NL, x7), centers.sell_big},
  };
  return from_firings(firings);
}

ExcessDemand ed10(const Portfolio& portfolio, double price, std::optional<double> rolling_max_price,
                  const ConsequentCenters& centers) {
  if (portfolio.amount <= 0.0) return {};
  if (!(portfolio.anchor_price > 0.0) || !(price > 0.0)) {
    throw std::invalid_argument("stop-loss needs positive anchor and price");
  }
  const TermFamily protective(kProtectiveStopWidth);
  const TermFamily trailing(kTrailingStopWidth);
  const double anchor_ratio = std::log(price / portfolio.anchor_price);
  const double protective_firing = protective.membership(Term::NL, anchor_ratio);
  double trailing_firing = 0.0;
  if (rolling_max_price.has_value() && *rolling_max_price > 0.0) {
    const double drawdown = std::log(price / *rolling_max_price);
    const double in_profit = trailing.aggregate(Polarity::Positive, anchor_ratio);
    trailing_firing = in_profit * trailing.membership(Term::NL, drawdown);
  }
  if (protective_firing + trailing_firing < kDenominatorEpsilon) return {};
  // Both stop rules conclude the big-sell action, so the center average
  // collapses to its center.
  return {centers.sell_big, true};
}

ExcessDemand ed11(std::optional<double> x4, std::optional<double> x5, std::optional<double> x8,
                  std::optional<double> x9, const TermFamily& family,
                  const ConsequentCenters& centers) {
  const double buy_firing = mu(family, Term::PS, x5) * agg(family, Polarity::Positive, x8);
  const double sell_firing = mu(family, Term::NS, x4) * agg(family, Polarity::Negative, x9);
  const Firing firings[] = {
      {buy_firing, centers.buy_medium},
      {sell_firing, centers.sell_medium},
  };
  return from_firings(firings);
}

ExcessDemand ed12(std::optional<double> x4, std::optional<double> x5, std::optional<double> x10,
                  const TermFamily& family, const ConsequentCenters& centers) {
  const double buy_firing = mu(family, Term::PS, x5) * agg(family, Polarity::Positive, x10);
  const double sell_firing = mu(family, Term::NS, x4) * agg(family, Polarity::Negative, x10);
  const Firing firings[] = {
      {buy_firing, centers.buy_medium},
      {sell_firing, centers.sell_medium},
  };
  return from_firings(firings);
}

}  // namespace fuzzmarket
