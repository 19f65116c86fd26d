#include "fuzzmarket/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fuzzmarket {

TermFamily::TermFamily(double width) : width_(width) {
  if (!std::isfinite(width) || width <= 0.0) {
    throw std::invalid_argument("term family width must be finite and positive, got " +
                                std::to_string(width));
  }
}

namespace {

// Unit triangle with apex at center and feet one w to each side.
double triangle(double x, double center, double w) {
  const double d = std::abs(x - center);
  return d >= w ? 0.0 : 1.0 - d / w;
}

// Rises over [start, start + w], then holds 1.
double shoulder(double x, double start, double w) {
  if (x <= start) return 0.0;
  if (x >= start + w) return 1.0;
  return (x - start) / w;
}

}  // namespace

double TermFamily::membership(Term term, double x) const {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("membership input must be finite");
  }
  const double w = width_;
  switch (term) {
    case Term::AZ:
      return triangle(x, 0.0, w);
    case Term::PS:
      return triangle(x, w, w);
    case Term::PM:
      return triangle(x, 2.0 * w, w);
    case Term::PL:
      return shoulder(x, 2.0 * w, w);
    case Term::NS:
      return triangle(x, -w, w);
    case Term::NM:
      return triangle(x, -2.0 * w, w);
    case Term::NL:
      return shoulder(-x, 2.0 * w, w);
  }
  return 0.0;
}

double TermFamily::aggregate(Polarity side, double x) const {
  if (side == Polarity::Positive) {
    return std::max({membership(Term::PS, x), membership(Term::PM, x), membership(Term::PL, x)});
  }
  return std::max({membership(Term::NS, x), membership(Term::NM, x), membership(Term::NL, x)});
}

double ConsequentCenters::of(Action action) const {
  switch (action) {
    case Action::BS:
      return buy_small;
    case Action::BM:
      return buy_medium;
    case Action::BB:
      return buy_big;
    case Action::SS:
      return sell_small;
    case Action::SM:
      return sell_medium;
    case Action::SB:
      return sell_big;
    case Action::N:
      return neutral;
  }
  return 0.0;
}

void ConsequentCenters::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(buy_small) || !finite(buy_medium) || !finite(buy_big) || !finite(sell_small) ||
      !finite(sell_medium) || !finite(sell_big) || !finite(neutral)) {
    throw std::invalid_argument("consequent centers must be finite");
  }
  if (neutral != 0.0) {
    throw std::invalid_argument("neutral center must be 0");
  }
  if (!(0.0 < buy_small && buy_small < buy_medium && buy_medium < buy_big && buy_big <= 0.4)) {
    throw std::invalid_argument("buy centers must satisfy 0 < small < medium < big <= 0.4");
  }
  if (sell_small != -buy_small || sell_medium != -buy_medium || sell_big != -buy_big) {
    throw std::invalid_argument("sell centers must mirror buy centers");
  }
}

double center_average(std::span<const Firing> firings) {
  double numerator = 0.0;
  double denominator = 0.0;
  for (const Firing& f : firings) {
    numerator += f.degree * f.center;
    denominator += f.degree;
  }
  if (denominator < kDenominatorEpsilon) return 0.0;
  return numerator / denominator;
}

std::string_view to_string(Term term) {
  switch (term) {
    case Term::PS:
      return "PS";
    case Term::PM:
      return "PM";
    case Term::PL:
      return "PL";
    case Term::NS:
      return "NS";
    case Term::NM:
      return "NM";
    case Term::NL:
      return "NL";
    case Term::AZ:
      return "AZ";
  }
  return "?";
}

std::string_view to_string(Action action) {
  switch (action) {
    case Action::BS:
      return "BS";
    case Action::BM:
      return "BM";
    case Action::BB:
      return "BB";
    case Action::SS:
      return "SS";
    case Action::SM:
      return "SM";
    case Action::SB:
      return "SB";
    case Action::N:
      return "N";
  }
  return "?";
}

std::optional<Term> term_from_string(std::string_view text) {
  for (Term t : kAllTerms) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

std::optional<Action> action_from_string(std::string_view text) {
  for (Action a : kAllActions) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

}  // namespace fuzzmarket
