#include "fuzzmarket/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fuzzmarket {

double GaussianRng::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Polar rejection: draw points in the unit disk, map each accepted pair to
  // two independent normals, hand back one and cache the other.
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * next_uniform() - 1.0;
    v = 2.0 * next_uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

double StrengthSchedule::at(std::size_t t) const {
  double value = 0.0;
  for (const auto& [start, level] : steps) {
    if (start > t) break;
    value = level;
  }
  return value;
}

void StrengthSchedule::validate() const {
  if (steps.empty()) {
    throw ConfigError("a strength schedule needs at least one entry");
  }
  std::size_t previous = 0;
  bool first = true;
  for (const auto& [start, level] : steps) {
    if (!first && start <= previous) {
      throw ConfigError("strength schedule starts must be strictly increasing");
    }
    if (!std::isfinite(level) || level < 0.0) {
      throw ConfigError("strength values must be finite and non-negative");
    }
    previous = start;
    first = false;
  }
}

std::string_view to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::Ed1:
      return "ed1";
    case GroupKind::Ed2:
      return "ed2";
    case GroupKind::Ed3:
      return "ed3";
    case GroupKind::Ed4:
      return "ed4";
    case GroupKind::Ed5:
      return "ed5";
    case GroupKind::Ed6:
      return "ed6";
    case GroupKind::Ed7:
      return "ed7";
    case GroupKind::Ed8:
      return "ed8";
    case GroupKind::Ed9:
      return "ed9";
    case GroupKind::Ed10:
      return "ed10";
    case GroupKind::Ed11:
      return "ed11";
    case GroupKind::Ed12:
      return "ed12";
    case GroupKind::Dsl:
      return "dsl";
  }
  return "?";
}

std::optional<GroupKind> group_kind_from_string(std::string_view text) {
  static constexpr std::array<GroupKind, 13> all = {
      GroupKind::Ed1, GroupKind::Ed2,  GroupKind::Ed3,  GroupKind::Ed4, GroupKind::Ed5,
      GroupKind::Ed6, GroupKind::Ed7,  GroupKind::Ed8,  GroupKind::Ed9, GroupKind::Ed10,
      GroupKind::Ed11, GroupKind::Ed12, GroupKind::Dsl};
  for (GroupKind kind : all) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

int builtin_number(GroupKind kind) {
  if (kind == GroupKind::Dsl) return 0;
  return static_cast<int>(kind) + 1;
}

namespace {

// Longest window a feature can ask for under the given params.
std::size_t feature_lookback(Feature feature, const GroupParams& params) {
  switch (feature) {
    case Feature::X1:
      return params.n;
    case Feature::X2:
    case Feature::X3:
    case Feature::X4:
    case Feature::X5:
      return params.n_star;
    case Feature::X6:
    case Feature::X7:
      return params.n + 1;
    case Feature::X8:
    case Feature::X9:
    case Feature::X10:
      return params.n;
  }
  return params.n;
}

std::vector<Feature> builtin_features(GroupKind kind) {
  switch (kind) {
    case GroupKind::Ed1:
    case GroupKind::Ed6:
    case GroupKind::Ed7:
    case GroupKind::Ed8:
      return {Feature::X1};
    case GroupKind::Ed2:
    case GroupKind::Ed3:
      return {Feature::X2, Feature::X3};
    case GroupKind::Ed4:
    case GroupKind::Ed5:
      return {Feature::X4, Feature::X5};
    case GroupKind::Ed9:
      return {Feature::X6, Feature::X7};
    case GroupKind::Ed10:
      return {};
    case GroupKind::Ed11:
      return {Feature::X4, Feature::X5, Feature::X8, Feature::X9};
    case GroupKind::Ed12:
      return {Feature::X4, Feature::X5, Feature::X10};
    case GroupKind::Dsl:
      return {};
  }
  return {};
}

std::vector<Feature> group_features(const TraderGroup& group) {
  if (group.kind != GroupKind::Dsl) return builtin_features(group.kind);
  if (!group.rules.has_value()) return {};
  // Mirrors CompiledRules::referenced_features without compiling.
  std::vector<Feature> out;
  auto add = [&out](Feature f) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  };
  if (group.rules->guard.has_value()) {
    for (const auto& conjunction : group.rules->guard->disjuncts) {
      for (const GuardPredicate& pred : conjunction) add(pred.feature);
    }
  }
  for (const Rule& rule : group.rules->rules) {
    for (const Condition& condition : rule.antecedents) add(condition.feature);
  }
  return out;
}

}  // namespace

std::size_t group_lookback(const TraderGroup& group) {
  std::size_t lookback = 1;
  if (group.kind == GroupKind::Ed10) {
    lookback = std::max(lookback, group.params.n);
  }
  for (Feature feature : group_features(group)) {
    lookback = std::max(lookback, feature_lookback(feature, group.params));
  }
  return lookback;
}

void Scenario::validate() const {
  if (!std::isfinite(p0) || p0 <= 0.0) {
    throw ConfigError("p0 must be finite and positive");
  }
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw ConfigError("sigma must be finite and non-negative");
  }
  if (bootstrap_len < 1) {
    throw ConfigError("bootstrap length must be at least 1");
  }
  if (horizon <= bootstrap_len) {
    throw ConfigError("horizon must exceed the bootstrap length");
  }
  for (const TraderGroup& group : groups) {
    const std::string label = "group " + std::to_string(group.id) + " (" +
                              std::string(to_string(group.kind)) + ")";
    group.strength.validate();
    if (group.params.m < 1 || group.params.n < 1 || group.params.n_star < 1) {
      throw ConfigError(label + ": window lengths must be at least 1");
    }
    if (!std::isfinite(group.params.w) || group.params.w <= 0.0) {
      throw ConfigError(label + ": membership width must be finite and positive");
    }
    const auto features = group_features(group);
    const bool uses_x1 =
        std::find(features.begin(), features.end(), Feature::X1) != features.end();
    if (uses_x1 && group.params.m >= group.params.n) {
      throw ConfigError(label + ": the short average m must be shorter than n");
    }
    const bool fixed_m = group.kind == GroupKind::Ed6 || group.kind == GroupKind::Ed7 ||
                         group.kind == GroupKind::Ed8;
    if (fixed_m && group.params.m != 1) {
      throw ConfigError(label + ": m is fixed to 1 for this kind");
    }
    if (group.kind == GroupKind::Dsl) {
      if (!group.rules.has_value()) {
        throw ConfigError(label + ": dsl groups need a rule block");
      }
    } else if (group.rules.has_value()) {
      throw ConfigError(label + ": only dsl groups carry a rule block");
    }
    const std::size_t lookback = group_lookback(group);
    if (bootstrap_len < lookback) {
      throw ConfigError(label + ": bootstrap length " + std::to_string(bootstrap_len) +
                        " is shorter than the group lookback " + std::to_string(lookback));
    }
  }
  if (manipulator.has_value()) {
    try {
      manipulator->validate();
    } catch (const std::invalid_argument& error) {
      throw ConfigError(error.what());
    }
  }
  if (portfolio.has_value()) {
    if (!std::isfinite(portfolio->amount) || portfolio->amount < 0.0) {
      throw ConfigError("portfolio amount must be finite and non-negative");
    }
    if (portfolio->amount > 0.0 &&
        (!std::isfinite(portfolio->anchor_price) || portfolio->anchor_price <= 0.0)) {
      throw ConfigError("portfolio anchor price must be finite and positive");
    }
  }
}

std::string_view to_string(Regime regime) {
  return regime == Regime::Bootstrap ? "bootstrap" : "model";
}

double advance_price(double price, double noise, std::span<const GroupStep> groups) {
  double log_price = std::log(price) + noise;
  for (const GroupStep& g : groups) {
    log_price += g.strength * g.demand;
  }
  const double next = std::exp(log_price);
  if (!std::isfinite(next) || next <= 0.0) {
    throw NumericalError("price accumulation left the positive finite range", 0);
  }
  return next;
}

PriceSeries bootstrap_random_walk(double p0, double sigma, std::size_t length, GaussianRng& rng) {
  if (!std::isfinite(p0) || p0 <= 0.0) {
    throw std::invalid_argument("p0 must be finite and positive");
  }
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw std::invalid_argument("sigma must be finite and non-negative");
  }
  if (length < 1) {
    throw std::invalid_argument("walk length must be at least 1");
  }
  PriceSeries prices;
  prices.push_back(p0);
  for (std::size_t t = 1; t < length; ++t) {
    const double noise = sigma * rng.next_normal();
    const double next = std::exp(std::log(prices[t - 1]) + noise);
    if (!std::isfinite(next) || next <= 0.0) {
      throw NumericalError("random walk left the positive finite range", t);
    }
    prices.push_back(next);
  }
  return prices;
}

Portfolio update_portfolio(const Portfolio& portfolio, double demand, double strength,
                           double price) {
  if (!std::isfinite(demand)) throw std::invalid_argument("demand must be finite");
  if (!std::isfinite(strength) || strength < 0.0) {
    throw std::invalid_argument("strength must be finite and non-negative");
  }
  if (!std::isfinite(price) || price <= 0.0) {
    throw std::invalid_argument("price must be finite and positive");
  }
  const double size = strength * std::abs(demand);
  if (size <= 0.0) return portfolio;
  if (demand > 0.0) {
    if (portfolio.amount <= 0.0) return {size, price};
    const double total = portfolio.amount + size;
    const double anchor = (portfolio.amount * portfolio.anchor_price + size * price) / total;
    return {total, anchor};
  }
  const double remaining = portfolio.amount - size;
  if (remaining <= 0.0) return {0.0, 0.0};
  return {remaining, portfolio.anchor_price};
}

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)),
      rng_(scenario_.seed),
      cache_(prices_, scenario_.volumes.has_value() ? &*scenario_.volumes : nullptr,
             scenario_.index.has_value() ? &*scenario_.index : nullptr) {
  scenario_.validate();
  families_.reserve(scenario_.groups.size());
  compiled_.resize(scenario_.groups.size());
  record_.group_ids.reserve(scenario_.groups.size());
  for (std::size_t i = 0; i < scenario_.groups.size(); ++i) {
    const TraderGroup& group = scenario_.groups[i];
    families_.emplace_back(group.params.w);
    if (group.kind == GroupKind::Dsl) {
      compiled_[i] = compile_rule_block(*group.rules, families_.back());
    }
    record_.group_ids.push_back(group.id);
  }
  if (scenario_.portfolio.has_value()) portfolio_ = *scenario_.portfolio;
  prices_.push_back(scenario_.p0);
  RecordRow row;
  row.t = 0;
  row.price = scenario_.p0;
  row.regime = scenario_.bootstrap_len > 0 ? Regime::Bootstrap : Regime::Model;
  row.groups.resize(scenario_.groups.size());
  record_.rows.push_back(std::move(row));
}

FeatureVector Simulation::gather_features(const TraderGroup& group,
                                          std::span<const Feature> wanted, std::size_t t) {
  FeatureVector features;
  const GroupParams& params = group.params;
  for (Feature feature : wanted) {
    switch (feature) {
      case Feature::X1:
        features.set(feature, cache_.ma_log_ratio(t, params.m, params.n));
        break;
      case Feature::X2:
        features.set(feature, cache_.breakout_ratios(t, params.n_star).x2);
        break;
      case Feature::X3:
        features.set(feature, cache_.breakout_ratios(t, params.n_star).x3);
        break;
      case Feature::X4:
        features.set(feature, cache_.trendline_ratios(t, params.n_star).x4);
        break;
      case Feature::X5:
        features.set(feature, cache_.trendline_ratios(t, params.n_star).x5);
        break;
      case Feature::X6:
        features.set(feature, cache_.band_ratios(t, params.n, scenario_.band_mode).x6);
        break;
      case Feature::X7:
        features.set(feature, cache_.band_ratios(t, params.n, scenario_.band_mode).x7);
        break;
      case Feature::X8:
        features.set(feature, cache_.obv_trend_slopes(t, params.n).x8);
        break;
      case Feature::X9:
        features.set(feature, cache_.obv_trend_slopes(t, params.n).x9);
        break;
      case Feature::X10:
        features.set(feature, cache_.rs_log_ratio(t, params.n));
        break;
    }
  }
  return features;
}

ExcessDemand Simulation::evaluate_group(std::size_t index, std::size_t t) {
  const TraderGroup& group = scenario_.groups[index];
  const TermFamily& family = families_[index];
  const auto wanted = group_features(group);
  const FeatureVector features = gather_features(group, wanted, t);
  switch (group.kind) {
    case GroupKind::Ed1:
      return ed1(features.get(Feature::X1), family);
    case GroupKind::Ed2:
      return ed2(features.get(Feature::X2), features.get(Feature::X3), family);
    case GroupKind::Ed3:
      return ed3(features.get(Feature::X2), features.get(Feature::X3), family);
    case GroupKind::Ed4:
      return ed4(features.get(Feature::X4), features.get(Feature::X5), family);
    case GroupKind::Ed5:
      return ed5(features.get(Feature::X4), features.get(Feature::X5), family);
    case GroupKind::Ed6:
      return ed6(features.get(Feature::X1), family);
    case GroupKind::Ed7:
      return ed7(features.get(Feature::X1), family);
    case GroupKind::Ed8: {
      std::optional<int> phase;
      if (scenario_.manipulator.has_value()) phase = scenario_.manipulator->phase(t);
      return ed8(features.get(Feature::X1), phase, family);
    }
    case GroupKind::Ed9:
      return ed9(features.get(Feature::X6), features.get(Feature::X7), family);
    case GroupKind::Ed10:
      return ed10(portfolio_, prices_[t], cache_.rolling_max(t, group.params.n));
    case GroupKind::Ed11:
      return ed11(features.get(Feature::X4), features.get(Feature::X5), features.get(Feature::X8),
                  features.get(Feature::X9), family);
    case GroupKind::Ed12:
      return ed12(features.get(Feature::X4), features.get(Feature::X5),
                  features.get(Feature::X10), family);
    case GroupKind::Dsl:
      return compiled_[index]->evaluate(features);
  }
  return {};
}

void Simulation::step() {
  if (done()) return;
  const std::size_t t_next = prices_.size();
  const std::size_t t = t_next - 1;
  const bool model = t_next >= scenario_.bootstrap_len;

  // The noise draw order is part of the determinism contract: one normal per
  // bootstrap transition, plus one per model transition when noise is kept.
  double noise = 0.0;
  if (!model || scenario_.keep_noise) {
    noise = scenario_.sigma * rng_.next_normal();
  }

  std::vector<GroupStep> steps(scenario_.groups.size());
  if (model) {
    for (std::size_t i = 0; i < scenario_.groups.size(); ++i) {
      const TraderGroup& group = scenario_.groups[i];
      const ExcessDemand demand = evaluate_group(i, t);
      steps[i] = {demand.value, demand.active, group.strength.at(t)};
    }
  }

  double next_price = 0.0;
  try {
    next_price = advance_price(prices_[t], noise, steps);
  } catch (NumericalError& error) {
    error.set_step(t_next);
    throw;
  }

  if (model) {
    for (std::size_t i = 0; i < scenario_.groups.size(); ++i) {
      if (scenario_.groups[i].kind == GroupKind::Ed10 && steps[i].active) {
        portfolio_ = update_portfolio(portfolio_, steps[i].demand, steps[i].strength, prices_[t]);
      }
    }
  }

  prices_.push_back(next_price);
  RecordRow row;
  row.t = t_next;
  row.price = next_price;
  row.log_return = prices_.log_return(t_next);
  row.regime = t_next < scenario_.bootstrap_len ? Regime::Bootstrap : Regime::Model;
  row.noise = noise;
  row.groups = std::move(steps);
  record_.rows.push_back(std::move(row));
}

void Simulation::run() {
  while (!done()) step();
}

SimulationRecord simulate(const Scenario& scenario) {
  Simulation simulation(scenario);
  simulation.run();
  return simulation.record();
}

}  // namespace fuzzmarket
