#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzmarket/errors.hpp"
#include "fuzzmarket/indicators.hpp"
#include "fuzzmarket/rule_dsl.hpp"
#include "fuzzmarket/rule_groups.hpp"
#include "fuzzmarket/series.hpp"

namespace fuzzmarket {

// Deterministic standard-normal source. A fixed generator (mt19937_64), a
// fixed 53-bit uniform mapping, and the polar rejection method with a cached
// spare are all part of the output contract: equal seeds give equal price
// paths on every platform, so regression files stay byte-identical.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1), from the top 53 bits of one engine draw.
  double next_uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Piecewise-constant group strength a(t): the entry with the largest start
// <= t applies, 0 before the first entry.
struct StrengthSchedule {
  std::vector<std::pair<std::size_t, double>> steps;

  double at(std::size_t t) const;
  void validate() const;  // throws ConfigError

  static StrengthSchedule constant(double value) { return {{{0, value}}}; }

  bool operator==(const StrengthSchedule&) const = default;
};

enum class GroupKind {
  Ed1,
  Ed2,
  Ed3,
  Ed4,
  Ed5,
  Ed6,
  Ed7,
  Ed8,
  Ed9,
  Ed10,
  Ed11,
  Ed12,
  Dsl,
};

std::string_view to_string(GroupKind kind);
std::optional<GroupKind> group_kind_from_string(std::string_view text);

// 1..12 for built-ins, 0 for DSL groups.
int builtin_number(GroupKind kind);

// Lookback windows: m/n size the moving averages (x1), n_star the extremum
// scans behind x2..x5, n everything else. w is the membership width.
struct GroupParams {
  std::size_t m = 1;
  std::size_t n = 5;
  std::size_t n_star = 5;
  double w = 0.01;

  bool operator==(const GroupParams&) const = default;
};

struct TraderGroup {
  int id = 0;
  GroupKind kind = GroupKind::Ed1;
  StrengthSchedule strength;
  GroupParams params;
  std::optional<RuleBlock> rules;  // Dsl groups only
  std::string dsl_path;            // provenance when loaded from a file
};

// Prices the longest window a group can ask for, for the bootstrap-length
// check.
std::size_t group_lookback(const TraderGroup& group);

struct Scenario {
  std::string comment;
  double p0 = 10.0;
  double sigma = 0.0;
  std::size_t bootstrap_len = 100;  // prices 0..bootstrap_len-1 are pure random walk
  std::size_t horizon = 500;        // total prices produced
  std::uint64_t seed = 0;
  bool keep_noise = false;  // keep the noise term after the bootstrap
  BandMode band_mode = BandMode::Literal;
  std::vector<TraderGroup> groups;
  std::optional<VolumeSeries> volumes;
  std::optional<IndexSeries> index;
  std::string volume_csv;  // provenance when ingested from files
  std::string index_csv;
  std::optional<ManipulatorSchedule> manipulator;
  std::optional<Portfolio> portfolio;

  void validate() const;  // throws ConfigError
};

enum class Regime { Bootstrap, Model };

std::string_view to_string(Regime regime);

// One group's contribution to one transition.
struct GroupStep {
  double demand = 0.0;
  bool active = false;
  double strength = 0.0;
};

// Row t describes the transition into price t: the return it produced, the
// noise drawn, and each group's demand at decision time t-1. Row 0 is the
// starting price with everything zero.
struct RecordRow {
  std::size_t t = 0;
  double price = 0.0;
  double log_return = 0.0;
  Regime regime = Regime::Bootstrap;
  double noise = 0.0;
  std::vector<GroupStep> groups;
};

struct SimulationRecord {
  std::vector<int> group_ids;
  std::vector<RecordRow> rows;
};

// ln p' = ln p + noise + sum(strength * demand). Throws NumericalError (step
// left 0) when the result is not a positive finite price.
double advance_price(double price, double noise, std::span<const GroupStep> groups);

// Pure random walk of `length` prices starting at p0.
PriceSeries bootstrap_random_walk(double p0, double sigma, std::size_t length, GaussianRng& rng);

// Buys of demand > 0 add strength*demand shares at `price` and blend the
// anchor as a share-weighted average; sells remove strength*|demand| shares
// and clear the anchor when the position empties.
Portfolio update_portfolio(const Portfolio& portfolio, double demand, double strength, double price);

class Simulation {
 public:
  explicit Simulation(Scenario scenario);

  bool done() const { return prices_.size() >= scenario_.horizon; }
  void step();
  void run();

  const Scenario& scenario() const noexcept { return scenario_; }
  const PriceSeries& prices() const noexcept { return prices_; }
  const SimulationRecord& record() const noexcept { return record_; }
  const Portfolio& portfolio() const noexcept { return portfolio_; }

 private:
  ExcessDemand evaluate_group(std::size_t index, std::size_t t);
  FeatureVector gather_features(const TraderGroup& group, std::span<const Feature> wanted,
                                std::size_t t);

  Scenario scenario_;
  GaussianRng rng_;
  PriceSeries prices_;
  IndicatorCache cache_;
  std::vector<TermFamily> families_;
  std::vector<std::optional<CompiledRules>> compiled_;
  Portfolio portfolio_;
  SimulationRecord record_;
};

SimulationRecord simulate(const Scenario& scenario);

}  // namespace fuzzmarket
