#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "fuzzmarket/series.hpp"

namespace fuzzmarket {

// Inputs x1..x10 consumed by the rule layer. All are log ratios except the
// trend-line slopes x8/x9.
enum class Feature : int {
  X1 = 0,  // short/long moving-average log ratio
  X2,      // price/resistance log ratio
  X3,      // price/support log ratio
  X4,      // price/uptrend-line log ratio
  X5,      // price/downtrend-line log ratio
  X6,      // price/upper-band log ratio
  X7,      // price/lower-band log ratio
  X8,      // slope between the two lowest OBV troughs
  X9,      // slope between the two highest OBV peaks
  X10,     // relative-strength log ratio
};

inline constexpr std::size_t kFeatureCount = 10;

std::string_view to_string(Feature feature);
std::optional<Feature> feature_from_string(std::string_view text);

// Snapshot of the features a group reads at one decision time. Absent means
// the indicator is undefined there (lookback shortfall, no extrema, missing
// exogenous data, or a non-positive ratio base).
struct FeatureVector {
  std::array<std::optional<double>, kFeatureCount> values{};

  std::optional<double> get(Feature f) const { return values[static_cast<std::size_t>(f)]; }
  void set(Feature f, std::optional<double> v) { values[static_cast<std::size_t>(f)] = v; }
};

// A series element tagged with its time index.
struct PricePoint {
  std::size_t index = 0;
  double value = 0.0;

  bool operator==(const PricePoint&) const = default;
};

struct Extrema {
  std::vector<PricePoint> peaks;
  std::vector<PricePoint> troughs;
};

// Mean of the last n values ending at t. Absent while fewer than n values
// exist. Requires n >= 1 and t < prices.size().
std::optional<double> moving_average(const PriceSeries& prices, std::size_t t, std::size_t n);

// x1 = ln(MA_m / MA_n), m < n.
std::optional<double> ma_log_ratio(const PriceSeries& prices, std::size_t t, std::size_t m,
                                   std::size_t n);

// Strict local extrema with centers in [lo, hi], needing both neighbors inside
// the series. Windows too short to hold a center yield empty lists.
Extrema find_extrema(std::span<const double> values, std::size_t lo, std::size_t hi);

// Highest peak (resistance) / lowest trough (support) over [t-n, t-1]; ties
// resolve to the earliest index. Absent when t < n or no extremum exists.
std::optional<double> resistance(const PriceSeries& prices, std::size_t t, std::size_t n);
std::optional<double> support(const PriceSeries& prices, std::size_t t, std::size_t n);

struct BreakoutRatios {
  std::optional<double> x2;  // ln(p_t / resistance)
  std::optional<double> x3;  // ln(p_t / support)
};

BreakoutRatios breakout_ratios(const PriceSeries& prices, std::size_t t, std::size_t n);

// The two lowest troughs / two highest peaks over [t-n, t-1], returned in
// time order. Value ties prefer the earlier point.
std::optional<std::pair<PricePoint, PricePoint>> two_lowest_troughs(const PriceSeries& prices,
                                                                    std::size_t t, std::size_t n);
std::optional<std::pair<PricePoint, PricePoint>> two_highest_peaks(const PriceSeries& prices,
                                                                   std::size_t t, std::size_t n);

enum class TrendDirection { Up, Down };

// Line through two anchor points, extended past them when evaluated.
struct TrendLine {
  double slope = 0.0;
  double intercept = 0.0;
  PricePoint first_anchor;
  PricePoint second_anchor;
  TrendDirection direction = TrendDirection::Up;

  double value_at(double t) const { return slope * t + intercept; }
};

// Up lines need the earlier anchor strictly below the later one, down lines
// the reverse; otherwise the line does not exist.
std::optional<TrendLine> make_trend_line(PricePoint earlier, PricePoint later, TrendDirection direction);

std::optional<TrendLine> uptrend_line(const PriceSeries& prices, std::size_t t, std::size_t n);
std::optional<TrendLine> downtrend_line(const PriceSeries& prices, std::size_t t, std::size_t n);

struct TrendlineRatios {
  std::optional<double> x4;  // ln(p_t / uptrend value at t)
  std::optional<double> x5;  // ln(p_t / downtrend value at t)
};

TrendlineRatios trendline_ratios(const PriceSeries& prices, std::size_t t, std::size_t n);

// Root mean square of the last n log returns ending at t (zero-mean
// convention). Absent while t < n.
std::optional<double> moving_std(const PriceSeries& prices, std::size_t t, std::size_t n);

// Literal bands add/subtract 2 sigma in price units, so the lower band can go
// non-positive and x7 vanish; Relative places bands at ma * exp(+-2 sigma).
enum class BandMode { Literal, Relative };

struct BandRatios {
  std::optional<double> x6;  // ln(p_t / upper band)
  std::optional<double> x7;  // ln(p_t / lower band)
};

BandRatios band_ratios(const PriceSeries& prices, std::size_t t, std::size_t n,
                       BandMode mode = BandMode::Literal);

// On-balance volume: obv_0 = 0, then volume added/subtracted/ignored as the
// price rises/falls/holds. Covers indices where both series have data.
std::vector<double> obv_series(const PriceSeries& prices, const VolumeSeries& volumes);

std::optional<double> obv_value(const PriceSeries& prices, const VolumeSeries& volumes, std::size_t t);

struct ObvSlopes {
  std::optional<double> x8;  // slope of the line through the two lowest OBV troughs
  std::optional<double> x9;  // slope of the line through the two highest OBV peaks
};

// Extrema of the OBV series over [t-n, t-1]. Slopes are plain rise over run
// with no direction requirement.
ObvSlopes obv_trend_slopes(std::span<const double> obv, std::size_t t, std::size_t n);

// x10 = ln(RS_t / mean of RS over the last n steps), RS_k = p_k / index_k.
std::optional<double> rs_log_ratio(const PriceSeries& prices, const IndexSeries& index, std::size_t t,
                                   std::size_t n);

// Max of p_{t-n+1}..p_t, current price included.
std::optional<double> rolling_max(const PriceSeries& prices, std::size_t t, std::size_t n);

// Memoizing front end over the free functions above, for repeated per-step
// queries against a growing price series. Entries are keyed by (t, window)
// and depend only on data up to t, so appends never invalidate them.
class IndicatorCache {
 public:
  explicit IndicatorCache(const PriceSeries& prices, const VolumeSeries* volumes = nullptr,
                          const IndexSeries* index = nullptr);

  std::optional<double> ma(std::size_t t, std::size_t n);
  std::optional<double> ma_log_ratio(std::size_t t, std::size_t m, std::size_t n);
  BreakoutRatios breakout_ratios(std::size_t t, std::size_t n);
  TrendlineRatios trendline_ratios(std::size_t t, std::size_t n);
  std::optional<double> moving_std(std::size_t t, std::size_t n);
  BandRatios band_ratios(std::size_t t, std::size_t n, BandMode mode);
  ObvSlopes obv_trend_slopes(std::size_t t, std::size_t n);
  std::optional<double> rs_log_ratio(std::size_t t, std::size_t n);
  std::optional<double> rolling_max(std::size_t t, std::size_t n);

  // OBV prefix extended to the data available now; empty without volumes.
  const std::vector<double>& obv();

  const PriceSeries& prices() const noexcept { return prices_; }

 private:
  using Key2 = std::tuple<std::size_t, std::size_t>;
  using Key3 = std::tuple<std::size_t, std::size_t, std::size_t>;

  const PriceSeries& prices_;
  const VolumeSeries* volumes_;
  const IndexSeries* index_;

  std::vector<double> obv_;
  std::map<Key2, std::optional<double>> ma_memo_;
  std::map<Key3, std::optional<double>> x1_memo_;
  std::map<Key2, BreakoutRatios> breakout_memo_;
  std::map<Key2, TrendlineRatios> trendline_memo_;
  std::map<Key2, std::optional<double>> std_memo_;
  std::map<Key3, BandRatios> band_memo_;
  std::map<Key2, ObvSlopes> obv_slope_memo_;
  std::map<Key2, std::optional<double>> rs_memo_;
  std::map<Key2, std::optional<double>> rolling_max_memo_;
};

}  // namespace fuzzmarket
