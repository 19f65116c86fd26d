#include "fuzzmarket/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fuzzmarket {

namespace {

void check_index(std::size_t t, std::size_t size) {
  if (t >= size) {
    throw std::out_of_range("time index " + std::to_string(t) + " out of range (size " +
                            std::to_string(size) + ")");
  }
}

void check_window(std::size_t n) {
  if (n == 0) throw std::invalid_argument("window length must be >= 1");
}

std::optional<double> log_ratio(double value, std::optional<double> base) {
  if (!base.has_value() || *base <= 0.0) return std::nullopt;
  return std::log(value / *base);
}

// Picks the extremum whose value wins under `better` (ties keep the earlier
// point, which arrives first in index order).
template <typename Better>
std::optional<PricePoint> best_point(const std::vector<PricePoint>& points, Better better) {
  std::optional<PricePoint> best;
  for (const PricePoint& p : points) {
    if (!best.has_value() || better(p.value, best->value)) best = p;
  }
  return best;
}

// Two best extrema under `better`, returned in time order.
template <typename Better>
std::optional<std::pair<PricePoint, PricePoint>> best_two(const std::vector<PricePoint>& points,
                                                          Better better) {
  if (points.size() < 2) return std::nullopt;
  std::vector<PricePoint> sorted(points);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const PricePoint& a, const PricePoint& b) { return better(a.value, b.value); });
  PricePoint a = sorted[0];
  PricePoint b = sorted[1];
  if (b.index < a.index) std::swap(a, b);
  return std::make_pair(a, b);
}

}  // namespace

std::string_view to_string(Feature feature) {
  static constexpr std::array<std::string_view, kFeatureCount> names = {
      "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9", "x10"};
  return names[static_cast<std::size_t>(feature)];
}

std::optional<Feature> feature_from_string(std::string_view text) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    Feature f = static_cast<Feature>(i);
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

std::optional<double> moving_average(const PriceSeries& prices, std::size_t t, std::size_t n) {
  check_window(n);
  check_index(t, prices.size());
  if (t + 1 < n) return std::nullopt;
  double sum = 0.0;
  for (std::size_t k = t + 1 - n; k <= t; ++k) sum += prices[k];
  return sum / static_cast<double>(n);
}

std::optional<double> ma_log_ratio(const PriceSeries& prices, std::size_t t, std::size_t m,
                                   std::size_t n) {
  if (m == 0 || m >= n) throw std::invalid_argument("ma_log_ratio needs 1 <= m < n");
  check_index(t, prices.size());
  auto short_ma = moving_average(prices, t, m);
  auto long_ma = moving_average(prices, t, n);
  if (!short_ma.has_value() || !long_ma.has_value()) return std::nullopt;
  return std::log(*short_ma / *long_ma);
}

Extrema find_extrema(std::span<const double> values, std::size_t lo, std::size_t hi) {
  Extrema out;
  if (values.size() < 3) return out;
  std::size_t first = std::max<std::size_t>(lo, 1);
  std::size_t last = std::min(hi, values.size() - 2);
  for (std::size_t k = first; k <= last; ++k) {
    const double prev = values[k - 1];
    const double v = values[k];
    const double next = values[k + 1];
    if (v > prev && v > next) out.peaks.push_back({k, v});
    if (v < prev && v < next) out.troughs.push_back({k, v});
  }
  return out;
}

namespace {

Extrema window_extrema(const PriceSeries& prices, std::size_t t, std::size_t n) {
  return find_extrema(prices.values(), t - n, t - 1);
}

}  // namespace

std::optional<double> resistance(const PriceSeries& prices, std::size_t t, std::size_t n) {
  check_window(n);
  check_index(t, prices.size());
  if (t < n) return std::nullopt;
  auto best = best_point(window_extrema(prices, t, n).peaks, std::greater<double>());
  if (!best.has_value()) return std::nullopt;
  return best->value;
}

std::optional<double> support(const PriceSeries& prices, std::size_t t, std::size_t n) {
  check_window(n);
  check_index(t, prices.size());
  if (t < n) return std::nullopt;
  auto best = best_point(window_extrema(prices, t, n).troughs, std::less<double>());
  if (!best.has_value()) return std::nullopt;
  return best->value;
}

BreakoutRatios breakout_ratios(const PriceSeries& prices, std::size_t t, std::size_t n) {
  BreakoutRatios out;
  out.x2 = log_ratio(prices.at(t), resistance(prices, t, n));
  out.x3 = log_ratio(prices.at(t), support(prices, t, n));
  return out;
}

std::optional<std::pair<PricePoint, PricePoint>> two_lowest_troughs(const PriceSeries& prices,
                                                                    std::size_t t, std::size_t n) {
  check_window(n);
  check_index(t, prices.size());
  if (t < n) return std::nullopt;
  return best_two(window_extrema(prices, t, n).troughs, std::less<double>());
}

std::optional<std::pair<PricePoint, PricePoint>> two_highest_peaks(const PriceSeries& prices,
                                                                   std::size_t t, std::size_t n) {
  check_window(n);
  check_index(t, prices.size());
  if (t < n) return std::nullopt;
  return best_two(window_extrema(prices, t, n).peaks, std::greater<double>());
}

std::optional<TrendLine> make_trend_line(PricePoint earlier, PricePoint later,
                                         TrendDirection direction) {
  if (earlier.index >= later.index) {
    throw std::invalid_argument("trend line anchors must be in strictly increasing time order");
  }
  if (direction == TrendDirection::Up && !(earlier.value < later.value)) return std::nullopt;
  if (direction == TrendDirection::Down && !(earlier.value > later.value)) return std::nullopt;
  TrendLine line;
  line.slope = (later.value - earlier.value) /
               (static_cast<double>(later.index) - static_cast<double>(earlier.index));
  line.intercept = earlier.value - line.slope * static_cast<double>(earlier.index);
  line.first_anchor = earlier;
  line.second_anchor = later;
  line.direction = direction;
  return line;
}

std::optional<TrendLine> uptrend_line(const PriceSeries& prices, std::size_t t, std::size_t n) {
  auto anchors = two_lowest_troughs(prices, t, n);
  if (!anchors.has_value()) return std::nullopt;
  return make_trend_line(anchors->first, anchors->second, TrendDirection::Up);
}

std::optional<TrendLine> downtrend_line(const PriceSeries& prices, std::size_t t, std::size_t n) {
  auto anchors = two_highest_peaks(prices, t, n);
  if (!anchors.has_value()) return std::nullopt;
  return make_trend_line(anchors->first, anchors->second, TrendDirection::Down);
}

TrendlineRatios trendline_ratios(const PriceSeries& prices, std::size_t t, std::size_t n) {
  TrendlineRatios out;
  if (auto line = uptrend_line(prices, t, n)) {
    out.x4 = log_ratio(prices.at(t), line->value_at(static_cast<double>(t)));
  }
  if (auto line = downtrend_line(prices, t, n)) {
    out.x5 = log_ratio(prices.at(t), line->value_at(static_cast<double>(t)));
  }
  return out;
}

std::optional<double> moving_std(const PriceSeries& prices, std::size_t t, std::size_t n) {
  check_window(n);
  check_index(t, prices.size());
  if (t < n) return std::nullopt;
  double sum_sq = 0.0;
  for (std::size_t k = t + 1 - n; k <= t; ++k) {
    const double r = prices.log_return(k);
    sum_sq += r * r;
  }
  return std::sqrt(sum_sq / static_cast<double>(n));
}

BandRatios band_ratios(const PriceSeries& prices, std::size_t t, std::size_t n, BandMode mode) {
  BandRatios out;
  auto ma = moving_average(prices, t, n);
  auto sigma = moving_std(prices, t, n);
  if (!ma.has_value() || !sigma.has_value()) return out;
  double upper = 0.0;
  double lower = 0.0;
  if (mode == BandMode::Literal) {
    upper = *ma + 2.0 * *sigma;
    lower = *ma - 2.0 * *sigma;
  } else {
    upper = *ma * std::exp(2.0 * *sigma);
    lower = *ma * std::exp(-2.0 * *sigma);
  }
  out.x6 = log_ratio(prices.at(t), upper);
  out.x7 = log_ratio(prices.at(t), lower);
  return out;
}

std::vector<double> obv_series(const PriceSeries& prices, const VolumeSeries& volumes) {
  const std::size_t len = std::min(prices.size(), volumes.size());
  std::vector<double> obv;
  obv.reserve(len);
  if (len == 0) return obv;
  obv.push_back(0.0);
  for (std::size_t k = 1; k < len; ++k) {
    double step = 0.0;
    if (prices[k] > prices[k - 1]) {
      step = volumes.at(k);
    } else if (prices[k] < prices[k - 1]) {
      step = -volumes.at(k);
    }
    obv.push_back(obv.back() + step);
  }
  return obv;
}

std::optional<double> obv_value(const PriceSeries& prices, const VolumeSeries& volumes,
                                std::size_t t) {
  if (t >= prices.size() || t >= volumes.size()) return std::nullopt;
  auto obv = obv_series(prices, volumes);
  return obv[t];
}

ObvSlopes obv_trend_slopes(std::span<const double> obv, std::size_t t, std::size_t n) {
  check_window(n);
  ObvSlopes out;
  if (t < n || t >= obv.size()) return out;
  Extrema extrema = find_extrema(obv, t - n, t - 1);
  if (auto pair = best_two(extrema.troughs, std::less<double>())) {
    out.x8 = (pair->second.value - pair->first.value) /
             (static_cast<double>(pair->second.index) - static_cast<double>(pair->first.index));
  }
  if (auto pair = best_two(extrema.peaks, std::greater<double>())) {
    out.x9 = (pair->second.value - pair->first.value) /
             (static_cast<double>(pair->second.index) - static_cast<double>(pair->first.index));
  }
  return out;
}

std::optional<double> rs_log_ratio(const PriceSeries& prices, const IndexSeries& index, std::size_t t,
                                   std::size_t n) {
  check_window(n);
  check_index(t, prices.size());
  if (t + 1 < n) return std::nullopt;
  if (t >= index.size()) return std::nullopt;
  double sum = 0.0;
  for (std::size_t k = t + 1 - n; k <= t; ++k) {
    sum += prices[k] / index.at(k);
  }
  const double mean = sum / static_cast<double>(n);
  const double rs_now = prices[t] / index.at(t);
  if (mean <= 0.0) return std::nullopt;
  return std::log(rs_now / mean);
}

std::optional<double> rolling_max(const PriceSeries& prices, std::size_t t, std::size_t n) {
  check_window(n);
  check_index(t, prices.size());
  if (t + 1 < n) return std::nullopt;
  double best = prices[t + 1 - n];
  for (std::size_t k = t + 2 - n; k <= t; ++k) best = std::max(best, prices[k]);
  return best;
}

IndicatorCache::IndicatorCache(const PriceSeries& prices, const VolumeSeries* volumes,
                               const IndexSeries* index)
    : prices_(prices), volumes_(volumes), index_(index) {}

std::optional<double> IndicatorCache::ma(std::size_t t, std::size_t n) {
  auto [it, fresh] = ma_memo_.try_emplace({t, n});
  if (fresh) it->second = moving_average(prices_, t, n);
  return it->second;
}

std::optional<double> IndicatorCache::ma_log_ratio(std::size_t t, std::size_t m, std::size_t n) {
  auto [it, fresh] = x1_memo_.try_emplace({t, m, n});
  if (fresh) it->second = fuzzmarket::ma_log_ratio(prices_, t, m, n);
  return it->second;
}

BreakoutRatios IndicatorCache::breakout_ratios(std::size_t t, std::size_t n) {
  auto [it, fresh] = breakout_memo_.try_emplace({t, n});
  if (fresh) it->second = fuzzmarket::breakout_ratios(prices_, t, n);
  return it->second;
}

TrendlineRatios IndicatorCache::trendline_ratios(std::size_t t, std::size_t n) {
  auto [it, fresh] = trendline_memo_.try_emplace({t, n});
  if (fresh) it->second = fuzzmarket::trendline_ratios(prices_, t, n);
  return it->second;
}

std::optional<double> IndicatorCache::moving_std(std::size_t t, std::size_t n) {
  auto [it, fresh] = std_memo_.try_emplace({t, n});
  if (fresh) it->second = fuzzmarket::moving_std(prices_, t, n);
  return it->second;
}

BandRatios IndicatorCache::band_ratios(std::size_t t, std::size_t n, BandMode mode) {
  auto [it, fresh] = band_memo_.try_emplace({t, n, static_cast<std::size_t>(mode)});
  if (fresh) it->second = fuzzmarket::band_ratios(prices_, t, n, mode);
  return it->second;
}

ObvSlopes IndicatorCache::obv_trend_slopes(std::size_t t, std::size_t n) {
  auto [it, fresh] = obv_slope_memo_.try_emplace({t, n});
  if (fresh) it->second = fuzzmarket::obv_trend_slopes(obv(), t, n);
  return it->second;
}

std::optional<double> IndicatorCache::rs_log_ratio(std::size_t t, std::size_t n) {
  auto [it, fresh] = rs_memo_.try_emplace({t, n});
  if (fresh && index_ != nullptr) {
    it->second = fuzzmarket::rs_log_ratio(prices_, *index_, t, n);
  }
  return it->second;
}

std::optional<double> IndicatorCache::rolling_max(std::size_t t, std::size_t n) {
  auto [it, fresh] = rolling_max_memo_.try_emplace({t, n});
  if (fresh) it->second = fuzzmarket::rolling_max(prices_, t, n);
  return it->second;
}

const std::vector<double>& IndicatorCache::obv() {
  if (volumes_ == nullptr) return obv_;
  const std::size_t len = std::min(prices_.size(), volumes_->size());
  if (obv_.empty() && len > 0) obv_.push_back(0.0);
  for (std::size_t k = obv_.size(); k < len; ++k) {
    double step = 0.0;
    if (prices_[k] > prices_[k - 1]) {
      step = volumes_->at(k);
    } else if (prices_[k] < prices_[k - 1]) {
      step = -volumes_->at(k);
    }
    obv_.push_back(obv_.back() + step);
  }
  return obv_;
}

}  // namespace fuzzmarket
