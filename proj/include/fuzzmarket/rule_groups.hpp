#pragma once

#include <cstddef>
#include <optional>

#include "fuzzmarket/fuzzy.hpp"

namespace fuzzmarket {

// Demand a group contributes at one decision time. Inactive groups always
// carry value 0: a group goes inactive when its domain condition fails, a
// required feature is absent, or every antecedent fires below the epsilon
// guard.
struct ExcessDemand {
  double value = 0.0;
  bool active = false;

  bool operator==(const ExcessDemand&) const = default;
};

// Long position tracked for the stop-loss group: shares held and the
// average entry price. The anchor is meaningless while amount == 0.
struct Portfolio {
  double amount = 0.0;
  double anchor_price = 0.0;
};

// Three contiguous half-open phases [accumulation, markup), [markup,
// distribution), [distribution, end).
struct ManipulatorSchedule {
  std::size_t accumulation_start = 0;
  std::size_t markup_start = 0;
  std::size_t distribution_start = 0;
  std::size_t end = 0;

  // 1, 2, or 3 inside the schedule, absent outside it.
  std::optional<int> phase(std::size_t t) const;

  // Throws std::invalid_argument unless starts are non-decreasing.
  void validate() const;
};

// Moving-average crossover: x1 = ln(MA_m / MA_n). Trades in the direction of
// the crossover, larger for larger gaps, except extreme gaps fade back.
ExcessDemand ed1(std::optional<double> x1, const TermFamily& family,
                 const ConsequentCenters& centers = {});

// Resistance/support breakout: buys as price clears resistance (x2 > 0),
// sells as it loses support (x3 < 0).
ExcessDemand ed2(std::optional<double> x2, std::optional<double> x3, const TermFamily& family,
                 const ConsequentCenters& centers = {});

// Revisit fade: sells near resistance (x2 around 0), buys near support.
ExcessDemand ed3(std::optional<double> x2, std::optional<double> x3, const TermFamily& family,
                 const ConsequentCenters& centers = {});

// Pullback toward trend lines: buys just above the uptrend line
// (0 < x4 < 2w), sells just under the downtrend line (-2w < x5 < 0).
ExcessDemand ed4(std::optional<double> x4, std::optional<double> x5, const TermFamily& family,
                 const ConsequentCenters& centers = {});

// Trend-line break: sells once price falls through the uptrend line
// (x4 < -w), buys once it clears the downtrend line (x5 > w).
ExcessDemand ed5(std::optional<double> x4, std::optional<double> x5, const TermFamily& family,
                 const ConsequentCenters& centers = {});

// Big seller: feeds shares into a rising market, harder the stronger the
// crossover signal x1 (computed with m = 1).
ExcessDemand ed6(std::optional<double> x1, const TermFamily& family,
                 const ConsequentCenters& centers = {});

// Big buyer, the mirror of ed6: absorbs shares into a falling market.
ExcessDemand ed7(std::optional<double> x1, const TermFamily& family,
                 const ConsequentCenters& centers = {});

// Manipulator: accumulates like ed7 in phase 1, buys flat out at the big-buy
// center in phase 2, distributes like ed6 in phase 3. Inactive outside the
// schedule.
ExcessDemand ed8(std::optional<double> x1, std::optional<int> phase, const TermFamily& family,
                 const ConsequentCenters& centers = {});

// Volatility-band breakout: buys above the upper band (x6 > 0), sells below
// the lower band (x7 < 0).
ExcessDemand ed9(std::optional<double> x6, std::optional<double> x7, const TermFamily& family,
                 const ConsequentCenters& centers = {});

// Fixed membership widths for the stop-loss group. The protective stop reads
// the loss against the entry anchor at 20% resolution; the trailing stop
// reads the drawdown from the recent high at 10%, gated on the position
// being in profit (Positive aggregate of the anchor ratio, same 10% family).
inline constexpr double kProtectiveStopWidth = 0.20;
inline constexpr double kTrailingStopWidth = 0.10;

// Stop-loss: dumps at the big-sell center when the anchor loss or the gated
// drawdown fires. Inactive without a position.
ExcessDemand ed10(const Portfolio& portfolio, double price, std::optional<double> rolling_max_price,
                  const ConsequentCenters& centers = {});

// OBV divergence: buys when price hugs the downtrend line while OBV troughs
// rise (x5 small positive, x8 positive slope), sells when price hugs the
// uptrend line while OBV peaks fall.
ExcessDemand ed11(std::optional<double> x4, std::optional<double> x5, std::optional<double> x8,
                  std::optional<double> x9, const TermFamily& family,
                  const ConsequentCenters& centers = {});

// Relative strength: same price antecedents as ed11 with the RS ratio x10
// confirming instead of OBV slopes.
ExcessDemand ed12(std::optional<double> x4, std::optional<double> x5, std::optional<double> x10,
                  const TermFamily& family, const ConsequentCenters& centers = {});

}  // namespace fuzzmarket
