#pragma once

#include <cstddef>
#include <vector>

namespace fuzzmarket {

// Price path p_0..p_{T-1}. Every element is finite and strictly positive;
// violations throw std::invalid_argument at insertion.
class PriceSeries {
 public:
  PriceSeries() = default;
  explicit PriceSeries(std::vector<double> prices);

  void push_back(double price);

  double at(std::size_t t) const;
  double operator[](std::size_t t) const { return prices_[t]; }

  std::size_t size() const noexcept { return prices_.size(); }
  bool empty() const noexcept { return prices_.empty(); }

  // ln(p_t / p_{t-1}); requires 1 <= t < size().
  double log_return(std::size_t t) const;

  const std::vector<double>& values() const noexcept { return prices_; }

 private:
  std::vector<double> prices_;
};

// Exogenous traded volume per step, finite and non-negative.
class VolumeSeries {
 public:
  VolumeSeries() = default;
  explicit VolumeSeries(std::vector<double> volumes);

  double at(std::size_t t) const;
  std::size_t size() const noexcept { return volumes_.size(); }
  bool empty() const noexcept { return volumes_.empty(); }
  const std::vector<double>& values() const noexcept { return volumes_; }

 private:
  std::vector<double> volumes_;
};

// Exogenous benchmark index level per step, finite and strictly positive.
class IndexSeries {
 public:
  IndexSeries() = default;
  explicit IndexSeries(std::vector<double> levels);

  double at(std::size_t t) const;
  std::size_t size() const noexcept { return levels_.size(); }
  bool empty() const noexcept { return levels_.empty(); }
  const std::vector<double>& values() const noexcept { return levels_; }

 private:
  std::vector<double> levels_;
};

}  // namespace fuzzmarket
