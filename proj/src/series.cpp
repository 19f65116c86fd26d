#include "fuzzmarket/series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fuzzmarket {

namespace {

void check_price(double price) {
  if (!std::isfinite(price) || price <= 0.0) {
    throw std::invalid_argument("price must be finite and positive, got " + std::to_string(price));
  }
}

template <typename Vec>
double checked_at(const Vec& values, std::size_t t, const char* what) {
  if (t >= values.size()) {
    throw std::out_of_range(std::string(what) + " index " + std::to_string(t) + " out of range (size " +
                            std::to_string(values.size()) + ")");
  }
  return values[t];
}

}  // namespace

PriceSeries::PriceSeries(std::vector<double> prices) : prices_(std::move(prices)) {
  for (double p : prices_) check_price(p);
}

void PriceSeries::push_back(double price) {
  check_price(price);
  prices_.push_back(price);
}

double PriceSeries::at(std::size_t t) const { return checked_at(prices_, t, "price"); }

double PriceSeries::log_return(std::size_t t) const {
  if (t == 0 || t >= prices_.size()) {
    throw std::out_of_range("log_return needs 1 <= t < size()");
  }
  return std::log(prices_[t]) - std::log(prices_[t - 1]);
}

VolumeSeries::VolumeSeries(std::vector<double> volumes) : volumes_(std::move(volumes)) {
  for (double v : volumes_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("volume must be finite and non-negative, got " + std::to_string(v));
    }
  }
}

double VolumeSeries::at(std::size_t t) const { return checked_at(volumes_, t, "volume"); }

IndexSeries::IndexSeries(std::vector<double> levels) : levels_(std::move(levels)) {
  for (double v : levels_) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("index level must be finite and positive, got " + std::to_string(v));
    }
  }
}

double IndexSeries::at(std::size_t t) const { return checked_at(levels_, t, "index"); }

}  // namespace fuzzmarket
