#include "misosud/rate.hpp"

#include <cmath>
#include <numbers>

namespace misosud {

std::string_view to_string(Field f) { return f == Field::real ? "real" : "complex"; }

double RateConvention::log(double x) const {
  return base == LogBase::two ? std::log2(x) : std::log(x);
}

double RateConvention::rate(double signal, double interference) const {
  const double sinr = signal / (1.0 + interference);
  // log1p keeps tiny SINRs accurate.
  const double nats = std::log1p(sinr);
  return prefactor() * (base == LogBase::two ? nats / std::numbers::ln2 : nats);
}

}  // namespace misosud
