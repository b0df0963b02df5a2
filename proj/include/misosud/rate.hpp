#pragma once

#include <string_view>

namespace misosud {

enum class Field { real, complex };
enum class LogBase { two, e };

std::string_view to_string(Field f);

// How a SINR becomes a rate: prefactor * log_base(1 + sinr).
// Real channels carry the 1/2 prefactor, complex channels carry 1.
struct RateConvention {
  Field field = Field::complex;
  LogBase base = LogBase::two;

  double prefactor() const { return field == Field::real ? 0.5 : 1.0; }
  double log(double x) const;  // log in the chosen base
  double rate(double signal, double interference) const;
};

}  // namespace misosud
