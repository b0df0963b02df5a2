#pragma once

#include <span>
#include <vector>

#include "misosud/numlin.hpp"
#include "misosud/rate.hpp"
#include "misosud/sample.hpp"
#include "misosud/twouser.hpp"

namespace misosud {

// m transmitter/receiver pairs; transmitter j has t_j antennas and reaches
// receiver i through h(j, i). Noise is unit variance everywhere.
class MisoNetwork {
 public:
  MisoNetwork() = default;
  // channels[j][i] = h_ji; validated on construction.
  MisoNetwork(std::vector<std::vector<CVector>> channels, std::vector<double> powers, Field field);

  static MisoNetwork from_two_user(const TwoUserChannel& ch);

  std::size_t users() const { return P_.size(); }
  std::size_t antennas(std::size_t j) const { return h_[j][0].dim(); }
  const CVector& h(std::size_t j, std::size_t i) const { return h_[j][i]; }
  double power(std::size_t j) const { return P_[j]; }
  std::span<const double> powers() const { return P_; }
  Field field() const { return field_; }

  // Channels of transmitter j toward every other receiver, in increasing
  // receiver order.
  std::vector<CVector> interfering_channels(std::size_t j) const;
  std::vector<std::size_t> interfered_receivers(std::size_t j) const;

  // Users a and b as a two-user channel (a plays user 1).
  TwoUserChannel two_user(std::size_t a, std::size_t b) const;

  MisoNetwork with_power(std::size_t j, double P) const;

 private:
  std::vector<std::vector<CVector>> h_;
  std::vector<double> P_;
  Field field_ = Field::complex;
};

// Fills power/rates of a sample from its beamformers.
void evaluate_sample(const MisoNetwork& net, RegionSample& s, LogBase base);

// Rates from precomputed powers: power[i][j] as in RegionSample.
std::vector<double> rates_from_powers(const std::vector<std::vector<double>>& power, RateConvention conv);

}  // namespace misosud
