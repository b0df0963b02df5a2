#include "misosud/network.hpp"

#include <cmath>

#include "misosud/errors.hpp"

namespace misosud {

MisoNetwork::MisoNetwork(std::vector<std::vector<CVector>> channels, std::vector<double> powers, Field field)
    : h_(std::move(channels)), P_(std::move(powers)), field_(field) {
  const std::size_t m = P_.size();
  if (m < 2) throw DimensionError("network: need at least two users");
  if (h_.size() != m) throw DimensionError("network: channel list size differs from user count");
  for (std::size_t j = 0; j < m; ++j) {
    if (h_[j].size() != m) throw DimensionError("network: transmitter needs one channel per receiver");
    const std::size_t t = h_[j][0].dim();
    if (t == 0) throw DimensionError("network: transmitter with no antennas");
    for (const auto& v : h_[j]) {
      if (v.dim() != t) throw DimensionError("network: channel dims differ within a transmitter");
      for (const auto& x : v.entries())
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
          throw DimensionError("network: non-finite channel entry");
      if (field_ == Field::real && !v.is_real())
        throw HypothesisError("network: real field with complex channel entries");
    }
    if (!(P_[j] >= 0.0) || !std::isfinite(P_[j])) throw FeasibilityError("network: powers must be finite and >= 0");
  }
}

MisoNetwork MisoNetwork::from_two_user(const TwoUserChannel& ch) {
  ch.validate();
  return MisoNetwork({{ch.h1, ch.h3}, {ch.h2, ch.h4}}, {ch.P1, ch.P2}, ch.field);
}

std::vector<CVector> MisoNetwork::interfering_channels(std::size_t j) const {
  std::vector<CVector> out;
  for (std::size_t i = 0; i < users(); ++i)
    if (i != j) out.push_back(h_[j][i]);
  return out;
}

std::vector<std::size_t> MisoNetwork::interfered_receivers(std::size_t j) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < users(); ++i)
    if (i != j) out.push_back(i);
  return out;
}

TwoUserChannel MisoNetwork::two_user(std::size_t a, std::size_t b) const {
  TwoUserChannel ch;
  ch.h1 = h_[a][a];
  ch.h3 = h_[a][b];
  ch.h2 = h_[b][a];
  ch.h4 = h_[b][b];
  ch.P1 = P_[a];
  ch.P2 = P_[b];
  ch.field = field_;
  return ch;
}

MisoNetwork MisoNetwork::with_power(std::size_t j, double P) const {
  MisoNetwork n = *this;
  n.P_.at(j) = P;
  return n;
}

std::vector<double> rates_from_powers(const std::vector<std::vector<double>>& power, RateConvention conv) {
  const std::size_t m = power.size();
  std::vector<double> r(m);
  for (std::size_t i = 0; i < m; ++i) {
    double interference = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) interference += power[j][i];
    r[i] = conv.rate(power[i][i], interference);
  }
  return r;
}

void evaluate_sample(const MisoNetwork& net, RegionSample& s, LogBase base) {
  const std::size_t m = net.users();
  if (s.beamformers.size() != m) throw DimensionError("evaluate_sample: one beamformer per user required");
  s.power.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) s.power[j][i] = std::norm(dot(net.h(j, i), s.beamformers[j]));
  s.rates = rates_from_powers(s.power, {net.field(), base});
}

}  // namespace misosud
