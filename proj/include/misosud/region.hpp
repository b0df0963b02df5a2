#pragma once

// Rate regions of m-user networks: each user's beam is the lift of a
// spherical rank-1 block in its reduced frame; sweeping the angles covers
// the region.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "misosud/mreduce.hpp"
#include "misosud/network.hpp"
#include "misosud/pareto.hpp"
#include "misosud/sample.hpp"

namespace misosud {

struct Sampler {
  enum class Kind { grid, random };
  Kind kind = Kind::grid;
  int grid = 24;                   // points per angle axis
  std::uint64_t seed = 0;          // random only
  std::uint64_t count = 1000000;   // random only

  static Sampler make_grid(int g) { return {Kind::grid, g, 0, 0}; }
  static Sampler make_random(std::uint64_t seed, std::uint64_t count) { return {Kind::random, 0, seed, count}; }
};

using SampleSink = std::function<void(const RegionSample&)>;

// Per-user view of a network: the reduced frame of the user's own channel
// against its interfered receivers, in the given order.
struct UserFrame {
  std::size_t user = 0;
  std::vector<std::size_t> receivers;  // order of the interferers in the frame
  ReducedFrame frame;
  double P = 0.0;

  std::size_t angles() const { return frame.mbar; }
};

// All angle combinations for one user: psi_k on a closed grid of `points`
// over [0, pi]; on complex channels omega_k (k >= 2) on an open grid over
// [0, 2 pi). Lexicographic in (psi..., omega...). The first `pinned` angles
// (and their phases) stay 0.
std::vector<SphericalParams> angle_grid(std::size_t angles, int points, bool complex_field, std::size_t pinned = 0);

// Best beam of one transmitter under upper caps |h_j^dagger g|^2 <= bound_j
// within the spherical family: grid search, then Nelder-Mead from the best
// grid points. Infeasible angles are repaired by shrinking the reduced block
// until every cap holds; the freed power moves to the interference-free part.
struct CappedBeam {
  SphericalParams params;
  CVector gamma;
  double signal = 0.0;
};
CappedBeam best_capped_beam(const CVector& h_own, std::span<const CVector> caps, std::span<const double> bounds,
                            double P, Field field, int grid = 16);

// receivers in increasing order.
UserFrame make_user_frame(const MisoNetwork& net, std::size_t user);
UserFrame make_user_frame(const MisoNetwork& net, std::size_t user, std::vector<std::size_t> receivers);

// The beam a user sends for given angles.
CVector user_beamformer(const UserFrame& uf, const SphericalParams& p);

// Rebuild a full sample from per-user angles.
RegionSample build_sample(const MisoNetwork& net, const std::vector<UserFrame>& frames,
                          const std::vector<SphericalParams>& params, LogBase base);

// Every sample, in a fixed order (grid: lexicographic in the angles, user 1
// outermost; random: shard by shard). Users with zero power contribute one
// all-zero parameter set, so an all-silent network yields one sample.
void m_user_region(const MisoNetwork& net, const Sampler& sampler, LogBase base, const SampleSink& sink);
void three_user_region(const MisoNetwork& net, const Sampler& sampler, LogBase base, const SampleSink& sink);

// Pareto front of the same sweep, computed shard-parallel with chunked
// pruning. Sorted lexicographically by the angle tuple; the result does not
// depend on the thread count. threads = 0 picks the hardware concurrency.
std::vector<RegionSample> m_user_pareto(const MisoNetwork& net, const Sampler& sampler, LogBase base,
                                        unsigned threads = 0);

// Each user beams along the part of its direct channel orthogonal to its
// cross channels; all angles reported as 0. Throws DegenerateZfError when
// that part vanishes for a user with positive power.
RegionSample zf_point(const MisoNetwork& net, LogBase base = LogBase::two);

// User `user` transmits at full power along its own channel; every other user
// zero-forces that receiver (first frame angle 0) and sweeps its remaining
// angle over `grid` points in [0, pi] (plus phases on complex channels).
// Other users' frames list `user` first, then the rest in increasing order.
void single_user_max_surface(const MisoNetwork& net, std::size_t user, int grid, LogBase base,
                             const SampleSink& sink);

// Flat (dim = users) rate points of a set of samples.
std::vector<RatePoint> rate_points(const std::vector<RegionSample>& samples);
std::vector<RegionSample> pareto_samples(const std::vector<RegionSample>& samples);

}  // namespace misosud
