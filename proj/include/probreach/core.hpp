#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace probreach {

/// A point in R^n. Units are carried by the problem context.
using StateVector = Eigen::VectorXd;

/// Selects between the OpenMP kernels and their serial reference versions.
/// Both paths produce bit-identical results.
enum class Exec { serial, parallel };

/// Axis-aligned hyperrectangle [lower, upper].
class Box {
public:
    /// Throws ParameterError on dimension mismatch, lower > upper, or
    /// non-finite bounds.
    Box(StateVector lower, StateVector upper);

    const StateVector& lower() const { return lower_; }
    const StateVector& upper() const { return upper_; }
    double lower(Eigen::Index i) const { return lower_[i]; }
    double upper(Eigen::Index i) const { return upper_[i]; }
    Eigen::Index dimension() const { return lower_.size(); }
    double width(Eigen::Index i) const { return upper_[i] - lower_[i]; }
    double volume() const;

    /// Closed-interval membership.
    bool contains(const StateVector& x) const;
    /// Componentwise inclusion of `other` in this box.
    bool contains(const Box& other) const;

private:
    StateVector lower_;
    StateVector upper_;
};

/// Counter-based generator (Philox4x32-10) addressed by a master seed and a
/// stream id. Draws depend only on (master_seed, stream_id, position), so
/// work split across threads can use one stream per item without reordering.
class SeededRng {
public:
    using result_type = std::uint64_t;

    SeededRng(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const { return key_; }
    std::uint64_t stream_id() const { return stream_; }

    /// Independent stream derived from this one's id and `child`.
    SeededRng fork(std::uint64_t child) const;

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, n), unbiased. n must be positive.
    std::uint64_t below(std::uint64_t n);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next_u64(); }

    /// One raw Philox4x32-10 block; exposed for known-answer tests.
    static std::array<std::uint32_t, 4> philox_block(std::array<std::uint32_t, 4> counter,
                                                     std::array<std::uint32_t, 2> key);

private:
    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

/// SplitMix64 finalizer; used to derive stream ids and per-trial seeds.
std::uint64_t mix64(std::uint64_t x);

std::vector<StateVector> uniform_sample(const Box& box, std::size_t count, SeededRng rng);

/// Latin hypercube sample: on every axis each of the `count` equal strata
/// holds exactly one coordinate. Offsets inside a stratum are uniform.
std::vector<StateVector> lhs_sample(const Box& box, std::size_t count, SeededRng rng);

/// Smallest box containing every point. Throws ParameterError when empty or
/// when the points disagree on dimension.
Box interval_hull(std::span<const StateVector> points);

/// True when every coordinate is finite.
bool all_finite(const StateVector& x);

}  // namespace probreach
