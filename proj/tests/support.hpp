#pragma once

// Hand-rolled property-test helpers: a seeded generator and a loop that
// reports the failing case index.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
    }
    bool coin() { return index(0, 1) == 1; }
    Eigen::VectorXd vec(Eigen::Index n, double lo, double hi) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = real(lo, hi);
        return v;
    }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

// Runs `body(gen, case_index)` for `cases` independently seeded cases.
template <class F>
void for_all(std::size_t cases, std::uint64_t seed, F&& body) {
    for (std::size_t i = 0; i < cases; ++i) {
        Gen gen(seed * 1000003u + i);
        body(gen, i);
    }
}

}  // namespace testing
