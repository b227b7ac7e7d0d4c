#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "probreach/error.hpp"
#include "probreach/mcs.hpp"
#include "support.hpp"

using namespace probreach;
using namespace probreach::mcs;

namespace {

ReachSpec make_spec(double eps, double delta, double t1, Box box) {
    return ReachSpec{eps, delta, 0.0, t1, std::move(box)};
}

Box square(double lo, double hi) {
    return Box(StateVector::Constant(2, lo), StateVector::Constant(2, hi));
}

}  // namespace

TEST_CASE("sample bound values") {
    CHECK(sample_bound(18, 0.05, 0.001) == 7554);
    CHECK(sample_bound(1, 0.5, 0.5) == 6);
    CHECK(sample_bound(2, 0.1, 0.05) == 176);
    CHECK_THROWS_AS(sample_bound(0, 0.1, 0.1), ParameterError);
    CHECK_THROWS_AS(sample_bound(2, 1.5, 0.1), ParameterError);
    CHECK_THROWS_AS(sample_bound(2, 0.1, 0.0), ParameterError);
    CHECK_THROWS_AS(sample_bound(2, 0.0, 0.1), ParameterError);
}

TEST_CASE("sample bound monotonicity") {
    const double eps[] = {0.01, 0.05, 0.1, 0.3, 0.7, 0.99};
    const double dels[] = {1e-6, 1e-3, 0.05, 0.2, 0.9};
    for (std::size_t n = 1; n <= 20; ++n) {
        for (double e : eps) {
            for (double d : dels) {
                const auto m = sample_bound(n, e, d);
                REQUIRE(m >= 1);
                REQUIRE(sample_bound(n + 1, e, d) >= m);
                REQUIRE(sample_bound(n, std::min(e * 1.5, 0.999), d) <= m);
                REQUIRE(sample_bound(n, e, std::min(d * 1.5, 0.999)) <= m);
            }
        }
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(make_spec(1.0, 0.1, 1.0, square(0, 1)).validate(), ParameterError);
    CHECK_THROWS_AS(make_spec(0.1, 1.0, 1.0, square(0, 1)).validate(), ParameterError);
    CHECK_THROWS_AS(make_spec(0.1, 0.1, -1.0, square(0, 1)).validate(), ParameterError);
    CHECK_THROWS_AS(mcs_reach(make_linear_decay_system(1), make_spec(0.1, 0.1, 1.0, square(0, 1)), SeededRng(1, 0)),
                    ParameterError);
}

TEST_CASE("zero dynamics hull is the hull of the draws") {
    const auto spec = make_spec(0.2, 0.1, 1.0, square(-1, 2));
    const auto r = mcs_reach(make_zero_system(2), spec, SeededRng(5, 0));
    CHECK(r.certified);
    CHECK(r.sample_count == sample_bound(2, 0.2, 0.1));
    const Box h = interval_hull(r.initial_states);
    CHECK(r.hull.lower() == h.lower());
    CHECK(r.hull.upper() == h.upper());
    CHECK(spec.initial_box.contains(r.hull));
}

TEST_CASE("linear decay pushes the box forward") {
    const auto spec = make_spec(0.05, 0.01, 1.0, Box(StateVector{{1.0}}, StateVector{{2.0}}));
    const auto r = mcs_reach(make_linear_decay_system(1), spec, SeededRng(6, 0));
    REQUIRE(r.sample_count >= 100);
    const double e1 = std::exp(-1.0);
    CHECK(r.hull.lower(0) >= e1 - 1e-12);
    CHECK(r.hull.upper(0) <= 2 * e1 + 1e-12);
    CHECK(std::abs(r.hull.width(0) - e1) <= 0.05 * e1);
}

TEST_CASE("rotation by a quarter turn") {
    const auto spec = make_spec(0.1, 0.05, std::numbers::pi / 2, square(1.0, 1.1));
    const auto r = mcs_reach(make_rotation_system(), spec, SeededRng(7, 0));
    CHECK(r.sample_count == 176);
    // Exact image of the box is [-1.1, -1] x [1, 1.1].
    CHECK(r.hull.lower(0) >= -1.1 - 1e-9);
    CHECK(r.hull.upper(0) <= -1.0 + 1e-9);
    CHECK(r.hull.lower(1) >= 1.0 - 1e-9);
    CHECK(r.hull.upper(1) <= 1.1 + 1e-9);
    CHECK(r.hull.width(0) > 0.09);
    CHECK(r.hull.width(1) > 0.09);
}

TEST_CASE("hull properties of a certified run") {
    testing::for_all(6, 40, [](testing::Gen& g, std::size_t i) {
        const auto spec = make_spec(g.real(0.1, 0.5), g.real(0.01, 0.2), g.real(0.1, 2.0), square(-1, 1));
        const auto r = mcs_reach(make_rotation_system(), spec, SeededRng(i, 0), 1e-2);
        for (const auto& x : r.final_states) REQUIRE(r.hull.contains(x));
        for (Eigen::Index d = 0; d < 2; ++d) {
            REQUIRE(std::any_of(r.final_states.begin(), r.final_states.end(),
                                [&](const StateVector& x) { return x[d] == r.hull.lower(d); }));
            REQUIRE(std::any_of(r.final_states.begin(), r.final_states.end(),
                                [&](const StateVector& x) { return x[d] == r.hull.upper(d); }));
        }
    });
}

TEST_CASE("nested prefixes give nested hulls") {
    const auto spec = make_spec(0.1, 0.05, 1.0, square(0.5, 1.5));
    const auto sys = make_param_linear_system();
    Box prev = mcs_reach_with_count(sys, spec, 1, SeededRng(8, 0)).hull;
    std::vector<StateVector> prev_states;
    for (std::size_t m : {2, 5, 20, 100, 400}) {
        const auto r = mcs_reach_with_count(sys, spec, m, SeededRng(8, 0));
        REQUIRE(r.hull.contains(prev));
        if (!prev_states.empty()) {
            for (std::size_t i = 0; i < prev_states.size(); ++i) REQUIRE(r.initial_states[i] == prev_states[i]);
        }
        prev = r.hull;
        prev_states = r.initial_states;
        CHECK(r.certified == (m >= sample_bound(2, 0.1, 0.05)));
    }
}

TEST_CASE("serial and parallel runs are identical") {
    const auto spec = make_spec(0.1, 0.05, 1.0, square(1.0, 1.1));
    const auto a = mcs_reach(make_rotation_system(), spec, SeededRng(9, 0), 1e-3, Exec::serial);
    const auto b = mcs_reach(make_rotation_system(), spec, SeededRng(9, 0), 1e-3, Exec::parallel);
    CHECK(a.hull.lower() == b.hull.lower());
    CHECK(a.hull.upper() == b.hull.upper());
    for (std::size_t i = 0; i < a.final_states.size(); ++i) REQUIRE(a.final_states[i] == b.final_states[i]);
}

TEST_CASE("coverage extremes") {
    const auto spec = make_spec(0.1, 0.05, 1.0, square(1.0, 1.1));
    const Box everything(StateVector::Constant(2, -1e9), StateVector::Constant(2, 1e9));
    CHECK(validate_coverage(everything, make_rotation_system(), spec, 500, SeededRng(1, 1), 1e-2) == 1.0);
    const Box point(StateVector::Constant(2, 0.5), StateVector::Constant(2, 0.5));
    CHECK(validate_coverage(point, make_rotation_system(), spec, 500, SeededRng(1, 1), 1e-2) == 0.0);
    CHECK_THROWS_AS(validate_coverage(point, make_rotation_system(), spec, 0, SeededRng(1, 1)), ParameterError);
}

TEST_CASE("certified linear hulls usually reach the target coverage") {
    const auto spec = make_spec(0.1, 0.05, 1.0, Box(StateVector{{1.0}}, StateVector{{2.0}}));
    const auto sys = make_linear_decay_system(1);
    int good = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = mcs_reach(sys, spec, SeededRng(seed, 0), 1e-2);
        good += validate_coverage(r.hull, sys, spec, 100000, SeededRng(seed, 99), 1e-2) >= 0.9 ? 1 : 0;
    }
    CHECK(good >= 8);
}

TEST_CASE("trial suite") {
    const auto spec = make_spec(0.99, 0.5, 1.0, square(1.0, 1.1));
    const auto sys = make_rotation_system();
    const auto suite = coverage_trial_suite(sys, spec, 20, 200, SeededRng(3, 0), 1e-2);
    CHECK(suite.success_fraction == 1.0);
    REQUIRE(suite.per_trial.size() == 20);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(suite.per_trial[i].trial == i);
        CHECK(suite.per_trial[i].stream == SeededRng(3, 0).fork(i).stream_id());
    }

    // A single trial replays in isolation from its stream.
    const auto strict = make_spec(0.1, 0.05, 1.0, square(1.0, 1.1));
    const auto full = coverage_trial_suite(sys, strict, 5, 1000, SeededRng(4, 0), 1e-2);
    const auto r = mcs_reach(sys, strict, SeededRng(4, 0).fork(3), 1e-2);
    const double cov = validate_coverage(r.hull, sys, strict, 1000, SeededRng(4, 0).fork(3), 1e-2);
    CHECK(full.per_trial[3].coverage == cov);
    CHECK(full.per_trial[3].success == (cov >= 0.9));
    CHECK(full.per_trial[3].sample_count == 176);
    CHECK_THROWS_AS(coverage_trial_suite(sys, strict, 0, 10, SeededRng(4, 0)), ParameterError);
}
