#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "chancomp/baselines.hpp"
#include "chancomp/design.hpp"

using namespace chancomp;

TEST_SUITE("baselines") {

TEST_CASE("aircomp noiseless identities") {
    Rng rng(1);
    const NomographicMap sum = make_nomographic("sum", 0, 7);
    const std::vector<double> v{1, 2, 3};
    CHECK(aircomp_estimate(v, sum, 0.0, 1.0, rng).value == doctest::Approx(6));

    const NomographicMap prod = make_nomographic("product", 0, 7);
    const std::vector<double> v2{2, 3};
    CHECK(aircomp_estimate(v2, prod, 0.0, 0.5, rng).value == doctest::Approx(6).epsilon(1e-9));

    // Zero input goes through the delta clamp: exp(ln d + ln 5) = 5d.
    const std::vector<double> v3{0, 5};
    CHECK(aircomp_estimate(v3, prod, 0.0, 1.0, rng).value == doctest::Approx(5e-3).epsilon(1e-9));

    const NomographicMap quad = make_nomographic("quadratic", 0, 7);
    const std::vector<double> v4{1, 2, 2};
    CHECK(aircomp_estimate(v4, quad, 0.0, 2.0, rng).value == doctest::Approx(9));
}

TEST_CASE("aircomp max approximation stays within the log-sum-exp bound") {
    AircompParams params;
    const double lo = 0, hi = 7;
    const NomographicMap maxMap = make_nomographic("max", lo, hi, params);
    const double t = params.tempScale / (hi - lo);
    Rng rng(2);
    const std::vector<std::vector<double>> inputs{{0, 1, 2}, {5, 5, 5}, {7, 0, 3}, {2.5, 2.5, 6.9}};
    for (const auto& v : inputs) {
        const double truth = *std::max_element(v.begin(), v.end());
        const double est = aircomp_estimate(v, maxMap, 0.0, 1.0, rng).value;
        CHECK(est >= truth - 1e-9);
        CHECK(est <= truth + std::log(static_cast<double>(v.size())) / t + 1e-9);
    }
}

TEST_CASE("aircomp clamp is recorded") {
    const NomographicMap maxMap = make_nomographic("max", 0, 7);
    Rng rng(3);
    // Large negative noise drives the psi argument non-positive.
    bool sawClamp = false;
    for (int i = 0; i < 2000; ++i) {
        const AircompResult res = aircomp_estimate(std::vector<double>{0.0, 0.0}, maxMap, 50.0,
                                                   0.01, rng);
        if (res.clamped) {
            sawClamp = true;
            CHECK(res.value == 0.0);  // pinned to lo
        }
    }
    CHECK(sawClamp);
}

TEST_CASE("ofdma noiseless decode is exact; outputs stay in the range set") {
    const FunctionSpec spec = make_preset("sum", 3, 4);
    DesignOptions options;
    options.seed = 5;
    const DesignResult design = design_modulation(spec, options);
    REQUIRE(design.lifted.status == SolveStatus::Feasible);
    const Encoder enc(design.design.x);

    for (std::uint64_t m = 0; m < input_space_size(3, 4); ++m) {
        const auto tuple = index_to_tuple(m, 3, 4);
        Rng rng(m);
        CHECK(ofdma_estimate(tuple, enc, spec, 0.0, rng) == doctest::Approx(spec.evaluator(tuple)));
    }

    const RangeSet range = range_set(spec);
    const std::set<double> admissible(range.values.begin(), range.values.end());
    Rng rng(17);
    for (int rep = 0; rep < 500; ++rep) {
        std::vector<int> tuple(3);
        for (int& l : tuple) l = rng.uniform_int(0, 3);
        const double est = ofdma_estimate(tuple, enc, spec, 2.0, rng);
        CHECK(admissible.count(est) == 1);
    }
}

TEST_CASE("nomographic map rejects unknown kinds and bad intervals") {
    CHECK_THROWS_AS(make_nomographic("median", 0, 7), std::invalid_argument);
    CHECK_THROWS_AS(make_nomographic("sum", 3, 3), std::invalid_argument);
}

}  // TEST_SUITE
