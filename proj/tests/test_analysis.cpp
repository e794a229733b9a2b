#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "ddqpc/analysis.hpp"

using namespace ddqpc;

TEST_CASE("golden_section_maximize finds interior maxima") {
    const GoldenResult q = golden_section_maximize(
        [](double x) { return 3.0 - (x - 2.0) * (x - 2.0); }, 0.0, 5.0);
    CHECK(q.x == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(q.value == doctest::Approx(3.0).epsilon(1e-9));

    const GoldenResult s = golden_section_maximize([](double x) { return std::sin(x); }, 0.0, kPi);
    CHECK(s.x == doctest::Approx(kPi / 2.0).epsilon(1e-5));

    CHECK_THROWS_AS(golden_section_maximize([](double x) { return x; }, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(golden_section_maximize([](double x) { return x; }, 0.0, 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("scan_coupling locates the grid argmax") {
    std::vector<double> alphas{0.1};
    for (int a = 1; a <= 20; ++a) alphas.push_back(a);
    const CouplingScanResult r = scan_coupling(0.0, 0.0, 1.0, alphas);
    REQUIRE(r.entropies.size() == alphas.size());
    CHECK(r.alpha_star == 5.0);
    CHECK(alphas[r.star_index] == 5.0);
    CHECK(r.entropies[r.star_index] == doctest::Approx(0.859343095274).epsilon(1e-10));
    CHECK(r.ds_dalpha.empty());

    SUBCASE("derivatives flip sign across the optimum") {
        const CouplingScanResult d = scan_coupling(0.0, 0.0, 1.0, {2.0, 10.0}, LogBase::base2, true);
        REQUIRE(d.ds_dalpha.size() == 2);
        CHECK(d.ds_dalpha[0] == doctest::Approx(0.124700592).epsilon(1e-4));
        CHECK(d.ds_dalpha[1] == doctest::Approx(-0.0206730641).epsilon(1e-4));
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(scan_coupling(0.0, 0.0, 1.0, {}), std::invalid_argument);
        CHECK_THROWS_AS(scan_coupling(0.0, 0.0, 0.0, {1.0}), std::invalid_argument);
        CHECK_THROWS_AS(scan_coupling(0.0, 0.0, 1.0, {1.0, 1.0}), std::invalid_argument);
        CHECK_THROWS_AS(scan_coupling(0.0, 0.0, 1.0, {0.0, 1.0}), std::invalid_argument);
    }
}

TEST_CASE("optimal_coupling refines the scan with golden section") {
    const OptimalCoupling oc = optimal_coupling(0.0, 0.0, 1.0, 0.5, 20.0, 256);
    CHECK(!oc.boundary);
    CHECK(oc.alpha_star == doctest::Approx(4.9400).epsilon(1e-3));
    CHECK(oc.entropy_star == doctest::Approx(0.859369221615).epsilon(1e-8));
    CHECK(oc.grid_argmax_alpha > 4.8);
    CHECK(oc.grid_argmax_alpha < 5.05);
    // the canonical coupling sits within a fraction of a percent of the peak
    CHECK(0.859343095274 / oc.entropy_star >= 0.95);

    SUBCASE("an edge argmax is reported, not refined") {
        const OptimalCoupling edge = optimal_coupling(0.0, 0.0, 1.0, 10.0, 20.0, 64);
        CHECK(edge.boundary);
        CHECK(edge.alpha_star == 10.0);
        CHECK(edge.entropy_star == doctest::Approx(0.780146398869).epsilon(1e-9));
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(optimal_coupling(0.0, 0.0, 1.0, 0.0, 20.0), std::invalid_argument);
        CHECK_THROWS_AS(optimal_coupling(0.0, 0.0, 1.0, 5.0, 5.0), std::invalid_argument);
        CHECK_THROWS_AS(optimal_coupling(0.0, 0.0, 1.0, 0.5, 20.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(optimal_coupling(0.0, 0.0, 0.0, 0.5, 20.0), std::invalid_argument);
    }
}

TEST_CASE("ds_dalpha agrees between the chain rule and the direct difference") {
    const DsDalphaResult r = ds_dalpha(0.0, 0.0, 1.0, 2.0, 1e-4);
    CHECK(r.central_difference == doctest::Approx(0.124700592).epsilon(1e-4));
    CHECK(r.analytic == doctest::Approx(r.central_difference).epsilon(1e-6));

    const DsDalphaResult n = ds_dalpha(0.0, 0.0, 1.0, 10.0, 1e-4);
    CHECK(n.central_difference == doctest::Approx(-0.0206730641).epsilon(1e-4));
    CHECK(n.analytic == doctest::Approx(n.central_difference).epsilon(1e-6));

    SUBCASE("the maximally entangled point is singular") {
        // deep in the long-time plateau the state is maximally entangled and
        // the chain-rule factor 0/0 degenerates
        CHECK_THROWS_AS(ds_dalpha(0.0, 0.0, 20.0, 5.0, 1e-3), std::domain_error);
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(ds_dalpha(0.0, 0.0, 1.0, 0.0, 1e-4), std::invalid_argument);
        CHECK_THROWS_AS(ds_dalpha(0.0, 0.0, 1.0, 2.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(ds_dalpha(0.0, 0.0, 1.0, 2.0, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(ds_dalpha(0.0, 0.0, -1.0, 2.0, 1e-4), std::invalid_argument);
    }
}

TEST_CASE("detect_cycling pins the coherence zeros below threshold") {
    SUBCASE("near-free dot recurs at the bare period") {
        const CyclingReport rep = detect_cycling(0.01);
        CHECK(rep.branch == Branch::oscillatory);
        REQUIRE(rep.zero_times.size() == 6);
        const double period = 4.0 * kPi / std::sqrt(64.0 - 0.01 * 0.01);
        for (std::size_t k = 0; k < rep.zero_times.size(); ++k) {
            const double want = static_cast<double>(k + 1) * period;
            CHECK(std::abs(rep.zero_times[k] - want) / want <= 1e-3);
        }
        REQUIRE(rep.period_estimate.has_value());
        CHECK(*rep.period_estimate == doctest::Approx(1.57079755398).epsilon(1e-6));
    }
    SUBCASE("moderate couplings stretch the period") {
        const CyclingReport r1 = detect_cycling(1.0);
        REQUIRE(r1.period_estimate.has_value());
        CHECK(r1.zero_times.size() == 6);
        CHECK(*r1.period_estimate == doctest::Approx(1.5832138823).epsilon(1e-6));

        const CyclingReport r4 = detect_cycling(4.0);
        CHECK(r4.zero_times.size() == 5);
        REQUIRE(r4.period_estimate.has_value());
        CHECK(*r4.period_estimate == doctest::Approx(1.81379936423).epsilon(1e-6));

        const CyclingReport r7 = detect_cycling(7.0, 0.0, 0.0, 18.0, 20001);
        CHECK(r7.zero_times.size() == 5);
        REQUIRE(r7.period_estimate.has_value());
        CHECK(*r7.period_estimate == doctest::Approx(3.24462294078).epsilon(1e-6));

        CHECK(*r7.period_estimate > *r4.period_estimate);
        CHECK(*r4.period_estimate > *r1.period_estimate);
    }
    SUBCASE("at and above threshold the coherence never recurs") {
        for (double a : {8.0, 9.0, 100.0}) {
            const CyclingReport rep = detect_cycling(a);
            CHECK(rep.zero_times.empty());
            CHECK(!rep.period_estimate.has_value());
        }
        CHECK(detect_cycling(8.0).branch == Branch::critical);
        CHECK(detect_cycling(9.0).branch == Branch::overdamped);
    }
    SUBCASE("a real-part component blocks exact zeros") {
        const CyclingReport rep = detect_cycling(1.0, 90.0, 0.0);
        CHECK(rep.branch == Branch::oscillatory);
        CHECK(rep.zero_times.empty());
    }
    SUBCASE("a purely imaginary start still cycles, shifted") {
        const CyclingReport rep = detect_cycling(1.0, 90.0, 90.0);
        REQUIRE(rep.zero_times.size() == 6);
        // zeros solve tan(omega tau / 4) = omega / alpha
        const double omega = std::sqrt(63.0);
        const double first = 4.0 * std::atan(omega / 1.0) / omega;
        CHECK(rep.zero_times.front() == doctest::Approx(first).epsilon(1e-6));
        REQUIRE(rep.period_estimate.has_value());
        CHECK(*rep.period_estimate == doctest::Approx(1.5832138823).epsilon(1e-5));
        for (double t0 : rep.zero_times)
            CHECK(coherence_measure(closed_form_state({1.0, 0.0, 90.0, 90.0}, t0)) <= 2e-6);
    }
    SUBCASE("sampling coarser than 50 points per period is rejected") {
        CHECK_THROWS_AS(detect_cycling(0.01, 0.0, 0.0, 10.0, 101), std::invalid_argument);
        CHECK_THROWS_AS(detect_cycling(0.01, 0.0, 0.0, 10.0, 2), std::invalid_argument);
        CHECK_THROWS_AS(detect_cycling(-1.0), std::invalid_argument);
        CHECK_THROWS_AS(detect_cycling(1.0, 0.0, 0.0, 0.0), std::invalid_argument);
    }
}

TEST_CASE("small_tau_rate_check recovers the early-time law") {
    SUBCASE("balanced superposition: the ratio is exactly one quarter") {
        const RateWindowReport rep = small_tau_rate_check(90.0, 0.0, 100.0, 0.001, 0.01);
        REQUIRE(rep.ratios.size() == 50);
        CHECK(rep.ratio_mean == doctest::Approx(0.25).epsilon(1e-9));
        CHECK(rep.max_rel_deviation <= 1e-9);
        CHECK(rep.passes);
    }
    SUBCASE("partial superposition drifts but stays within the window") {
        const RateWindowReport rep = small_tau_rate_check(30.0, 0.0, 100.0, 0.001, 0.01);
        CHECK(rep.ratio_mean == doctest::Approx(0.0504217994).epsilon(1e-6));
        CHECK(rep.max_rel_deviation == doctest::Approx(0.193386).epsilon(1e-3));
        CHECK(rep.passes);
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(small_tau_rate_check(0.0, 0.0, 1.0, 0.001, 0.01), std::invalid_argument);
        CHECK_THROWS_AS(small_tau_rate_check(180.0, 0.0, 1.0, 0.001, 0.01), std::invalid_argument);
        CHECK_THROWS_AS(small_tau_rate_check(90.0, 0.0, 1.0, 0.001, 0.15), std::invalid_argument);
        CHECK_THROWS_AS(small_tau_rate_check(90.0, 0.0, 1.0, 0.0, 0.01), std::invalid_argument);
        CHECK_THROWS_AS(small_tau_rate_check(90.0, 0.0, 1.0, 0.01, 0.001), std::invalid_argument);
        CHECK_THROWS_AS(small_tau_rate_check(90.0, 0.0, 0.0, 0.001, 0.01), std::invalid_argument);
        CHECK_THROWS_AS(small_tau_rate_check(90.0, 0.0, 1.0, 0.001, 0.01, 1), std::invalid_argument);
    }
}

TEST_CASE("crossover_check sees both coupling regimes for a partial superposition") {
    const CrossoverReport rep = crossover_check(30.0);
    CHECK(rep.passes);
    CHECK(rep.small_tau_increasing);
    CHECK(rep.large_tau_decreasing);
    REQUIRE(rep.entropy_small.size() == 3);
    CHECK(rep.entropy_small[0] == doctest::Approx(0.0528111134325).epsilon(1e-9));
    CHECK(rep.entropy_small[1] == doctest::Approx(0.247878412116).epsilon(1e-9));
    CHECK(rep.entropy_small[2] == doctest::Approx(0.354658942518).epsilon(1e-9));
    CHECK(rep.entropy_large[0] == doctest::Approx(0.999945417447).epsilon(1e-9));
    CHECK(rep.entropy_large[1] == doctest::Approx(0.740007894282).epsilon(1e-9));
    CHECK(rep.entropy_large[2] == doctest::Approx(0.415968132016).epsilon(1e-9));

    SUBCASE("below the frozen regime the last pair decides") {
        const CrossoverReport rep2 = crossover_check(30.0, {10.0, 50.0});
        CHECK(rep2.large_tau_decreasing); // S(50; 5) < S(10; 5)
        CHECK(rep2.entropy_large[1] == doctest::Approx(0.886779222633).epsilon(1e-9));
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(crossover_check(0.0), std::invalid_argument);
        CHECK_THROWS_AS(crossover_check(90.0), std::invalid_argument);
        CHECK_THROWS_AS(crossover_check(30.0, {10.0}), std::invalid_argument);
        CHECK_THROWS_AS(crossover_check(30.0, {10.0, 5.0}), std::invalid_argument);
        CHECK_THROWS_AS(crossover_check(30.0, {10.0, 100.0}, 5.0, 0.01), std::invalid_argument);
    }
}

TEST_CASE("entropy monotonicity") {
    SUBCASE("entropy_decrease_indices flags drops beyond the tolerance") {
        const std::vector<double> s{0.1, 0.2, 0.15, 0.3, 0.3 - 2e-9};
        CHECK(entropy_decrease_indices(s) == std::vector<std::size_t>{2, 4});
        CHECK(entropy_decrease_indices(s, 1e-8) == std::vector<std::size_t>{2});
        CHECK(entropy_decrease_indices({}).empty());
    }
    SUBCASE("random symmetric-dot trajectories never lose entropy") {
        const auto violations = monotonicity_scan(40, 20260819u);
        CHECK(violations.empty());
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(monotonicity_scan(1, 1u, 1), std::invalid_argument);
        CHECK_THROWS_AS(monotonicity_scan(1, 1u, 100, 0.0), std::invalid_argument);
    }
}
