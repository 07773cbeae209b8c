#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "ringcav/errors.hpp"
#include "ringcav/sweep.hpp"

using namespace ringcav;

TEST_CASE("axis names round-trip") {
    for (SweepAxis a : {SweepAxis::Detuning, SweepAxis::SqueezeR, SweepAxis::LaserPower, SweepAxis::BathTemp})
        CHECK(parse_axis(to_string(a)) == a);
    CHECK_FALSE(parse_axis("mass").has_value());
}

TEST_CASE("grid and validation") {
    SweepSpec s;
    s.start = 0.0;
    s.stop = 1.0;
    s.points = 2;
    const auto g = sweep_grid(s);
    REQUIRE(g.size() == 2);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 1.0);

    s.points = 1;
    CHECK_THROWS_AS(validate(s), InvalidParameter);
    s.points = 5;
    s.start = 1.0;
    CHECK_THROWS_AS(validate(s), InvalidParameter);

    SweepSpec t;
    t.axis = SweepAxis::BathTemp;
    t.start = -1e-6;
    t.stop = 1e-6;
    CHECK_THROWS_AS(validate(t), InvalidParameter);
}

TEST_CASE("two-point detuning sweep") {
    SweepSpec s;
    s.start = 0.9;
    s.stop = 1.0;
    s.points = 2;
    const auto rows = run_sweep(s, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].axis_value == 0.9);
    CHECK(rows[1].axis_value == 1.0);
    for (const auto& r : rows) {
        CHECK(r.stable);
        REQUIRE(r.product.has_value());
        CHECK(*r.product == *r.var_q_plus * *r.var_p_minus);
        CHECK(*r.sum == *r.var_q_plus + *r.var_p_minus);
    }
}

TEST_CASE("sweep results do not depend on the worker count") {
    SweepSpec s;
    s.points = 17;
    const auto one = run_sweep(s, 1);
    const auto four = run_sweep(s, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].axis_value == four[i].axis_value);
        CHECK(one[i].stable == four[i].stable);
        CHECK(one[i].var_p_minus == four[i].var_p_minus);
        CHECK(one[i].product == four[i].product);
    }
}

TEST_CASE("unstable rows carry no values") {
    SweepSpec s;
    s.axis = SweepAxis::LaserPower;
    s.start = 0.01;
    s.stop = 0.2;
    s.points = 5;
    const auto rows = run_sweep(s, 1);
    bool saw_unstable = false;
    for (const auto& r : rows) {
        if (r.stable) {
            CHECK(r.product.has_value());
            continue;
        }
        saw_unstable = true;
        CHECK_FALSE(r.var_q_plus.has_value());
        CHECK_FALSE(r.var_p_minus.has_value());
        CHECK_FALSE(r.product.has_value());
        CHECK_FALSE(r.sum.has_value());
        CHECK_FALSE(r.branch_note.empty());
    }
    CHECK(saw_unstable);
    CHECK(rows.front().stable);
}

TEST_CASE("product grows with bath temperature") {
    SweepSpec s;
    s.axis = SweepAxis::BathTemp;
    s.start = 0.0;
    s.stop = 200e-6;
    s.points = 21;
    const auto rows = run_sweep(s);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(*rows[i].product > *rows[i - 1].product);
}

TEST_CASE("scan minimizer") {
    SUBCASE("parabola") {
        const auto m = minimize_scan_golden([](double x) { return std::optional<double>((x - 0.3) * (x - 0.3) + 2.0); },
                                            -1.0, 1.0, 64, 1e-8, 1);
        CHECK(m.x == doctest::Approx(0.3).epsilon(1e-6));
        CHECK(m.value == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("constant function returns a sampled point") {
        std::atomic<int> calls{0};
        const auto m = minimize_scan_golden(
            [&](double) {
                ++calls;
                return std::optional<double>(4.0);
            },
            0.0, 1.0, 16, 1e-4, 1);
        CHECK(m.value == 4.0);
        CHECK(m.x >= 0.0);
        CHECK(m.x <= 1.0);
        CHECK(calls.load() >= 16);
    }
    SUBCASE("holes are skipped") {
        const auto m = minimize_scan_golden(
            [](double x) { return x < 0.5 ? std::nullopt : std::optional<double>(x); }, 0.0, 1.0, 33, 1e-6, 1);
        CHECK(m.x >= 0.5);
        CHECK(m.value == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("nothing defined") {
        CHECK_THROWS_AS(minimize_scan_golden([](double) { return std::optional<double>(); }, 0.0, 1.0, 8, 1e-4, 1),
                        NoStablePoint);
    }
}

TEST_CASE("detuning minimum is insensitive to the scan density") {
    const PhysicalParams p = baseline_params();
    const DerivedParams d = derive_params(p);
    const auto coarse = minimize_over_detuning(p, d, 0.5, 1.5, {}, 256);
    const auto fine = minimize_over_detuning(p, d, 0.5, 1.5, {}, 512);
    CHECK(std::abs(coarse.value - fine.value) < 1e-4);
    CHECK(std::abs(coarse.delta_star - fine.delta_star) < 2e-3 * p.mech_freq);
    CHECK(coarse.value == doctest::Approx(0.265).epsilon(0.02 / 0.265));
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
    try {
        parallel_for(50, 3, [](std::size_t i) {
            if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "7");
    }
}
