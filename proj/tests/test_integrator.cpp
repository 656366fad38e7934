#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "ftc/integrator.hpp"

using namespace ftc;

namespace {

struct Recorded {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
};

template <class Rhs>
Recorded run(Rhs&& rhs, std::vector<double> y0, IntegratorSettings s) {
    Recorded rec;
    integrate(rhs, y0, s, [&rec](long, double t, const std::vector<double>& y) {
        rec.times.push_back(t);
        rec.states.push_back(y);
    });
    return rec;
}

}  // namespace

TEST_CASE("zero dynamics give a constant trajectory") {
    IntegratorSettings s;
    s.dt = 0.01;
    s.t_end = 1.0;
    s.record_every = 1;
    const auto rec = run([](double, const std::vector<double>&, std::vector<double>& dy) { dy[0] = 0.0; },
                         {2.5}, s);
    REQUIRE(rec.times.size() == 101);
    for (const auto& y : rec.states) CHECK(y[0] == 2.5);
}

TEST_CASE("rk4 solves the linear test equation to high accuracy") {
    IntegratorSettings s;
    s.dt = 1e-3;
    s.t_end = 1.0;
    auto decay = [](double, const std::vector<double>& y, std::vector<double>& dy) { dy[0] = -y[0]; };
    const auto rec = run(decay, {1.0}, s);
    CHECK(std::abs(rec.states.back()[0] - std::exp(-1.0)) < 1e-10);

    SECTION("euler is first order but lands nearby") {
        s.method = Method::Euler;
        s.dt = 1e-4;
        const auto e = run(decay, {1.0}, s);
        CHECK(std::abs(e.states.back()[0] - std::exp(-1.0)) < 1e-4);
    }
}

TEST_CASE("step halving divides the rk4 error by at least 8") {
    // damped rotation xdot = -y, ydot = x - 0.2 y from (1, 0); closed form
    // x = e^{-t/10} (cos wt + sin wt / (10 w)), y = e^{-t/10} sin(wt) / w
    auto rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = -y[1];
        dy[1] = y[0] - 0.2 * y[1];
    };
    const double w = std::sqrt(0.99);
    const double t_end = 2.0;
    const double x_ref = std::exp(-0.1 * t_end) * (std::cos(w * t_end) + 0.1 / w * std::sin(w * t_end));
    const double y_ref = std::exp(-0.1 * t_end) * std::sin(w * t_end) / w;
    auto terminal_error = [&](double dt) {
        IntegratorSettings s;
        s.dt = dt;
        s.t_end = t_end;
        s.record_every = 1;
        const auto rec = run(rhs, {1.0, 0.0}, s);
        return std::hypot(rec.states.back()[0] - x_ref, rec.states.back()[1] - y_ref);
    };
    const double coarse = terminal_error(0.05);
    const double halved = terminal_error(0.025);
    CHECK(coarse / halved >= 8.0);
}

TEST_CASE("identical runs are bitwise identical") {
    auto rhs = [](double t, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = std::sin(3.0 * t) - 0.5 * y[0] * std::abs(y[0]);
    };
    IntegratorSettings s;
    s.dt = 1e-3;
    s.t_end = 2.0;
    const auto a = run(rhs, {0.3}, s);
    const auto b = run(rhs, {0.3}, s);
    REQUIRE(a.times.size() == b.times.size());
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        CHECK(a.times[k] == b.times[k]);
        CHECK(a.states[k][0] == b.states[k][0]);
    }
}

TEST_CASE("non-finite states abort with context") {
    auto blowup = [](double, const std::vector<double>& y, std::vector<double>& dy) { dy[0] = y[0] * y[0]; };
    IntegratorSettings s;
    s.dt = 1e-2;
    s.t_end = 3.0;
    std::vector<double> y{1.0};
    CHECK_THROWS_AS(integrate(blowup, y, s, [](long, double, const std::vector<double>&) {}), NonFiniteError);
}

TEST_CASE("settings validation and recording stride") {
    IntegratorSettings s;
    s.dt = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.dt = 0.5;
    s.t_end = 0.1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.t_end = 1.0;
    s.record_every = -2;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);

    SECTION("auto stride keeps the row count at or under the cap") {
        IntegratorSettings fine;
        fine.dt = 1e-5;
        fine.t_end = 3.0;  // 300000 steps
        CHECK(fine.stride() == 4);
        fine.dt = 1e-4;
        fine.t_end = 4.0;  // 40000 steps
        CHECK(fine.stride() == 1);
    }

    SECTION("explicit stride decimates the recording") {
        IntegratorSettings dec;
        dec.dt = 0.01;
        dec.t_end = 1.0;
        dec.record_every = 10;
        const auto rec = run([](double, const std::vector<double>&, std::vector<double>& dy) { dy[0] = 1.0; },
                             {0.0}, dec);
        REQUIRE(rec.times.size() == 11);
        for (std::size_t k = 0; k < rec.times.size(); ++k)
            CHECK(rec.times[k] == Catch::Approx(0.1 * static_cast<double>(k)).margin(1e-12));
    }
}
