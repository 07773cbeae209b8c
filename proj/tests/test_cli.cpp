#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ringcav/cli.hpp"

using ringcav::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::vector<double> fields(const std::string& line) {
    std::vector<double> v;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) v.push_back(cell.empty() ? -1.0 : std::stod(cell));
    return v;
}

}  // namespace

TEST_CASE("point at the baseline") {
    const Outcome o = call({"point"});
    REQUIRE(o.code == 0);
    const auto ls = lines(o.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "delta_per_wm,photon_number,var_q_plus,var_p_minus,product,sum,product_entangled,sum_entangled");
    const auto v = fields(ls[1]);
    CHECK(v[3] == doctest::Approx(0.265).epsilon(0.02 / 0.265));
    CHECK(v[6] == 1.0);
}

TEST_CASE("point without laser power gives the thermal limit") {
    const Outcome o = call({"--power-mw", "0", "point"});
    REQUIRE(o.code == 0);
    const auto v = fields(lines(o.out)[1]);
    CHECK(v[1] == 0.0);
    CHECK(v[3] == doctest::Approx(2.0012226215234672).epsilon(1e-3));
}

TEST_CASE("exit codes") {
    CHECK(call({}).code == 1);
    CHECK(call({"bogus"}).code == 1);
    CHECK(call({"--r", "-1", "point"}).code == 1);
    CHECK(call({"--geometry", "5ring", "point"}).code == 1);
    CHECK(call({"--config", "/nonexistent/file.cfg", "point"}).code == 1);
    CHECK(call({"sweep", "--axis", "detuning", "--start", "1", "--stop", "0.5", "--points", "5"}).code == 1);
    CHECK(call({"--help"}).code == 0);

    const Outcome unstable = call({"--power-mw", "200", "point"});
    CHECK(unstable.code == 2);
    CHECK(unstable.out.empty());
    CHECK(unstable.err.find("unstable") != std::string::npos);
}

TEST_CASE("stability and branches") {
    const Outcome s = call({"stability"});
    REQUIRE(s.code == 0);
    CHECK(lines(s.out)[0] == "delta_per_wm,stable,routh_hurwitz,eigen,margin_rad_s");
    CHECK(fields(lines(s.out)[1])[1] == 1.0);

    const Outcome b = call({"branches", "--bare-per-wm", "0.55"});
    REQUIRE(b.code == 0);
    CHECK(lines(b.out).size() == 4);  // header and three coexisting branches
    const Outcome one = call({"branches", "--bare-per-wm", "1.2"});
    CHECK(lines(one.out).size() == 2);
}

TEST_CASE("figure presets equal the explicit sweeps") {
    const Outcome fig2 = call({"fig2"});
    const Outcome sweep2 = call({"sweep", "--axis", "detuning", "--start", "0.5", "--stop", "1.5", "--points", "200"});
    REQUIRE(fig2.code == 0);
    CHECK(fig2.out == sweep2.out);
    CHECK(lines(fig2.out)[0] == "axis_value,var_q_plus,var_p_minus,product,sum,stable");
    CHECK(lines(fig2.out).size() == 201);

    const Outcome fig4 = call({"fig4"});
    const Outcome sweep4 = call({"sweep", "--axis", "bath_temp", "--start", "0", "--stop", "200e-6", "--points", "201"});
    REQUIRE(fig4.code == 0);
    CHECK(fig4.out == sweep4.out);
}

TEST_CASE("fig4 crossing temperature") {
    const Outcome o = call({"fig4"});
    REQUIRE(o.code == 0);
    double crossing = -1.0;
    const auto ls = lines(o.out);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto v = fields(ls[i]);
        if (v[3] >= 1.0) {
            crossing = v[0];
            break;
        }
    }
    CHECK(crossing >= 156e-6);
    CHECK(crossing <= 176e-6);
    CHECK(fields(ls[1])[3] == doctest::Approx(0.132).epsilon(0.01 / 0.132));
}

TEST_CASE("json output and output files") {
    const Outcome j = call({"--format", "json", "sweep", "--axis", "squeeze_r", "--start", "0", "--stop", "2", "--points", "3"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["axis"] == "squeeze_r");
    CHECK(doc["rows"].size() == 3);

    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = (dir / "ringcav_cli_test.csv").string();
    const auto gp = (dir / "ringcav_cli_test.gp").string();
    const Outcome f = call({"--output", csv, "--gnuplot-script", gp, "fig2"});
    REQUIRE(f.code == 0);
    CHECK(f.out.empty());
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "axis_value,var_q_plus,var_p_minus,product,sum,stable");
    CHECK(std::filesystem::exists(gp));
    std::filesystem::remove(csv);
    std::filesystem::remove(gp);
}

TEST_CASE("config file values are used and flags override them") {
    const auto path = (std::filesystem::temp_directory_path() / "ringcav_cli_test.cfg").string();
    {
        std::ofstream cfg(path);
        cfg << "[params]\nlaser_power = 0\n";
    }
    const Outcome a = call({"--config", path, "point"});
    REQUIRE(a.code == 0);
    CHECK(fields(lines(a.out)[1])[1] == 0.0);
    CHECK(a.err.find("note:") != std::string::npos);

    const Outcome b = call({"--config", path, "--power-mw", "3.8", "point"});
    REQUIRE(b.code == 0);
    CHECK(fields(lines(b.out)[1])[1] > 1e9);
    std::filesystem::remove(path);
}
