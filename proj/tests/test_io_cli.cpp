#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cubelp/generators.hpp"
#include "cubelp/geodesic.hpp"
#include "cubelp/io.hpp"
#include "support.hpp"

using namespace cubelp;
using cubelp::testing::error_code_of;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(CUBELP_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    char buf[4096];
    while (const std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const std::string& name) {
    return std::string(CUBELP_FIXTURES) + "/" + name + ".json";
}

}  // namespace

TEST(Io, ParseErrors) {
    for (const char* doc : {"", "[1,2]", "{\"hyperplanes\":[\"a\"]}",
                            R"({"hyperplanes":["a"],"vertices":[{"a":2}]})",
                            R"({"hyperplanes":["a"],"vertices":[{"b":0}]})",
                            R"({"hyperplanes":[1],"vertices":[]})"}) {
        EXPECT_EQ(error_code_of([&] { load_complex(doc); }), ErrorCode::ParseError) << doc;
    }
    EXPECT_EQ(error_code_of([] {
                  load_complex(R"({"hyperplanes":["a","b"],"vertices":[{"a":0,"b":0},{"a":1,"b":1}]})");
              }),
              ErrorCode::Disconnected);
}

TEST(Io, ComplexRoundTrip) {
    for (const auto& nc : bundled_fixtures()) {
        const auto back = load_complex(complex_json(nc.complex).dump());
        EXPECT_EQ(back.hyperplanes(), nc.complex.hyperplanes());
        EXPECT_EQ(back.vertices(), nc.complex.vertices());
        const auto file = load_complex_file(fixture(nc.name));
        EXPECT_EQ(file.vertices(), nc.complex.vertices()) << nc.name;
    }
}

TEST(Io, PointLiterals) {
    const auto X = hypercube(2);
    const Point a = parse_point(X, "0:h1=0.25,h2=0.7");
    EXPECT_DOUBLE_EQ(a[0], 0.25);
    EXPECT_DOUBLE_EQ(a[1], 0.7);
    const Point b = parse_point(X, "3:h1=0.25");  // measured away from vertex 11
    EXPECT_DOUBLE_EQ(b[0], 0.75);
    EXPECT_DOUBLE_EQ(b[1], 1.0);
    EXPECT_TRUE(parse_point(X, "2:").is_vertex());
    for (const char* bad : {"x:", "9:", "0:h3=0.5", "0:h1=1.5", "0:h1", "0:h1=0.2,h1=0.3", "0"}) {
        EXPECT_EQ(error_code_of([&] { parse_point(X, bad); }), ErrorCode::ParseError) << bad;
    }
    const auto corner = corner_complex();
    EXPECT_EQ(error_code_of([&] { parse_point(corner, "1:b1=0.5"); }), ErrorCode::InvalidArgument);

    SplitMix64 rng(3);
    for (const auto& nc : bundled_fixtures()) {
        for (int i = 0; i < 20; ++i) {
            const Point x = cubelp::testing::random_point(nc.complex, rng);
            EXPECT_EQ(parse_point(nc.complex, point_literal(nc.complex, x)), x);
        }
    }
}

TEST(Io, PathRoundTrip) {
    SplitMix64 rng(4);
    for (const auto& nc : bundled_fixtures()) {
        const auto& X = nc.complex;
        const auto path = geodesic(X, cubelp::testing::random_point(X, rng),
                                   cubelp::testing::random_point(X, rng), PValue(2.5));
        const json doc = json::parse(path_json(X, path).dump());
        const auto back = path_from_json(X, doc);
        EXPECT_NEAR(back.length(), path.length(), 1e-12);
        EXPECT_EQ(back.breaks(), path.breaks());
        json tampered = doc;
        tampered["length"] = path.length() + 1e-6;
        EXPECT_EQ(error_code_of([&] { path_from_json(X, tampered); }), ErrorCode::InvalidArgument);
    }
}

TEST(Io, DecompositionInfiniteRatioIsNull) {
    const auto X = hypercube(2);
    Decomposition dec;
    SignVector a;
    a.set(0);
    dec.A = {a};
    dec.B = {SignVector{}};
    dec.ratios = {INFINITY};
    const json j = decomposition_json(X, dec);
    EXPECT_TRUE(j["factors"][0]["ratio"].is_null());
    EXPECT_EQ(j["factors"][0]["A"], json::array({"h1"}));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli("validate " + fixture("square")).code, 0);
    EXPECT_EQ(cli("validate builtin:corner").code, 0);
    EXPECT_EQ(cli("validate /nonexistent.json").code, 1);
    EXPECT_EQ(cli("--bogus").code, 2);
    EXPECT_EQ(cli("distance --p 2 --from 0: builtin:square").code, 2);
    EXPECT_EQ(cli("distance --p 0.5 --from 0: --to 3: builtin:square").code, 2);
    EXPECT_EQ(cli("distance --p 2 --from 0: --to 3: --frobnicate builtin:square").code, 2);
    EXPECT_EQ(cli("distance --p 2 --from 0:zz=0.1 --to 3: builtin:square").code, 1);
    EXPECT_EQ(cli("suite nosuch builtin:square").code, 2);
}

TEST(Cli, Distance) {
    const auto r = cli("distance --p 2 --from 0: --to 3: " + fixture("square"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(r.out), std::sqrt(2.0), 1e-12);
    const auto inf = cli("distance --p inf --from 0: --to 3: builtin:square");
    ASSERT_EQ(inf.code, 0);
    EXPECT_NEAR(std::stod(inf.out), 1.0, 1e-15);
}

TEST(Cli, GeodesicJsonRevalidates) {
    const auto r = cli("geodesic --json --p 2 --from 1: --to 9: builtin:square_cube_book");
    ASSERT_EQ(r.code, 0);
    const auto X = square_cube_book();
    const auto path = path_from_json(X, json::parse(r.out));
    EXPECT_NEAR(path.breaks()[1][0], 1.0 / (1.0 + std::sqrt(2.0)), 1e-9);

    const std::string file = ::testing::TempDir() + "cubelp_path.json";
    std::ofstream(file) << r.out;
    EXPECT_EQ(cli("check --path " + file + " builtin:square_cube_book").code, 0);
}

TEST(Cli, SeededSuitesReproducible) {
    const std::string args = "suite busemann builtin:corner --p 2 --samples 10 --seed 9";
    const auto a = cli(args + " --threads 1");
    const auto b = cli(args + " --threads 3");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const json j = json::parse(a.out);
    EXPECT_EQ(j["violations"], 0);
    EXPECT_EQ(j["samples"], 10);
}

TEST(Cli, SweepAndDecagon) {
    const auto s = cli("sweep-p --functional break0 --grid lin:2:2:1 --from 1: --to 9: "
                       "builtin:square_cube_book --json");
    ASSERT_EQ(s.code, 0);
    const json j = json::parse(s.out);
    ASSERT_FALSE(j["rows"].empty());
    EXPECT_NEAR(j["rows"][0][1].get<double>(), 1.0 / (1.0 + std::sqrt(2.0)), 1e-6);
    EXPECT_EQ(cli("suite decagon --n 2").code, 0);
    EXPECT_EQ(cli("suite decagon --n 1").code, 1);
}
