#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "cvgeo_cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cvgeo::cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> v;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::stod(cell));
  return v;
}

}  // namespace

TEST(CliClassify, Names) {
  EXPECT_EQ(run({"classify", "--l", "1", "--m", "0"}).out, "Heisenberg\n");
  EXPECT_EQ(run({"classify", "--l", "0", "--m", "0.25"}).out,
            "ProductSphere (factor curvature 1)\n");
  EXPECT_EQ(run({"classify", "--l", "0", "--m", "0"}).out, "EuclideanFlat\n");
  EXPECT_EQ(run({"classify", "--l", "0", "--m", "-1"}).out,
            "ProductHyperbolic (factor curvature -4)\n");
}

TEST(CliClassify, UsageErrors) {
  EXPECT_EQ(run({"classify", "--l", "abc", "--m", "0"}).code, 64);
  EXPECT_EQ(run({"classify", "--l", "1"}).code, 64);
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"frobnicate"}).code, 64);
  EXPECT_EQ(run({"classify", "--l", "nan", "--m", "0"}).code, 65);
}

TEST(CliGeodesic, FlatLine) {
  const auto r = run({"geodesic", "--l", "0", "--m", "0", "--u", "1", "--v", "0", "--w", "0",
                      "--t-max", "1", "--samples", "3"});
  ASSERT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0], "t,x,y,z,vx,vy,vz,I1,I2,I3,I4,speed");
  const double ts[] = {0, 0.5, 1};
  for (int i = 0; i < 3; ++i) {
    const auto f = fields(ls[i + 1]);
    ASSERT_EQ(f.size(), 12u);
    EXPECT_EQ(f[0], ts[i]);
    EXPECT_NEAR(f[1], ts[i], 1e-12);
  }
}

TEST(CliGeodesic, BothMethodsAgree) {
  const auto r = run({"geodesic", "--l", "1", "--m", "1", "--u", "1", "--v", "0", "--w", "1",
                      "--method", "both"});
  EXPECT_EQ(r.code, 0);
  ASSERT_NE(r.err.find("max_discrepancy"), std::string::npos);
  const double d = std::stod(r.err.substr(r.err.find(' ') + 1));
  EXPECT_LT(d, 1e-5);
}

TEST(CliGeodesic, ClosedFormColumns) {
  const auto r = run({"geodesic", "--l", "2", "--m", "-1", "--u", "1", "--v", "0", "--w", "1",
                      "--method", "closed", "--t-max", "2", "--samples", "11"});
  ASSERT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 12u);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = fields(ls[i]);
    EXPECT_NEAR(f[7], 0, 1e-8);   // I1 = v
    EXPECT_NEAR(f[8], 1, 1e-8);   // I2 = u
    EXPECT_NEAR(f[9], 1, 1e-8);   // I3 = w
    EXPECT_NEAR(f[10], 0, 1e-8);  // I4 = 0
  }
}

TEST(CliGeodesic, FourthIntegralVanishesFromOrigin) {
  const auto r = run({"geodesic", "--l", "0.7", "--m", "-0.3", "--u", "0.2", "--v", "-0.4",
                      "--w", "0.9", "--t-max", "3"});
  ASSERT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_NEAR(fields(ls[i])[10], 0, 1e-9);
}

TEST(CliGeodesic, DomainExitGivesPartialOutput) {
  const auto r = run({"geodesic", "--l", "0", "--m", "-1", "--u", "1", "--v", "0", "--w", "0",
                      "--t-max", "30", "--samples", "31"});
  EXPECT_EQ(r.code, 3);
  const auto ls = lines(r.out);
  EXPECT_GT(ls.size(), 2u);
  EXPECT_LT(ls.size(), 32u);
}

TEST(CliGeodesic, InvalidInputs) {
  EXPECT_EQ(run({"geodesic", "--l", "1", "--m", "1", "--u", "1", "--x0", "0.1", "--method",
                 "closed"}).code,
            65);
  EXPECT_EQ(run({"geodesic", "--l", "1", "--m", "1"}).code, 65);
  EXPECT_EQ(run({"geodesic", "--l", "1", "--m", "-1", "--u", "1", "--x0", "2"}).code, 65);
  EXPECT_EQ(run({"geodesic", "--l", "1", "--m", "1", "--u", "1", "--samples", "1"}).code, 65);
  EXPECT_EQ(run({"geodesic", "--l", "1", "--m", "1", "--u", "1", "--method", "magic"}).code, 64);
}

TEST(CliGeodesic, ToleranceFromEnvironment) {
  ::setenv("CVGEO_TOL", "1e-6", 1);
  const auto coarse = run({"geodesic", "--l", "1", "--m", "1", "--u", "1", "--w", "1"});
  ::setenv("CVGEO_TOL", "bogus", 1);
  const auto bad = run({"geodesic", "--l", "1", "--m", "1", "--u", "1", "--w", "1"});
  ::unsetenv("CVGEO_TOL");
  const auto fine = run({"geodesic", "--l", "1", "--m", "1", "--u", "1", "--w", "1"});
  EXPECT_EQ(coarse.code, 0);
  EXPECT_EQ(bad.code, 65);
  EXPECT_NE(coarse.out, fine.out);
}

TEST(CliAudit, SuitesPass) {
  for (std::string suite : {"killing", "integrals", "curvature", "frobenius", "surfaces"}) {
    const auto r = run({"audit", "--suite", suite, "--seed", "7", "--count", "20"});
    EXPECT_EQ(r.code, 0) << suite << "\n" << r.out;
    const auto ls = lines(r.out);
    EXPECT_EQ(ls.size(), 20u);
    for (const auto& l : ls) {
      const auto j = nlohmann::json::parse(l);
      EXPECT_EQ(j["status"], "pass") << l;
      EXPECT_LE(j["residual"].get<double>(), j["tolerance"].get<double>());
    }
  }
}

TEST(CliAudit, CurvatureIncludesProductRecords) {
  const auto r = run({"audit", "--suite", "curvature", "--seed", "2", "--count", "50"});
  EXPECT_EQ(r.code, 0);
  int product = 0;
  for (const auto& l : lines(r.out)) {
    const auto j = nlohmann::json::parse(l);
    if (j["check"] == "curvature.product") {
      ++product;
      EXPECT_NEAR(j["params"]["K12"].get<double>(), 4 * j["params"]["m"].get<double>(), 1e-8);
    }
  }
  EXPECT_GE(product, 10);
}

TEST(CliAudit, Deterministic) {
  const auto a = run({"audit", "--suite", "integrals", "--seed", "3", "--count", "5"});
  const auto b = run({"audit", "--suite", "integrals", "--seed", "3", "--count", "5"});
  const auto c = run({"audit", "--suite", "integrals", "--seed", "4", "--count", "5"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST(CliAudit, UnknownSuiteAndBadCount) {
  EXPECT_EQ(run({"audit", "--suite", "nope"}).code, 64);
  EXPECT_EQ(run({"audit", "--suite", "killing", "--count", "0"}).code, 65);
}

TEST(CliSurface, SliceParallels) {
  const auto r = run({"surface", "--l", "0", "--m", "1", "--profile", "slice", "--action",
                      "parallels"});
  ASSERT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], "u0,f,residual");
  EXPECT_NEAR(fields(ls[1])[1], 1.0, 1e-12);
}

TEST(CliSurface, Meridians) {
  const auto cyl = run({"surface", "--l", "1", "--m", "0", "--profile", "cylinder", "--a", "2",
                        "--action", "meridians"});
  EXPECT_EQ(cyl.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(cyl.out)["geodesic"].get<bool>());
  const auto tan = run({"surface", "--l", "1", "--m", "1", "--profile", "tan", "--action",
                        "meridians"});
  EXPECT_EQ(tan.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(tan.out)["geodesic"].get<bool>());
  const auto cone = run({"surface", "--l", "1", "--m", "0.5", "--profile", "cone", "--action",
                         "meridians"});
  EXPECT_FALSE(nlohmann::json::parse(cone.out)["geodesic"].get<bool>());
}

TEST(CliSurface, FormsGrid) {
  const auto r = run({"surface", "--l", "0", "--m", "0", "--profile", "cylinder", "--a", "2",
                      "--action", "forms", "--nu", "3", "--nv", "2"});
  ASSERT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7u);
  EXPECT_EQ(ls[0], "u,v,E,F,G,B11,B12,B22");
  const auto f = fields(ls[1]);
  EXPECT_NEAR(f[2], 1, 1e-14);
  EXPECT_NEAR(f[4], 4, 1e-13);
}

TEST(CliSurface, GeodesicAndErrors) {
  const auto r = run({"surface", "--l", "1", "--m", "0.5", "--profile", "cylinder", "--a", "0.5",
                      "--u-min", "-20", "--u-max", "20", "--action", "geodesic", "--u0", "0",
                      "--du", "0.5", "--dv", "1", "--t-max", "10", "--samples", "6"});
  EXPECT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7u);
  EXPECT_EQ(ls[0], "t,u,v,du,dv,p_v,speed");
  const double pv = fields(ls[1])[5];
  for (std::size_t i = 2; i < ls.size(); ++i) EXPECT_NEAR(fields(ls[i])[5], pv, 1e-8);

  EXPECT_EQ(run({"surface", "--l", "0", "--m", "-1", "--profile", "slice", "--u-max", "1.5",
                 "--action", "forms"}).code,
            65);
  EXPECT_EQ(run({"surface", "--l", "0", "--m", "-1", "--profile", "tan"}).code, 65);
  EXPECT_EQ(run({"surface", "--l", "0", "--m", "1", "--profile", "teapot"}).code, 65);
  EXPECT_EQ(run({"surface", "--l", "1", "--m", "0", "--profile", "cone", "--action", "geodesic",
                 "--u0", "0.5", "--du", "-1", "--dv", "0", "--t-max", "2"}).code,
            3);
}

TEST(CliProcess, ExitCodesThroughTheShell) {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(CVGEO_BINARY) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status("classify --l 1 --m 0"), 0);
  EXPECT_EQ(status("classify --l x --m 0"), 64);
  EXPECT_EQ(status("audit --suite frobenius --seed 7 --count 20"), 0);
  EXPECT_EQ(status("geodesic --l 0 --m -1 --u 1 --t-max 30"), 3);
  EXPECT_EQ(status("surface --l 0 --m 1 --profile tan --u-max 1.6"), 65);
}

TEST(CliProcess, ByteIdenticalReruns) {
  auto capture = [](const std::string& args) {
    const std::string cmd = std::string(CVGEO_BINARY) + " " + args;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    while (const auto n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    pclose(pipe);
    return out;
  };
  const std::string args = "geodesic --l 1 --m -0.5 --u 0.3 --v 0.2 --w 1 --t-max 4";
  EXPECT_EQ(capture(args), capture(args));
  EXPECT_FALSE(capture(args).empty());
}
