#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "isocm/errors.hpp"
#include "isocm/io.hpp"

using namespace isocm;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidConfig;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("format_double round trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  }

  TEST_CASE("reduced states round trip through JSON") {
    for (const auto& p : {testing::gh(3, 2), testing::bn(2, 1, 2, 0.4, 0.9), testing::lie(3)}) {
      const ReducedState r = random_reduced(p, 8);
      const json j = to_json(r);
      const ReducedState back = reduced_state_from_json(json::parse(j.dump()), p);
      CHECK(reduced_distance(r, back) == 0.0);
    }
  }

  TEST_CASE("malformed states are rejected") {
    const auto p = testing::gh(2, 2);
    const json good = to_json(testing::draw<ReducedStateGH>(p, 1));

    json extra = good;
    extra["foo"] = 1;
    CHECK(kind_of([&] { reduced_state_from_json(extra, p); }) == ErrorKind::InvalidConfig);

    json missing = good;
    missing.erase("p");
    CHECK(kind_of([&] { reduced_state_from_json(missing, p); }) == ErrorKind::InvalidConfig);

    json shortq = good;
    shortq["q"] = {1.0};
    CHECK(kind_of([&] { reduced_state_from_json(shortq, p); }) == ErrorKind::DimensionMismatch);

    json unordered = good;
    std::swap(unordered["q"][0], unordered["q"][1]);
    CHECK(kind_of([&] { reduced_state_from_json(unordered, p); }) == ErrorKind::DegenerateSpectrum);

    json off = good;
    off["zeta"][0][0][0] = off["zeta"][0][0][0].get<double>() + 0.1;
    CHECK(kind_of([&] { reduced_state_from_json(off, p); }) == ErrorKind::ConstraintViolation);

    json lie = to_json(testing::draw<ReducedStateLie>(testing::lie(3), 1));
    lie["xi"][0][0] = {0.0, 0.5};
    CHECK_THROWS_AS(reduced_state_from_json(lie, testing::lie(3)), Error);
  }

  TEST_CASE("B_n states need positive ordered q") {
    const auto p = testing::bn(2, 1, 1);
    json j = to_json(testing::draw<ReducedStateBn>(p, 3));
    j["q"][1] = -0.5;
    CHECK_THROWS_AS(reduced_state_from_json(j, p), Error);
  }

  TEST_CASE("CSV layout") {
    const auto p = testing::gh(2, 2);
    const auto cols = csv_columns(p);
    CHECK(cols.front() == "t");
    CHECK(cols[1] == "q1");
    CHECK(cols[3] == "p1");
    CHECK(cols.size() == 1 + 2 + 2 + 2 * 2 * 2 + 2);
    CHECK(cols[cols.size() - 2] == "energy");
    CHECK(cols.back() == "constraint_residual");

    const auto r = testing::draw<ReducedStateGH>(p, 1);
    const auto traj = integrate(r, p, uniform_grid(0.5, 3));
    const std::string csv = trajectory_csv(traj, p);
    std::istringstream in(csv);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
      ++lines;
      CHECK(std::count(line.begin(), line.end(), ',') == static_cast<long>(cols.size()) - 1);
    }
    CHECK(lines == 4);
    CHECK(distance_csv({{0.0, 0.25}}) == "t,reduced_distance\n0,0.25\n");
  }

  TEST_CASE("atomic writes replace the target") {
    const auto dir = std::filesystem::temp_directory_path() / "isocm_io_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto f = dir / "a.txt";
    write_file_atomic(f, "first");
    write_file_atomic(f, "second");
    CHECK(slurp(f) == "second");
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator()) == 1);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("trajectory summary") {
    const auto p = testing::lie(3);
    const auto traj = integrate(testing::draw<ReducedStateLie>(p, 1), p, uniform_grid(1.0, 5));
    const json s = trajectory_summary(traj);
    CHECK(s.contains("energy_drift"));
    CHECK(s["samples"] == 5);
  }
}
