#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "fixtures.hpp"
#include "fplan/library_io.hpp"

using namespace fplan;
using fplan::testing::test_library;

TEST_CASE("library round-trips through the file format") {
  const FunnelLibrary& lib = test_library();
  const std::string text = library_to_string(lib);
  const FunnelLibrary back = library_from_string(text);

  REQUIRE(back.funnels.size() == lib.funnels.size());
  CHECK(back.epsilon == lib.epsilon);
  CHECK(back.goal_ball_radius == lib.goal_ball_radius);
  CHECK(back.metadata == lib.metadata);
  for (std::size_t i = 0; i < lib.funnels.size(); ++i) {
    const Funnel& a = lib.funnels[i];
    const Funnel& b = back.funnels[i];
    CHECK(a.id() == b.id());
    REQUIRE(a.knot_count() == b.knot_count());
    CHECK(a.cyclic_idx() == b.cyclic_idx());
    for (int k = 0; k < a.knot_count(); ++k) {
      CHECK(std::abs(a.knot_times()[k] - b.knot_times()[k]) <= 1e-12);
      CHECK((a.states()[k] - b.states()[k]).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((a.inputs()[k] - b.inputs()[k]).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((a.ellipsoids()[k].shape() - b.ellipsoids()[k].shape()).cwiseAbs().maxCoeff() <=
            1e-12);
      CHECK(std::abs(a.certificate().rho[k] - b.certificate().rho[k]) <= 1e-12);
    }
    CHECK(std::abs(a.cost() - b.cost()) <= 1e-12);
  }

  // Serialization is deterministic: a second pass is byte-identical.
  CHECK(library_to_string(back) == text);
}

TEST_CASE("library file save/load") {
  const auto path = std::filesystem::temp_directory_path() / "fplan_lib_test.json";
  save_library(test_library(), path.string());
  const FunnelLibrary back = load_library(path.string());
  CHECK(back.funnels.size() == test_library().funnels.size());
  std::filesystem::remove(path);

  CHECK_THROWS(load_library("/nonexistent/dir/lib.json"));
  CHECK_THROWS_AS(library_from_string("{\"format_version\": 99}"), std::invalid_argument);
}
