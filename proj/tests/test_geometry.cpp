#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rgbdt/geometry.hpp"
#include "support/oracles.hpp"

using rgbdt::BoundingBox;

TEST_CASE("intersect_area on known boxes") {
  CHECK(rgbdt::intersect_area({0, 0, 10, 10}, {0, 0, 10, 10}) == 100.0);
  CHECK(rgbdt::intersect_area({0, 0, 10, 10}, {20, 20, 5, 5}) == 0.0);
  CHECK(rgbdt::intersect_area({0, 0, 10, 10}, {5, 0, 10, 10}) == 50.0);
}

TEST_CASE("union_area on known boxes") {
  CHECK(rgbdt::union_area({0, 0, 10, 10}, {0, 0, 10, 10}) == 100.0);
  CHECK(rgbdt::union_area({0, 0, 10, 10}, {5, 0, 10, 10}) == 150.0);
  CHECK(rgbdt::union_area({0, 0, 2, 2}, {10, 10, 3, 3}) == 13.0);
}

TEST_CASE("intersection bounds, symmetry and self-IoU on random boxes") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(-20.0, 60.0);
  std::uniform_real_distribution<double> len(0.5, 40.0);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox a{pos(rng), pos(rng), len(rng), len(rng)};
    const BoundingBox b{pos(rng), pos(rng), len(rng), len(rng)};
    const double inter = rgbdt::intersect_area(a, b);
    CHECK(inter >= 0.0);
    CHECK(inter <= std::min(a.area(), b.area()) + 1e-12);
    CHECK(inter == rgbdt::intersect_area(b, a));
    CHECK(rgbdt::union_area(a, b) == rgbdt::union_area(b, a));
    CHECK(rgbdt::intersect_area(a, a) / rgbdt::union_area(a, a) == doctest::Approx(1.0));
  }
}

TEST_CASE("intersect_area matches the pixel-membership oracle on integer grids") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pos(0, 54);
  std::uniform_int_distribution<int> len(1, 10);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox a{double(pos(rng)), double(pos(rng)), double(len(rng)), double(len(rng))};
    const BoundingBox b{double(pos(rng)), double(pos(rng)), double(len(rng)), double(len(rng))};
    CHECK(rgbdt::intersect_area(a, b) == double(oracle::pixel_intersection(a, b, 64)));
  }
}

TEST_CASE("clamp_into keeps boxes inside the frame") {
  const BoundingBox b = rgbdt::clamp_into({-5, -3, 10, 10}, 64, 48);
  CHECK(rgbdt::inside(b, 64, 48));
  CHECK(b.w == 10.0);
  const BoundingBox big = rgbdt::clamp_into({0, 0, 100, 100}, 64, 48);
  CHECK(rgbdt::inside(big, 64, 48));
}
