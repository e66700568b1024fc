#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rgbdt/error.hpp"
#include "rgbdt/eval.hpp"
#include "support/oracles.hpp"

using rgbdt::BoundingBox;
using rgbdt::MaybeBox;

namespace {

std::vector<MaybeBox> random_stream(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> pos(0.0, 50.0);
  std::uniform_real_distribution<double> len(1.0, 20.0);
  std::bernoulli_distribution absent(0.2);
  std::vector<MaybeBox> out;
  for (size_t i = 0; i < n; ++i) {
    if (absent(rng)) out.push_back(std::nullopt);
    else out.push_back(BoundingBox{pos(rng), pos(rng), len(rng), len(rng)});
  }
  return out;
}

}  // namespace

TEST_CASE("overlap follows the three-case definition") {
  CHECK(rgbdt::overlap(std::nullopt, std::nullopt) == 1.0);
  CHECK(rgbdt::overlap(BoundingBox{0, 0, 10, 10}, BoundingBox{0, 0, 10, 10}) == 1.0);
  CHECK(rgbdt::overlap(std::nullopt, BoundingBox{0, 0, 10, 10}) == -1.0);
  CHECK(rgbdt::overlap(BoundingBox{0, 0, 10, 10}, std::nullopt) == -1.0);
  CHECK(rgbdt::overlap(BoundingBox{0, 0, 10, 10}, BoundingBox{5, 0, 10, 10}) == 50.0 / 150.0);
}

TEST_CASE("overlap is symmetric for all presence combinations") {
  std::mt19937_64 rng(3);
  const auto a = random_stream(rng, 200);
  const auto b = random_stream(rng, 200);
  for (size_t i = 0; i < a.size(); ++i) CHECK(rgbdt::overlap(a[i], b[i]) == rgbdt::overlap(b[i], a[i]));
}

TEST_CASE("center position error") {
  CHECK(*rgbdt::cpe(BoundingBox{0, 0, 10, 10}, BoundingBox{0, 0, 10, 10}) == 0.0);
  // centers (5,5) and (8,9): a 3-4-5 triangle
  CHECK(*rgbdt::cpe(BoundingBox{0, 0, 10, 10}, BoundingBox{3, 4, 10, 10}) == doctest::Approx(5.0));
  CHECK(*rgbdt::cpe(BoundingBox{0, 0, 10, 10}, BoundingBox{10, 0, 10, 10}) ==
        doctest::Approx(10.0));
  CHECK(!rgbdt::cpe(std::nullopt, BoundingBox{0, 0, 1, 1}).has_value());
  CHECK(!rgbdt::cpe(BoundingBox{0, 0, 1, 1}, std::nullopt).has_value());
}

TEST_CASE("success rate counts strict exceedances") {
  const std::vector<double> rs{1.0, 1.0, -1.0, 0.6};
  CHECK(rgbdt::success_rate(rs, 0.5) == 0.75);
  const std::vector<double> ones(10, 1.0);
  CHECK(rgbdt::success_rate(ones, 0.9) == 1.0);
  const std::vector<double> fails{-1.0, -1.0};
  CHECK(rgbdt::success_rate(fails, 0.3) == 0.0);
  CHECK_THROWS_AS(rgbdt::success_rate({}, 0.5), rgbdt::Error);
}

TEST_CASE("error classification follows the three definitions") {
  const MaybeBox box = BoundingBox{0, 0, 10, 10};
  const MaybeBox far_box = BoundingBox{8, 0, 10, 10};

  auto one = [&](const MaybeBox& t, const MaybeBox& g) {
    return rgbdt::classify_errors(std::vector{t}, std::vector{g}, 0.5).front();
  };
  CHECK(one(box, std::nullopt).error == rgbdt::FrameError::type2);
  CHECK(one(std::nullopt, box).error == rgbdt::FrameError::type3);
  CHECK(one(far_box, box).error == rgbdt::FrameError::type1);  // r = 2/18 < 0.5
  CHECK(one(box, box).error == rgbdt::FrameError::none);
  CHECK(one(std::nullopt, std::nullopt).error == rgbdt::FrameError::none);

  CHECK_THROWS_AS(
      rgbdt::classify_errors(std::vector<MaybeBox>{box}, std::vector<MaybeBox>{box, box}, 0.5),
      rgbdt::Error);
}

TEST_CASE("every frame lands in exactly one bucket and matches brute force") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_stream(rng, 40);
    const auto g = random_stream(rng, 40);
    const double rt = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    const auto scores = rgbdt::classify_errors(t, g, rt);
    const auto brute = oracle::brute_errors(t, g, rt);
    long counts[4] = {0, 0, 0, 0};
    for (const auto& s : scores) ++counts[static_cast<int>(s.error)];
    CHECK(counts[0] == brute.success);
    CHECK(counts[1] == brute.type1);
    CHECK(counts[2] == brute.type2);
    CHECK(counts[3] == brute.type3);
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == 40);

    std::vector<double> rs;
    for (const auto& s : scores) rs.push_back(s.r);
    CHECK(rgbdt::success_rate(rs, rt) == oracle::brute_success_rate(rs, rt));
  }
}

TEST_CASE("speed statistic") {
  const MaybeBox b = BoundingBox{0, 0, 10, 10};
  SUBCASE("static ground truth has zero speed") {
    const std::vector<MaybeBox> g(5, b);
    const auto s = rgbdt::speed_stat(g);
    CHECK(s.max == 0.0);
    CHECK(s.mean == 0.0);
  }
  SUBCASE("max over pairs") {
    // one pair with overlap 0.4 (inter 40, union 100... use r = 50/150 = 1/3? choose 0.4):
    // boxes (0,0,10,10) and (x,0,10,10) overlap r = (10-x)/(10+x); x=30/7 gives r=0.4
    const double x = 30.0 / 7.0;
    const std::vector<MaybeBox> g{b, BoundingBox{x, 0, 10, 10}, BoundingBox{x, 0, 10, 10}};
    const auto s = rgbdt::speed_stat(g);
    CHECK(s.max == doctest::Approx(0.6));
  }
  SUBCASE("alternating presence has no valid pair") {
    const std::vector<MaybeBox> g{b, std::nullopt, b, std::nullopt};
    CHECK_THROWS_AS(rgbdt::speed_stat(g), rgbdt::Error);
  }
  SUBCASE("matches brute force on random streams") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
      const auto g = random_stream(rng, 30);
      const auto brute = oracle::brute_speed(g);
      if (!brute.defined) {
        CHECK_THROWS_AS(rgbdt::speed_stat(g), rgbdt::Error);
      } else {
        const auto s = rgbdt::speed_stat(g);
        CHECK(s.max == brute.max);
        CHECK(s.mean == doctest::Approx(brute.mean).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("success curve") {
  SUBCASE("perfect tracker is flat at 1") {
    const std::vector<double> rs(20, 1.0);
    for (const auto& [rt, r] : rgbdt::success_curve(rs, 10)) {
      CHECK(r == 1.0);
      CHECK(rt > 0.0);
      CHECK(rt < 1.0);
    }
  }
  SUBCASE("single-value stream is a step function") {
    const std::vector<double> rs(8, 0.6);
    for (const auto& [rt, r] : rgbdt::success_curve(rs, 10)) {
      if (rt < 0.6) CHECK(r == 1.0);
      else CHECK(r == 0.0);  // strict inequality at rt = 0.6
    }
  }
  SUBCASE("non-increasing and equal to direct recomputation") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> rs;
    for (int i = 0; i < 100; ++i) rs.push_back(u(rng));
    double prev = 1.0;
    for (const auto& [rt, r] : rgbdt::success_curve(rs, 50)) {
      CHECK(r <= prev);
      CHECK(r == oracle::brute_success_rate(rs, rt));
      prev = r;
    }
  }
}

TEST_CASE("summarize ties the partition together") {
  std::mt19937_64 rng(41);
  const auto t = random_stream(rng, 60);
  const auto g = random_stream(rng, 60);
  const auto m = rgbdt::summarize(t, g, 0.5);
  CHECK(m.success_rate + m.type1 + m.type2 + m.type3 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.frames == 60);
}
