#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rgbdt/depth_model.hpp"
#include "support/testutil.hpp"

using rgbdt::BoundingBox;
using rgbdt::DepthGaussian;
using rgbdt::DepthHistogram;
using rgbdt::ImageU16;

TEST_CASE("depth histogram") {
  SUBCASE("hole-only region has total 0") {
    ImageU16 d(20, 20, 1, 0);
    const auto h = rgbdt::depth_histogram(d, {0, 0, 20, 20}, 50);
    CHECK(h.total == 0);
  }
  SUBCASE("constant region fills a single bin") {
    ImageU16 d(20, 20, 1, 3000);
    const auto h = rgbdt::depth_histogram(d, {2, 2, 10, 10}, 50);
    CHECK(h.total == 100);
    CHECK(h.bins[60] == 100);
    for (size_t i = 0; i < h.bins.size(); ++i)
      if (i != 60) CHECK(h.bins[i] == 0);
  }
  SUBCASE("two-value split fills two equal bins") {
    ImageU16 d(20, 20, 1);
    for (int y = 0; y < 20; ++y)
      for (int x = 0; x < 20; ++x) d.at(x, y) = x < 10 ? 2000 : 4000;
    const auto h = rgbdt::depth_histogram(d, {0, 0, 20, 20}, 50);
    CHECK(h.total == 400);
    CHECK(h.bins[2000 / 50] == 200);
    CHECK(h.bins[4000 / 50] == 200);
  }
  SUBCASE("pixel order does not matter (totals are counts)") {
    std::mt19937_64 rng(4);
    ImageU16 a(16, 16, 1), b(16, 16, 1);
    std::vector<uint16_t> vals;
    for (int i = 0; i < 256; ++i) vals.push_back(static_cast<uint16_t>(500 + 13 * i));
    for (int i = 0; i < 256; ++i) a.data()[i] = vals[i];
    std::shuffle(vals.begin(), vals.end(), rng);
    for (int i = 0; i < 256; ++i) b.data()[i] = vals[i];
    const auto ha = rgbdt::depth_histogram(a, {0, 0, 16, 16}, 50);
    const auto hb = rgbdt::depth_histogram(b, {0, 0, 16, 16}, 50);
    CHECK(ha.bins == hb.bins);
  }
}

TEST_CASE("gaussian fit over bin centers") {
  SUBCASE("single bin hits the sigma floor") {
    DepthHistogram h;
    h.bin_width = 50;
    h.bins.assign(201, 0);
    h.bins[60] = 100;
    h.total = 100;
    const auto g = rgbdt::fit_gaussian(h, 30.0);
    CHECK(g.mu == doctest::Approx(3025.0));
    CHECK(g.sigma == 30.0);
  }
  SUBCASE("two equal bins give the two-point moments") {
    DepthHistogram h;
    h.bin_width = 50;
    h.bins.assign(201, 0);
    h.bins[40] = 50;  // center 2025
    h.bins[80] = 50;  // center 4025
    h.total = 100;
    const auto g = rgbdt::fit_gaussian(h, 30.0);
    CHECK(g.mu == doctest::Approx(3025.0));
    CHECK(g.sigma == doctest::Approx(1000.0));
  }
  SUBCASE("Monte-Carlo sample recovers the generator parameters") {
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> n(2500.0, 200.0);
    DepthHistogram h;
    h.bin_width = 50;
    h.bins.assign(201, 0);
    for (int i = 0; i < 200000; ++i) {
      const double v = n(rng);
      if (v <= 0 || v > 10000) continue;
      ++h.bins[static_cast<int>(v) / 50];
      ++h.total;
    }
    const auto g = rgbdt::fit_gaussian(h, 30.0);
    CHECK(std::abs(g.mu - 2500.0) <= 20.0);
    CHECK(std::abs(g.sigma - 200.0) <= 20.0);
  }
  SUBCASE("empty histogram is an error") {
    DepthHistogram h;
    CHECK_THROWS_AS(rgbdt::fit_gaussian(h, 30.0), rgbdt::Error);
  }
}

TEST_CASE("occlusion likelihood counts bins strictly below mu - sigma") {
  SUBCASE("all mass at mu gives 0") {
    ImageU16 d(20, 20, 1, 3000);
    const auto h = rgbdt::depth_histogram(d, {0, 0, 20, 20}, 50);
    const auto g = rgbdt::fit_gaussian(h, 30.0);
    CHECK(rgbdt::occlusion_likelihood(h, g) == 0.0);
  }
  SUBCASE("30 of 100 pixels nearer than mu - sigma give 0.3") {
    DepthHistogram h;
    h.bin_width = 50;
    h.bins.assign(201, 0);
    h.bins[20] = 30;   // center 1025, well below 2900
    h.bins[60] = 70;   // center 3025
    h.total = 100;
    CHECK(rgbdt::occlusion_likelihood(h, {3000.0, 100.0}) == doctest::Approx(0.3));
  }
  SUBCASE("plate covering 40% of the box gives O = 0.4") {
    ImageU16 d(100, 100, 1);
    for (int y = 0; y < 100; ++y)
      for (int x = 0; x < 100; ++x) d.at(x, y) = x < 40 ? 1000 : 3000;
    const auto h = rgbdt::depth_histogram(d, {0, 0, 100, 100}, 50);
    CHECK(rgbdt::occlusion_likelihood(h, {3000.0, 100.0}) == doctest::Approx(0.40).epsilon(0.02));
  }
  SUBCASE("empty histogram is an error") {
    DepthHistogram h;
    CHECK_THROWS_AS(rgbdt::occlusion_likelihood(h, {3000.0, 100.0}), rgbdt::Error);
  }
  SUBCASE("monotone as mass moves below the threshold") {
    DepthHistogram h;
    h.bin_width = 50;
    h.bins.assign(201, 0);
    h.total = 100;
    double prev = -1.0;
    for (int k = 0; k <= 100; k += 10) {
      h.bins[10] = k;
      h.bins[60] = 100 - k;
      const double o = rgbdt::occlusion_likelihood(h, {3000.0, 100.0});
      CHECK(o >= prev);
      CHECK(o >= 0.0);
      CHECK(o <= 1.0);
      prev = o;
    }
  }
}

TEST_CASE("depth gate") {
  ImageU16 depth(100, 100, 1, 3000);
  for (int y = 0; y < 100; ++y)
    for (int x = 60; x < 100; ++x) depth.at(x, y) = 4500;  // far column
  const DepthGaussian g{3000.0, 100.0};

  std::vector<rgbdt::Detection> cands(3);
  cands[0].box = {10, 10, 20, 20};  // median 3000 == mu
  cands[1].box = {65, 10, 20, 20};  // median 4000+ , |diff| > 3*100+200
  cands[2].box = {30, 30, 20, 20};
  const auto kept = rgbdt::depth_gate(cands, depth, g, {3.0, 200.0});
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].box.x == 10);
  CHECK(kept[1].box.x == 30);

  SUBCASE("candidates without valid depth pass") {
    ImageU16 holes(100, 100, 1, 0);
    const auto all = rgbdt::depth_gate(cands, holes, g, {3.0, 200.0});
    CHECK(all.size() == 3);
  }
}

TEST_CASE("recenter snaps to the depth-consistent component") {
  // target plate at 3000 on a 6000 background
  auto make_depth = [](const BoundingBox& target) {
    ImageU16 d(120, 120, 1, 6000);
    for (int y = int(target.y); y < int(target.bottom()); ++y)
      for (int x = int(target.x); x < int(target.right()); ++x) d.at(x, y) = 3000;
    return d;
  };
  const DepthGaussian g{3000.0, 60.0};
  const BoundingBox target{40, 50, 30, 40};
  const ImageU16 depth = make_depth(target);

  SUBCASE("perfectly centered box is a fixed point") {
    const auto out = rgbdt::recenter(target, depth, g, 1.4);
    CHECK(out.cx() == doctest::Approx(target.cx()).epsilon(1e-9));
    CHECK(out.cy() == doctest::Approx(target.cy()).epsilon(1e-9));
  }
  SUBCASE("a 6 px offset is pulled back onto the target") {
    const BoundingBox off{target.x - 6, target.y, target.w, target.h};
    const auto out = rgbdt::recenter(off, depth, g, 1.4);
    CHECK(std::abs(out.cx() - target.cx()) <= 2.0);
    CHECK(std::abs(out.cy() - target.cy()) <= 2.0);
  }
  SUBCASE("idempotent on its own output") {
    const BoundingBox off{target.x - 5, target.y + 4, target.w, target.h};
    const auto once = rgbdt::recenter(off, depth, g, 1.4);
    const auto twice = rgbdt::recenter(once, depth, g, 1.4);
    CHECK(once == twice);
  }
  SUBCASE("all-invalid depth leaves the box unchanged") {
    ImageU16 holes(120, 120, 1, 0);
    const auto out = rgbdt::recenter(target, holes, g, 1.4);
    CHECK(out == target);
  }
}

TEST_CASE("exponential model update") {
  const DepthGaussian g{3000.0, 100.0};
  SUBCASE("rate 1 replaces the model") {
    const auto out = rgbdt::update_gaussian(g, {2000.0, 150.0}, 1.0, 30.0);
    CHECK(out.mu == 2000.0);
    CHECK(out.sigma == 150.0);
  }
  SUBCASE("identical observation is a fixed point") {
    const auto out = rgbdt::update_gaussian(g, g, 0.2, 30.0);
    CHECK(out.mu == doctest::Approx(3000.0));
    CHECK(out.sigma == doctest::Approx(100.0));
  }
  SUBCASE("rate 0.2 blends toward the observation") {
    const auto out = rgbdt::update_gaussian(g, {2000.0, 100.0}, 0.2, 30.0);
    CHECK(out.mu == doctest::Approx(2800.0));
  }
  SUBCASE("the sigma floor re-applies") {
    const auto out = rgbdt::update_gaussian({3000.0, 30.0}, {3000.0, 5.0}, 1.0, 30.0);
    CHECK(out.sigma == 30.0);
  }
  SUBCASE("invalid rate is rejected") {
    CHECK_THROWS_AS(rgbdt::update_gaussian(g, g, 0.0, 30.0), rgbdt::Error);
  }
}

TEST_CASE("an approaching target never looks like an occluder") {
  // 100 mm/frame toward the camera for 50 frames; sigma >= 100 via jitter.
  // The frame's own fit supplies Eq. 3's threshold, the tracked model only
  // updates at rate 0.2 (the gate consumer).
  std::mt19937_64 rng(777);
  std::normal_distribution<double> jitter(0.0, 100.0);
  DepthGaussian tracked{6000.0, 100.0};
  for (int i = 0; i < 50; ++i) {
    const double depth = 6000.0 - 100.0 * i;
    DepthHistogram h;
    h.bin_width = 50;
    h.bins.assign(201, 0);
    for (int k = 0; k < 2000; ++k) {
      const double v = depth + jitter(rng);
      if (v <= 0 || v > 10000) continue;
      ++h.bins[static_cast<int>(v) / 50];
      ++h.total;
    }
    const auto frame_fit = rgbdt::fit_gaussian(h, 30.0);
    CHECK(rgbdt::occlusion_likelihood(h, frame_fit) <= 0.35);
    tracked = rgbdt::update_gaussian(tracked, frame_fit, 0.2, 30.0);
  }
}
