#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spinchain/optimize.hpp"
#include "spinchain/protocol.hpp"

using namespace spinchain;

namespace {

ChainSpec xy(int n, double a) { return {n, ChainModel::XYEndModulated, a}; }

}  // namespace

TEST_CASE("range arithmetic") {
  Range r{2.0, 10.0, 2.0};
  CHECK(r.count() == 5);
  CHECK(r.at(0) == 2.0);
  CHECK(r.at(4) == 10.0);
  CHECK(Range{1.0, 1.0, 1.0}.count() == 1);
  CHECK(Range{1.0, 2.0, 0.3}.count() == 4);  // 1.0, 1.3, 1.6, 1.9
  CHECK_THROWS_AS((Range{1.0, 2.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Range{2.0, 1.0, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("single-cell sweep equals the closed form") {
  ChainSpec spec = xy(12, 0.4);
  auto r = sweep_surface(spec, {30.0, 30.0, 1.0}, {7.0, 7.0, 1.0});
  CHECK(r.t1 == 30.0);
  CHECK(r.t2 == 7.0);
  CHECK(r.max_value ==
        doctest::Approx(joint_success_two(spec, 30.0, 7.0)).epsilon(1e-12));
}

TEST_CASE("argmax re-evaluates to the reported maximum") {
  ChainSpec spec = xy(15, 0.3);
  auto r = sweep_surface(spec, {10.0, 120.0, 1.0}, {1.0, 40.0, 1.0}, true, 3);
  CHECK(r.max_value ==
        doctest::Approx(joint_success_two(spec, r.t1, r.t2)).epsilon(1e-12));
  REQUIRE(r.has_surface);
  REQUIRE(r.surface.rows() == 111);
  REQUIRE(r.surface.cols() == 40);
  CHECK(r.surface.maxCoeff() == doctest::Approx(r.max_value));
  CHECK(r.surface(0, 0) ==
        doctest::Approx(joint_success_two(spec, 10.0, 1.0)).epsilon(1e-12));
  CHECK(r.surface(5, 7) ==
        doctest::Approx(joint_success_two(spec, 15.0, 8.0)).epsilon(1e-12));
}

TEST_CASE("N=2 reaches unit success at the quarter period") {
  const double a = 0.5;
  const double t_star = std::numbers::pi / (2.0 * a);
  auto r = sweep_surface(xy(2, a), {t_star, t_star, 1.0}, {1.0, 1.0, 1.0});
  CHECK(r.max_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ties break toward the smallest times") {
  // For N=2, a=0.5 the first interval alone gives |f|^2 = 1 at both t1 = pi
  // and t1 = 3 pi; the earlier one must win.
  const double pi = std::numbers::pi;
  auto r = sweep_surface(xy(2, 0.5), {pi, 3.0 * pi, 2.0 * pi},
                         {1.0, 2.0, 1.0}, false, 1);
  CHECK(r.t1 == doctest::Approx(pi));
  CHECK(r.t2 == doctest::Approx(1.0));
  CHECK(r.max_value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("thread count does not change the result") {
  ChainSpec spec = xy(20, 0.35);
  auto serial = sweep_surface(spec, {20.0, 90.0, 1.0}, {5.0, 30.0, 1.0}, false, 1);
  auto parallel = sweep_surface(spec, {20.0, 90.0, 1.0}, {5.0, 30.0, 1.0},
                                false, 4);
  CHECK(serial.t1 == parallel.t1);
  CHECK(serial.t2 == parallel.t2);
  CHECK(serial.max_value == parallel.max_value);
}

TEST_CASE("pmax_vs_n matches per-length sweeps") {
  const std::vector<int> ns{6, 8, 10};
  Range t1{5.0, 60.0, 1.0}, t2{1.0, 20.0, 1.0};
  auto pts = pmax_vs_n(ns, 0.5, t1, t2, 2);
  REQUIRE(pts.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    auto ref = sweep_surface(xy(ns[i], 0.5), t1, t2);
    CHECK(pts[i].n_sites == ns[i]);
    CHECK(pts[i].p == doctest::Approx(ref.max_value));
    CHECK(pts[i].t1 == ref.t1);
    CHECK(pts[i].t2 == ref.t2);
  }
}

TEST_CASE("pmax_vs_a matches per-coupling sweeps") {
  const std::vector<double> as{0.3, 0.6};
  Range t1{5.0, 60.0, 1.0}, t2{1.0, 20.0, 1.0};
  auto rows = pmax_vs_a(10, as, t1, t2, 2);
  REQUIRE(rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    auto ref = sweep_surface(xy(10, as[i]), t1, t2);
    CHECK(rows[i].a == as[i]);
    CHECK(rows[i].p == doctest::Approx(ref.max_value));
  }
}
