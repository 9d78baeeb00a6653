#include "doctest.h"
#include "sscfl/backend.hpp"
#include "sscfl/model.hpp"
#include "test_helpers.hpp"

using namespace sscfl;

TEST_CASE("full binary model of the 1x1 instance") {
  const auto inst = testing::tiny_instance();
  const ModelSpec bip = build_full(inst, /*relaxed=*/false);
  const MipResult r = solve_mip(bip, Budget::unlimited());
  REQUIRE(r.status == MipStatus::Optimal);
  CHECK(r.incumbent->objective == doctest::Approx(13.0).epsilon(1e-9));
  CHECK(r.incumbent->open[0]);
  CHECK(r.incumbent->assign[0] == 0);
}

TEST_CASE("relaxation gap of the 1x1 instance and its closing pair") {
  const auto inst = testing::tiny_instance();
  const ModelSpec lp = build_full(inst, /*relaxed=*/true);
  const LpResult base = solve_lp(lp);
  REQUIRE(base.status == LpStatus::Optimal);
  CHECK(base.objective == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(base.y[0] == doctest::Approx(0.4).epsilon(1e-9));

  const LpResult strengthened = solve_lp(lp.with_vi_pairs({{0, 0}}));
  REQUIRE(strengthened.status == LpStatus::Optimal);
  CHECK(strengthened.objective == doctest::Approx(13.0).epsilon(1e-9));
}

TEST_CASE("vi pairs: duplicates ignored, bounds checked, empty set no-op") {
  const auto inst = testing::generated(5, 8, 2.0, 3);
  const ModelSpec lp = build_full(inst, /*relaxed=*/true);
  const ModelSpec once = lp.with_vi_pairs({{1, 2}});
  const ModelSpec twice = once.with_vi_pairs({{1, 2}, {1, 2}});
  CHECK(once.num_vi_pairs() == 1);
  CHECK(twice.num_vi_pairs() == 1);
  CHECK(lp.with_vi_pairs({}).num_vi_pairs() == 0);
  CHECK_THROWS_AS(lp.with_vi_pairs({{5, 0}}), DataError);
  CHECK_THROWS_AS(lp.with_vi_pairs({{0, 8}}), DataError);
}

TEST_CASE("incremental strengthening matches the one-shot formulation") {
  const auto inst = testing::generated(5, 8, 2.0, 11);
  const ModelSpec lp = build_full(inst, /*relaxed=*/true);
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 8; ++j) all.push_back({i, j});
  const LpResult incremental = solve_lp(lp.with_vi_pairs(all));
  const LpResult one_shot = solve_lp(lp.with_all_vi_pairs());
  REQUIRE(incremental.status == LpStatus::Optimal);
  REQUIRE(one_shot.status == LpStatus::Optimal);
  CHECK(incremental.objective ==
        doctest::Approx(one_shot.objective).epsilon(1e-9));
}

TEST_CASE("min-open constraint") {
  const auto inst = testing::generated(5, 8, 2.0, 17);
  const ModelSpec lp = build_full(inst, /*relaxed=*/true);
  const LpResult base = solve_lp(lp);
  REQUIRE(base.status == LpStatus::Optimal);

  SUBCASE("a zero bound changes nothing") {
    const LpResult r = solve_lp(lp.with_min_open(0.0));
    CHECK(r.objective == doctest::Approx(base.objective).epsilon(1e-9));
  }
  SUBCASE("a full bound opens everything") {
    const LpResult r = solve_lp(lp.with_min_open(5.0));
    REQUIRE(r.status == LpStatus::Optimal);
    for (int i = 0; i < 5; ++i) CHECK(r.y[i] == doctest::Approx(1.0).epsilon(1e-7));
  }
  SUBCASE("an interior bound is honored") {
    const LpResult r = solve_lp(lp.with_min_open(3.0));
    REQUIRE(r.status == LpStatus::Optimal);
    double open_sum = 0.0;
    for (int i = 0; i < 5; ++i) open_sum += r.y[i];
    CHECK(open_sum >= 3.0 - 1e-7);
  }
  SUBCASE("out-of-range bounds are rejected") {
    CHECK_THROWS_AS(lp.with_min_open(-1.0), DataError);
    CHECK_THROWS_AS(lp.with_min_open(6.0), DataError);
  }
}

TEST_CASE("restricted models") {
  const auto inst = testing::generated(6, 10, 2.0, 23);
  const ModelSpec bip = build_full(inst, /*relaxed=*/false);

  std::vector<int> all_y;
  std::vector<std::pair<int, int>> all_x;
  for (int i = 0; i < 6; ++i) {
    all_y.push_back(i);
    for (int j = 0; j < 10; ++j) all_x.push_back({i, j});
  }

  const MipResult full = solve_mip(bip, Budget::unlimited());
  REQUIRE(full.status == MipStatus::Optimal);

  SUBCASE("keeping everything is the identity") {
    const MipResult r = solve_mip(bip.restricted(all_y, all_x),
                                  Budget::unlimited());
    REQUIRE(r.status == MipStatus::Optimal);
    CHECK(r.incumbent->objective ==
          doctest::Approx(full.incumbent->objective).epsilon(1e-9));
  }

  SUBCASE("an empty keep set is infeasible") {
    const MipResult r = solve_mip(bip.restricted({}, {}), Budget::unlimited());
    CHECK(r.status == MipStatus::Infeasible);
  }

  SUBCASE("keeping the optimal support reproduces the optimum") {
    std::vector<int> keep_y;
    std::vector<std::pair<int, int>> keep_x;
    for (int i = 0; i < 6; ++i)
      if (full.incumbent->open[i]) keep_y.push_back(i);
    for (int j = 0; j < 10; ++j) keep_x.push_back({full.incumbent->assign[j], j});
    const MipResult r =
        solve_mip(bip.restricted(keep_y, keep_x), Budget::unlimited());
    REQUIRE(r.status == MipStatus::Optimal);
    CHECK(r.incumbent->objective ==
          doctest::Approx(full.incumbent->objective).epsilon(1e-9));
  }

  SUBCASE("restricted model size counts only kept variables") {
    const ModelSpec r = bip.restricted({0, 1}, {{0, 0}, {1, 1}, {2, 2}});
    CHECK(r.num_free_variables() == 2 + 2);  // pair (2,2) dies with y2
  }
}

TEST_CASE("cutoff semantics") {
  const auto inst = testing::tiny_instance();
  const ModelSpec bip = build_full(inst, /*relaxed=*/false);

  SUBCASE("a cutoff below the optimum is infeasible") {
    const MipResult r = solve_mip(bip.with_cutoff(12.0), Budget::unlimited());
    CHECK(r.status == MipStatus::Infeasible);
  }
  SUBCASE("a cutoff at the optimum discards the equal solution") {
    const MipResult r = solve_mip(bip.with_cutoff(13.0), Budget::unlimited());
    CHECK(r.status == MipStatus::Infeasible);
  }
  SUBCASE("an infinite cutoff is a sentinel no-op") {
    const MipResult r = solve_mip(
        bip.with_cutoff(std::numeric_limits<double>::infinity()),
        Budget::unlimited());
    REQUIRE(r.status == MipStatus::Optimal);
    CHECK(r.incumbent->objective == doctest::Approx(13.0));
  }
  SUBCASE("a cutoff above the optimum keeps it reachable") {
    const MipResult r = solve_mip(bip.with_cutoff(14.0), Budget::unlimited());
    REQUIRE(r.status == MipStatus::Optimal);
    CHECK(r.incumbent->objective == doctest::Approx(13.0));
  }
}

TEST_CASE("bucket cover forces a singleton open") {
  const auto inst = testing::generated(4, 6, 3.0, 29);
  const ModelSpec bip = build_full(inst, /*relaxed=*/false);
  const MipResult r = solve_mip(bip.with_bucket_cover({2}), Budget::unlimited());
  REQUIRE(r.status == MipStatus::Optimal);
  CHECK(r.incumbent->open[2]);
  CHECK_THROWS_AS(bip.with_bucket_cover({}), DataError);
}

TEST_CASE("side constraints never lower the relaxation value; strengthening "
          "never changes the binary optimum") {
  const auto inst = testing::generated(5, 8, 2.0, 31);
  const ModelSpec lp = build_full(inst, /*relaxed=*/true);
  const LpResult base = solve_lp(lp);
  REQUIRE(base.status == LpStatus::Optimal);

  const LpResult with_vi = solve_lp(lp.with_all_vi_pairs());
  CHECK(with_vi.objective >= base.objective - 1e-7);

  const LpResult with_min = solve_lp(lp.with_min_open(2.5));
  CHECK(with_min.objective >= base.objective - 1e-7);

  const LpResult with_cover = solve_lp(lp.with_bucket_cover({0, 1}));
  CHECK(with_cover.objective >= base.objective - 1e-7);

  const ModelSpec bip = build_full(inst, /*relaxed=*/false);
  const MipResult plain = solve_mip(bip, Budget::unlimited());
  const MipResult strong = solve_mip(bip.with_all_vi_pairs(), Budget::unlimited());
  REQUIRE(plain.status == MipStatus::Optimal);
  REQUIRE(strong.status == MipStatus::Optimal);
  CHECK(plain.incumbent->objective ==
        doctest::Approx(strong.incumbent->objective).epsilon(1e-9));
}

TEST_CASE("lp text export names the pieces") {
  const auto inst = testing::tiny_instance();
  const std::string text =
      build_full(inst, false).with_vi_pairs({{0, 0}}).to_lp_text();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("assign_1") != std::string::npos);
  CHECK(text.find("cap_1") != std::string::npos);
  CHECK(text.find("vi_1_1") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
}
