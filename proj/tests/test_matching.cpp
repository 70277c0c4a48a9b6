#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "xyf/matching.hpp"
#include "xyf/noise.hpp"

using namespace xyf;

namespace {
constexpr int64_t kForbidden = 1ll << 40;
}

TEST_CASE("two nodes joined by one edge match at weight 1") {
  std::vector<std::vector<int64_t>> w(2, std::vector<int64_t>(2, kForbidden));
  w[0][1] = w[1][0] = 1;
  auto mate = min_weight_perfect_matching(2, w, kForbidden);
  CHECK(mate[0] == 1);
  CHECK(mate[1] == 0);
}

TEST_CASE("blossom equals brute force on random dense graphs") {
  Rng rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    int n = 2 * (1 + (int)rng.below(5));  // 2..10
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, kForbidden));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) w[i][j] = w[j][i] = 1 + (int)rng.below(30);
    auto mate = min_weight_perfect_matching(n, w, kForbidden);
    int64_t total = 0;
    for (int i = 0; i < n; ++i) {
      REQUIRE(mate[i] >= 0);
      CHECK(mate[mate[i]] == i);
      if (mate[i] > i) total += w[i][mate[i]];
    }
    CHECK(total == brute_force_min_matching(n, w, kForbidden));
  }
}

TEST_CASE("blossom equals brute force on sparse graphs with forbidden edges") {
  Rng rng(99);
  int solved = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int n = 2 * (2 + (int)rng.below(4));  // 4..10
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, kForbidden));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.below(3) != 0) w[i][j] = w[j][i] = 1 + (int)rng.below(12);
    int64_t want = brute_force_min_matching(n, w, kForbidden);
    if (want < 0 || want >= kForbidden) {
      CHECK_THROWS(min_weight_perfect_matching(n, w, kForbidden));
      continue;
    }
    auto mate = min_weight_perfect_matching(n, w, kForbidden);
    int64_t total = 0;
    for (int i = 0; i < n; ++i)
      if (mate[i] > i) total += w[i][mate[i]];
    CHECK(total == want);
    ++solved;
  }
  CHECK(solved > 100);
}

TEST_CASE("zero-weight virtual pairs are free") {
  // Typical decoder structure: fired nodes 0..2, virtual copies 3..5.
  int n = 6;
  std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, kForbidden));
  auto setw = [&](int a, int b, int64_t v) { w[a][b] = w[b][a] = v; };
  setw(0, 1, 2);
  setw(0, 2, 5);
  setw(1, 2, 5);
  setw(0, 3, 4);
  setw(1, 4, 4);
  setw(2, 5, 1);
  setw(3, 4, 0);
  setw(3, 5, 0);
  setw(4, 5, 0);
  auto mate = min_weight_perfect_matching(n, w, kForbidden);
  // Optimal: (0,1) at 2, (2,5) at 1, (3,4) free = 3.
  CHECK(mate[0] == 1);
  CHECK(mate[2] == 5);
  CHECK(mate[3] == 4);
}
