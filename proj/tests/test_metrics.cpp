#include <doctest.h>

#include <string>
#include <vector>

#include "ssig/metrics.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ssig;

TEST_CASE("jaccard distance") {
  CHECK(jaccard_distance("BD", "BD") == 0.0);
  CHECK(jaccard_distance("B", "D") == 1.0);
  CHECK(jaccard_distance("BBD", "BD") == 0.0);  // set semantics
  CHECK(jaccard_distance("", "") == 0.0);
  CHECK(jaccard_distance("", "B") == 1.0);
  CHECK(jaccard_distance("BDG", "BD") == doctest::Approx(1.0 - 2.0 / 3.0));
}

TEST_CASE("histogram distance") {
  CHECK(histogram_distance("BBD", "BBD") == 0.0);
  CHECK(histogram_distance("BBD", "BD") == doctest::Approx(0.25));
  CHECK(histogram_distance("B", "D") == 1.0);
  CHECK(histogram_distance("", "") == 0.0);
  CHECK(histogram_distance("", "BD") == 1.0);
}

TEST_CASE("edit distance basics") {
  CHECK(edit_distance("BDG", "BDG") == 0.0);
  CHECK(edit_distance("BDG", "BG") == 1.0);
  CHECK(edit_distance("BD", "DB") == 2.0);  // unit weights forbid transposition
  CHECK(edit_distance("BDG", "") == 3.0);
  CHECK(edit_distance("", "BDG") == 3.0);
}

TEST_CASE("edit distance normalization") {
  CHECK(edit_distance_normalized("BDG", "BDG") == 0.0);
  CHECK(edit_distance_normalized("BDG", "") == 1.0);
  CHECK(edit_distance_normalized("BDG", "BG") == doctest::Approx(1.0 / 3.0));
  CHECK(edit_distance_normalized("", "") == 0.0);
  const EditWeights heavy{1.0, 1.0, 3.0};
  // substitution is capped by delete+insert, then scaled by the max weight
  CHECK(edit_distance("B", "D", heavy) == 2.0);
  CHECK(edit_distance_normalized("B", "D", heavy) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("edit distance equals the recursive oracle exhaustively") {
  // every pair over {B,D,G} with a combined length up to 8
  std::vector<std::string> pool{""};
  for (std::size_t start = 0, stop = 1, len = 1; len <= 8; ++len) {
    for (std::size_t i = start; i < stop; ++i) {
      for (char c : {'B', 'D', 'G'}) pool.push_back(pool[i] + c);
    }
    start = stop;
    stop = pool.size();
  }
  std::size_t checked = 0;
  for (const auto& x : pool) {
    for (const auto& y : pool) {
      if (x.size() + y.size() > 8) continue;
      CAPTURE(x);
      CAPTURE(y);
      REQUIRE(edit_distance(x, y) == oracle::edit_distance_recursive(x, y));
      ++checked;
    }
  }
  CHECK(checked > 80000);
}

TEST_CASE("edit distance equals the oracle on random longer pairs") {
  testgen::for_each_case(0xed17u, [](std::mt19937_64& gen, int) {
    const std::string x = testgen::random_symbols(gen, 8);
    const std::string y = testgen::random_symbols(gen, 8);
    CAPTURE(x);
    CAPTURE(y);
    CHECK(edit_distance(x, y) == oracle::edit_distance_recursive(x, y));
    // weighted variant agrees with the oracle too
    const EditWeights w{0.5 + rng::uniform01(gen), 0.5 + rng::uniform01(gen),
                        0.5 + rng::uniform01(gen)};
    CHECK(edit_distance(x, y, w) ==
          doctest::Approx(oracle::edit_distance_recursive(x, y, w))
              .epsilon(1e-12));
  });
  // a smaller sample of longer sequences (plain recursion gets expensive)
  testgen::for_each_case(
      0xed18u,
      [](std::mt19937_64& gen, int) {
        const std::string x = testgen::random_symbols(gen, 10);
        const std::string y = testgen::random_symbols(gen, 10);
        CHECK(edit_distance(x, y) == oracle::edit_distance_recursive(x, y));
      },
      40);
}

TEST_CASE("general dp and unit fast path agree") {
  testgen::for_each_case(0xfa57u, [](std::mt19937_64& gen, int) {
    const std::string x = testgen::random_symbols(gen, 12, "BDGHM");
    const std::string y = testgen::random_symbols(gen, 12, "BDGHM");
    EditWeights forced_general{1.0, 1.0, 1.0};
    // bypass the unit fast path by scaling all weights by 2 and halving
    const EditWeights doubled{2.0, 2.0, 2.0};
    CHECK(edit_distance(x, y, doubled) == 2.0 * edit_distance(x, y));
    CHECK(edit_distance(x, y, forced_general) == edit_distance(x, y));
  });
}

TEST_CASE("bit-parallel scanner equals the reference dp") {
  // random pairs, including lengths around the 64-symbol word boundary
  testgen::for_each_case(0xb0b0u, [](std::mt19937_64& gen, int) {
    const std::size_t max_len = 2 + rng::uniform_below(gen, 70);
    const std::string x = testgen::random_symbols(gen, max_len, "BDGH");
    const std::string y = testgen::random_symbols(gen, 70, "BDGH");
    const UnitEditScanner scanner(as_symbols(x));
    CAPTURE(x);
    CAPTURE(y);
    CHECK(scanner.distance(as_symbols(y)) ==
          static_cast<int>(edit_distance(x, y)));
  });
  // exhaustive over short pairs
  std::vector<std::string> pool{""};
  for (std::size_t start = 0, stop = 1, len = 1; len <= 4; ++len) {
    for (std::size_t i = start; i < stop; ++i) {
      for (char c : {'B', 'D', 'G'}) pool.push_back(pool[i] + c);
    }
    start = stop;
    stop = pool.size();
  }
  for (const auto& x : pool) {
    const UnitEditScanner scanner(as_symbols(x));
    for (const auto& y : pool) {
      REQUIRE(scanner.distance(as_symbols(y)) ==
              static_cast<int>(edit_distance(x, y)));
    }
  }
}

TEST_CASE("all metrics are symmetric, zero on self, and bounded") {
  testgen::for_each_case(0x5e1fu, [](std::mt19937_64& gen, int) {
    const std::string x = testgen::random_symbols(gen, 10, "BDGHK");
    const std::string y = testgen::random_symbols(gen, 10, "BDGHK");
    using SetMetric = double (*)(SymbolSpan, SymbolSpan);
    for (SetMetric metric : {static_cast<SetMetric>(jaccard_distance),
                             static_cast<SetMetric>(histogram_distance)}) {
      const double xy = metric(as_symbols(x), as_symbols(y));
      CHECK(xy == metric(as_symbols(y), as_symbols(x)));
      CHECK(xy >= 0.0);
      CHECK(xy <= 1.0);
      CHECK(metric(as_symbols(x), as_symbols(x)) == 0.0);
    }
    const double exy = edit_distance_normalized(x, y);
    CHECK(exy == edit_distance_normalized(y, x));
    CHECK(exy >= 0.0);
    CHECK(exy <= 1.0);
    CHECK(edit_distance_normalized(x, x) == 0.0);
  });
}

TEST_CASE("unnormalized edit distance satisfies the triangle inequality") {
  testgen::for_each_case(0x7517u, [](std::mt19937_64& gen, int) {
    const std::string a = testgen::random_symbols(gen, 8);
    const std::string b = testgen::random_symbols(gen, 8);
    const std::string c = testgen::random_symbols(gen, 8);
    CHECK(edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c));
  });
}

TEST_CASE("metric strictness ordering on permutations") {
  // permutations collapse under jaccard and histogram but not under edit
  CHECK(jaccard_distance("BD", "DB") == 0.0);
  CHECK(histogram_distance("BD", "DB") == 0.0);
  CHECK(edit_distance("BD", "DB") > 0.0);
  testgen::for_each_case(0x9e9eu, [](std::mt19937_64& gen, int) {
    std::string x = testgen::random_symbols(gen, 10, "BDGH");
    std::string y = x;
    for (std::size_t i = y.size(); i > 1; --i) {
      std::swap(y[i - 1], y[rng::uniform_below(gen, i)]);
    }
    CHECK(jaccard_distance(x, y) == 0.0);
    CHECK(histogram_distance(x, y) == 0.0);
  });
}

TEST_CASE("part distance dispatch") {
  Signature a{"BBD", {0, 4, 9}};
  Signature b{"BD", {4, 0}};
  const EditWeights w{};
  CHECK(part_distance(MetricKind::edit, a, a, SignaturePart::type, w, 16) == 0.0);
  CHECK(part_distance(MetricKind::edit, a, a, SignaturePart::angle, w, 16) == 0.0);
  CHECK(part_distance(MetricKind::jaccard, Signature{"BD", {0, 4}}, b,
                      SignaturePart::angle, w, 16) == 0.0);
  CHECK(part_distance(MetricKind::histogram, a, b, SignaturePart::type, w, 16) ==
        doctest::Approx(0.25));
  // angle bins outside [0, Q) signal a quantization mismatch
  Signature bad{"B", {20}};
  CHECK_THROWS_AS(
      part_distance(MetricKind::edit, a, bad, SignaturePart::angle, w, 16),
      Error);
  CHECK_NOTHROW(
      part_distance(MetricKind::edit, a, bad, SignaturePart::angle, w, 32));
}

TEST_CASE("empty versus nonempty conventions") {
  const Signature empty{};
  const Signature one{"B", {3}};
  const EditWeights w{};
  for (auto kind : {MetricKind::jaccard, MetricKind::histogram,
                    MetricKind::edit}) {
    CHECK(part_distance(kind, empty, empty, SignaturePart::type, w, 16) == 0.0);
    CHECK(part_distance(kind, empty, empty, SignaturePart::angle, w, 16) == 0.0);
    CHECK(part_distance(kind, empty, one, SignaturePart::type, w, 16) == 1.0);
    CHECK(part_distance(kind, empty, one, SignaturePart::angle, w, 16) == 1.0);
  }
}
