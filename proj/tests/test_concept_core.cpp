#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"

using namespace mgoig;
using mgoig::testing::random_class;
using mgoig::testing::random_family;
using mgoig::testing::vc_oracle;

namespace {

ConceptClass cls(int m, std::vector<std::string> bits) { return make_explicit(Domain(m), bits); }

}  // namespace

TEST_CASE("vc dimension on pinned classes") {
  CHECK(vc_dimension(cls(3, {"000"})) == 0);
  CHECK(vc_dimension(make_full_cube(Domain(3))) == 3);
  ConceptClass thresholds = make_thresholds(Domain(3));
  CHECK(thresholds.size() == 4);
  CHECK(vc_dimension(thresholds) == vc_oracle(thresholds, Domain(3).full_mask()));
  CHECK(vc_dimension(thresholds) == 1);
}

TEST_CASE("vc dimension equals the exhaustive oracle on random classes") {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 2 + static_cast<int>(rng.below(4));
    ConceptClass c = random_class(rng, m, 12);
    CHECK(vc_dimension(c) == vc_oracle(c, c.domain().full_mask()));
  }
}

TEST_CASE("restricted vc dimension") {
  ConceptClass thresholds = make_thresholds(Domain(3));
  CHECK(vc_restricted(thresholds, 1u << 1) == 1);
  ConceptClass two = cls(3, {"000", "111"});
  CHECK(vc_restricted(two, 0b011) == 1);
  // never more points than the mask holds
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    int m = 2 + static_cast<int>(rng.below(4));
    ConceptClass c = random_class(rng, m, 10);
    uint32_t g = static_cast<uint32_t>(rng.below(1ull << m));
    if (g == 0) g = 1;
    CHECK(vc_restricted(c, g) <= popcount32(g));
    CHECK(vc_restricted(c, g) == vc_oracle(c, g));
  }
}

TEST_CASE("restricted vc is monotone and matches the full mask") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    int m = 2 + static_cast<int>(rng.below(3));
    ConceptClass c = random_class(rng, m, 10);
    CHECK(vc_restricted(c, c.domain().full_mask()) == vc_dimension(c));
    uint32_t small = 1u + static_cast<uint32_t>(rng.below((1ull << m) - 1));
    uint32_t big = small | static_cast<uint32_t>(rng.below(1ull << m));
    CHECK(vc_restricted(c, small) <= vc_restricted(c, big));
  }
}

TEST_CASE("group-realizable enumeration on the two-point class") {
  ConceptClass h = cls(2, {"00", "11"});
  GroupFamily full(Domain(2), {0b11});
  ConceptClass collapsed = enumerate_group_realizable(h, full);
  CHECK(collapsed.members() == h.members());

  GroupFamily singles(Domain(2), {0b01, 0b10});
  ConceptClass all = enumerate_group_realizable(h, singles);
  CHECK(all.size() == 4);
}

TEST_CASE("singleton groups with a separating class realize every labeling") {
  ConceptClass h = make_full_cube(Domain(3));
  GroupFamily singles(Domain(3), {0b001, 0b010, 0b100});
  CHECK(enumerate_group_realizable(h, singles).size() == 8);
  // even a small separating class suffices
  ConceptClass two = cls(3, {"000", "111"});
  CHECK(enumerate_group_realizable(two, singles).size() == 8);
}

TEST_CASE("group-realizable enumeration properties") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    int m = 2 + static_cast<int>(rng.below(3));
    ConceptClass h = random_class(rng, m, 8);
    GroupFamily g = random_family(rng, m);
    ConceptClass c = enumerate_group_realizable(h, g);

    // contains the class itself
    for (uint32_t member : h.members()) CHECK(c.contains(member));

    // full-domain mask collapses to the class
    bool has_full = std::find(g.masks().begin(), g.masks().end(), Domain(m).full_mask()) !=
                    g.masks().end();
    if (has_full) CHECK(c.members() == h.members());

    // enlarging the class never shrinks the output
    std::vector<uint32_t> bigger = h.members();
    bigger.push_back(static_cast<uint32_t>(rng.below(1ull << m)));
    ConceptClass c2 = enumerate_group_realizable(ConceptClass(Domain(m), bigger), g);
    CHECK(c2.size() >= c.size());

    // enlarging the family never grows the output
    std::vector<uint32_t> more = g.masks();
    uint32_t extra = 1u + static_cast<uint32_t>(rng.below((1ull << m) - 1));
    more.push_back(extra);
    ConceptClass c3 = enumerate_group_realizable(h, GroupFamily(Domain(m), more));
    CHECK(c3.size() <= c.size());
  }
}

TEST_CASE("enumeration rejects oversized domains") {
  CHECK_THROWS_AS(enumerate_group_realizable(cls(2, {"00"}), GroupFamily(Domain(2), {0b11}), 1),
                  Error);
}

TEST_CASE("projection") {
  ConceptClass c = cls(3, {"000", "001", "011"});
  std::vector<int> all{0, 1, 2};
  CHECK(project_class(c, all).members() == c.members());
  ConceptClass last = project_class(c, {2});
  CHECK(last.size() == 2);
  ConceptClass thresholds5 = make_thresholds(Domain(5));
  CHECK(project_class(thresholds5, {0, 2, 4}).size() == 4);
  // projected families drop empty masks and deduplicate
  GroupFamily g(Domain(3), {0b001, 0b100, 0b101});
  std::vector<uint32_t> proj = project_masks(g, {0});
  CHECK(proj == std::vector<uint32_t>{1u});
}

TEST_CASE("sauer bound on random classes") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    int m = 3 + static_cast<int>(rng.below(3));
    ConceptClass c = random_class(rng, m, 20);
    int d = vc_dimension(c);
    int keep = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(m)));
    std::vector<int> pts;
    for (int i = 0; i < keep; ++i) pts.push_back(i);
    size_t projected = project_class(c, pts).size();
    // sum of binomials C(keep, i) for i <= d
    long long bound = 0, binom = 1;
    for (int i = 0; i <= d && i <= keep; ++i) {
      bound += binom;
      binom = binom * (keep - i) / (i + 1);
    }
    CHECK(projected <= static_cast<size_t>(bound));
  }
}

TEST_CASE("labeled samples") {
  LabeledSample s{{{0, 1}, {2, 0}, {0, 1}}};
  CHECK(s.duplicates_consistent());
  CHECK(s.distinct_points() == std::vector<int>{0, 2});
  LabeledSample bad{{{0, 1}, {0, 0}}};
  CHECK_FALSE(bad.duplicates_consistent());
  CHECK_THROWS(s.validate_against(Domain(2)));
  CHECK_NOTHROW(s.validate_against(Domain(3)));
}

TEST_CASE("generators have the documented shapes") {
  CHECK(make_thresholds(Domain(4)).size() == 5);
  CHECK(make_intervals(Domain(3)).size() == 7);  // 6 runs + empty
  CHECK(make_singletons(Domain(4)).size() == 4);
  CHECK(make_full_cube(Domain(4)).size() == 16);
  CHECK_THROWS_AS(make_full_cube(Domain(21)), Error);
}
