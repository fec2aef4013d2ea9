#include <gtest/gtest.h>

#include <map>

#include "mmvrp/error.hpp"
#include "mmvrp/validate.hpp"
#include "test_support.hpp"

using namespace mmvrp;

namespace {

// Multiset comparison, written independently of validate_ids.
ValidationReport brute_force(std::size_t n, const Solution& s) {
  std::map<CustomerId, int> count;
  for (const auto& r : s.routes) {
    for (CustomerId id : r) ++count[id];
  }
  ValidationReport out;
  for (const auto& [id, c] : count) {
    const bool in_range = id >= 1 && id <= static_cast<CustomerId>(n);
    if (!in_range) out.extraneous.push_back(id);
    else if (c > 1) out.duplicated.push_back(id);
  }
  for (CustomerId id = 1; id <= static_cast<CustomerId>(n); ++id) {
    if (!count.count(id)) out.missing.push_back(id);
  }
  return out;
}

}  // namespace

TEST(ValidateIds, CorrectionExample) {
  const auto r = validate_ids(support::toy(), {{{1, 3, 7, 9, 9}, {2, 4, 6, 8, 10, 11}}});
  EXPECT_EQ(r.duplicated, (std::vector<CustomerId>{9}));
  EXPECT_EQ(r.missing, (std::vector<CustomerId>{5}));
  EXPECT_EQ(r.extraneous, (std::vector<CustomerId>{11}));
}

TEST(ValidateIds, PermutationIsClean) {
  EXPECT_TRUE(validate_ids(support::toy(), {{{10, 1}, {}, {2, 3, 4, 5, 6, 7, 8, 9}}}).empty());
}

TEST(ValidateIds, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  const Instance inst = support::named("A-n32-k5");
  for (int i = 0; i < 300; ++i) {
    Solution s = support::random_partition(rng, inst.size(), 5);
    for (int m = rng() % 4; m > 0; --m) {
      auto& r = s.routes[rng() % s.routes.size()];
      switch (rng() % 3) {
        case 0: if (!r.empty()) r.erase(r.begin() + rng() % r.size()); break;
        case 1: r.push_back(1 + rng() % inst.size()); break;
        default: r.push_back(static_cast<CustomerId>(rng() % 80) - 20); break;
      }
    }
    EXPECT_EQ(validate_ids(inst, s), brute_force(inst.size(), s));
  }
}

TEST(FixInstruction, CorrectionExample) {
  const Solution in{{{1, 3, 7, 9, 9}, {2, 4, 6, 8, 10, 11}}};
  const auto out = apply_fix_instruction(in, validate_ids(support::toy(), in));
  EXPECT_EQ(out, (Solution{{{1, 3, 7, 9, 5}, {2, 4, 6, 8, 10}}}));
}

TEST(FixInstruction, EmptyReportKeepsCandidate) {
  const Solution in{{{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}}};
  EXPECT_EQ(apply_fix_instruction(in, {}), in);
}

TEST(FixInstruction, AllMissing) {
  const Solution in{{{}}};
  const auto out = apply_fix_instruction(in, validate_ids(support::toy(), in));
  EXPECT_EQ(out, (Solution{{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}}));
}

TEST(FixInstruction, NoRoutesAtAll) {
  const Solution in;
  const auto out = apply_fix_instruction(in, validate_ids(support::toy(), in));
  ASSERT_EQ(out.routes.size(), 1u);
  EXPECT_TRUE(validate_ids(support::toy(), out).empty());
}

TEST(FixInstruction, AlwaysValid) {
  std::mt19937_64 rng(5);
  const Instance inst = support::toy();
  for (int i = 0; i < 200; ++i) {
    Solution s = support::random_partition(rng, inst.size(), 1 + rng() % 3);
    for (int m = rng() % 5; m > 0; --m) {
      auto& r = s.routes[rng() % s.routes.size()];
      if (rng() % 2 && !r.empty()) r.pop_back();
      else r.push_back(static_cast<CustomerId>(rng() % 14) - 1);
    }
    EXPECT_TRUE(validate_ids(inst, apply_fix_instruction(s, validate_ids(inst, s))).empty());
  }
}

TEST(Repair, FeasibleUnchanged) {
  const Instance inst = support::named("A-n45-k6");
  const Solution opt = support::named_solution("A-n45-k6");
  EXPECT_EQ(repair_capacity(inst, opt), opt);
}

TEST(Repair, FourHeavyCustomers) {
  const Instance inst =
      make_instance("heavy-n5-k3", {0, 0}, {{{10, 0}, 60}, {{0, 10}, 60}, {{-10, 0}, 60}, {{0, -10}, 60}}, 100, 3);
  const Solution out = repair_capacity(inst, {{{1, 2, 3, 4}}});
  EXPECT_GE(out.routes.size(), 3u);
  const auto f = check_feasibility(inst, out);
  EXPECT_TRUE(f.feasible());
}

TEST(Repair, Unservable) {
  const Instance inst = make_instance("big-n2-k1", {0, 0}, {{{1, 1}, 101}}, 100, 1);
  EXPECT_THROW(repair_capacity(inst, {{{1}}}), Unservable);
}

TEST(Repair, InvalidIds) {
  EXPECT_THROW(repair_capacity(support::toy(), {{{1, 1}}}), InvalidIds);
}

TEST(Repair, SoundAndIdempotent) {
  std::mt19937_64 rng(3);
  for (const char* name : {"P-n19-k2", "A-n32-k5", "E-n51-k5"}) {
    const Instance inst = support::named(name);
    for (int i = 0; i < 40; ++i) {
      const Solution s = support::random_partition(rng, inst.size(), 1 + rng() % 4);
      const Solution out = repair_capacity(inst, s);
      EXPECT_TRUE(check_feasibility(inst, out).feasible()) << name;
      EXPECT_EQ(repair_capacity(inst, out), out) << name;
    }
  }
}
