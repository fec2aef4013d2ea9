#include <gtest/gtest.h>

#include "mmvrp/error.hpp"
#include "mmvrp/tsplib.hpp"
#include "test_support.hpp"

using namespace mmvrp;

namespace {

const char* kTiny = R"(NAME : tiny-n4-k2
COMMENT : test
TYPE : CVRP
DIMENSION : 4
EDGE_WEIGHT_TYPE : EUC_2D
CAPACITY : 10
NODE_COORD_SECTION
 1 0 0
 2 3 4
 3 6 0
 4 0 5
DEMAND_SECTION
1 0
2 4
3 5
4 6
DEPOT_SECTION
 1
 -1
EOF
)";

ParseError::Kind kind_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no ParseError";
  return ParseError::Kind::kNoRoutes;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST(ParseInstance, Tiny) {
  const Instance inst = parse_instance(kTiny);
  EXPECT_EQ(inst.name, "tiny-n4-k2");
  EXPECT_EQ(inst.size(), 3u);
  EXPECT_EQ(inst.capacity, 10);
  EXPECT_EQ(inst.fleet_size, 2);
  EXPECT_EQ(inst.depot, (Point{0, 0}));
  EXPECT_EQ(inst.customer(1).pos, (Point{3, 4}));
  EXPECT_EQ(inst.customer(3).demand, 6);
}

TEST(ParseInstance, TableOneFiles) {
  const Instance a = support::named("A-n32-k5");
  EXPECT_EQ(a.capacity, 100);
  EXPECT_EQ(a.fleet_size, 5);
  EXPECT_EQ(a.size(), 31u);
  const Instance p = support::named("P-n19-k2");
  EXPECT_EQ(p.capacity, 160);
  EXPECT_EQ(p.fleet_size, 2);
}

TEST(ParseInstance, FleetFromCommentWhenNameHasNoSuffix) {
  const Instance inst =
      parse_instance(replace(replace(kTiny, "tiny-n4-k2", "tiny"), "COMMENT : test", "COMMENT : (trucks: 7)"));
  EXPECT_EQ(inst.fleet_size, 7);
}

TEST(ParseInstance, DimensionMismatch) {
  EXPECT_EQ(kind_of(replace(kTiny, "DIMENSION : 4", "DIMENSION : 5")),
            ParseError::Kind::kDimensionMismatch);
}

TEST(ParseInstance, ErrorKinds) {
  EXPECT_EQ(kind_of(replace(kTiny, "EUC_2D", "GEO")), ParseError::Kind::kUnsupportedEdgeWeightType);
  EXPECT_EQ(kind_of(replace(kTiny, "CAPACITY : 10\n", "")), ParseError::Kind::kMalformedHeader);
  EXPECT_EQ(kind_of(replace(kTiny, "1 0\n2 4", "1 3\n2 4")), ParseError::Kind::kNonZeroDepotDemand);
  EXPECT_EQ(kind_of(replace(kTiny, " 3 6 0", " 3 6 zero")), ParseError::Kind::kMalformedRow);
  const std::string no_demand = std::string(kTiny).substr(0, std::string(kTiny).find("DEMAND_SECTION"));
  EXPECT_EQ(kind_of(no_demand), ParseError::Kind::kMissingSection);
}

TEST(ParseInstance, LineNumberOfBadRow) {
  try {
    parse_instance(replace(kTiny, " 3 6 0", " 3 6 zero"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 10);
  }
}

TEST(ParseInstance, RoundTrip) {
  for (const char* name : {"P-n19-k2", "X-n143-k7", "E-n101-k14"}) {
    const Instance inst = support::named(name);
    EXPECT_EQ(parse_instance(format_instance(inst)), inst) << name;
  }
}

TEST(ParseSolution, Basic) {
  const auto s = parse_solution("Route #1: 1 2\nRoute #2: 3\nCost 42\n");
  EXPECT_EQ(s.solution.routes, (std::vector<Route>{{1, 2}, {3}}));
  ASSERT_TRUE(s.declared_cost);
  EXPECT_EQ(*s.declared_cost, 42);
}

TEST(ParseSolution, PublishedFile) {
  EXPECT_EQ(support::named_solution("A-n45-k6").routes.size(), 6u);
}

TEST(ParseSolution, EmptyTextHasNoRoutes) {
  try {
    parse_solution("");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::kNoRoutes);
  }
}

TEST(ParseSolution, RoundTrip) {
  const Solution s{{{4, 2}, {1, 3}}};
  const auto back = parse_solution(format_solution(s, 17));
  EXPECT_EQ(back.solution, s);
  EXPECT_EQ(back.declared_cost, 17);
}

TEST(Fingerprint, StableAndSensitive) {
  const Instance a = parse_instance(kTiny);
  EXPECT_EQ(instance_fingerprint(a), instance_fingerprint(parse_instance(kTiny)));
  EXPECT_EQ(instance_fingerprint(a).size(), 16u);

  const Instance demand = parse_instance(replace(kTiny, "2 4\n", "2 3\n"));
  EXPECT_NE(instance_fingerprint(a), instance_fingerprint(demand));

  const Instance reordered = parse_instance(replace(replace(replace(kTiny, " 2 3 4", " 2 6 0"), " 3 6 0", " 3 3 4"),
                                                    "2 4\n3 5", "2 5\n3 4"));
  EXPECT_NE(instance_fingerprint(a), instance_fingerprint(reordered));
}
