#include "mmvrp/reference_tables.hpp"

#include <array>

namespace mmvrp::reference {

namespace {

constexpr std::array kInstances = {
    InstanceRow{"P-n19-k2", Group::kSmall, 18, 2, 160},
    InstanceRow{"A-n32-k5", Group::kSmall, 32, 5, 100},
    InstanceRow{"A-n36-k5", Group::kSmall, 36, 5, 100},
    InstanceRow{"A-n38-k5", Group::kSmall, 38, 5, 100},
    InstanceRow{"A-n39-k5", Group::kSmall, 39, 5, 100},
    InstanceRow{"A-n44-k6", Group::kSmall, 44, 6, 100},
    InstanceRow{"A-n46-k7", Group::kSmall, 46, 7, 100},
    InstanceRow{"E-n51-k5", Group::kLarge, 51, 5, 160},
    InstanceRow{"A-n65-k9", Group::kLarge, 65, 9, 100},
    InstanceRow{"A-n69-k9", Group::kLarge, 69, 9, 100},
    InstanceRow{"P-n55-k10", Group::kLarge, 55, 10, 115},
    InstanceRow{"P-n65-k10", Group::kLarge, 65, 10, 130},
    InstanceRow{"P-n70-k10", Group::kLarge, 70, 10, 135},
    InstanceRow{"X-n139-k10", Group::kLarge, 139, 10, 106},
    InstanceRow{"X-n143-k7", Group::kLarge, 143, 7, 1190},
    InstanceRow{"X-n153-k22", Group::kLarge, 153, 23, 144},
    InstanceRow{"X-n162-k11", Group::kLarge, 162, 11, 1174},
    InstanceRow{"A-n45-k6", Group::kSolved, 45, 6, 100},
    InstanceRow{"P-n60-k10", Group::kSolved, 60, 10, 120},
    InstanceRow{"E-n101-k14", Group::kSolved, 101, 14, 112},
};

constexpr std::array kResults = {
    ResultRow{"P-n19-k2", 213, {263, 292, 31}, {235, 260, 22}},
    ResultRow{"A-n32-k5", 788, {1073, 1161, 47}, {1040, 1141, 45}},
    ResultRow{"A-n36-k5", 802, {1068, 1210, 51}, {1147, 1229, 53}},
    ResultRow{"A-n38-k5", 734, {981, 1132, 54}, {982, 1040, 42}},
    ResultRow{"A-n39-k5", 829, {1222, 1366, 65}, {1112, 1300, 57}},
    ResultRow{"A-n44-k6", 939, {1449, 1568, 67}, {1319, 1445, 54}},
    ResultRow{"A-n46-k7", 918, {1388, 1566, 70}, {1430, 1565, 70}},
    ResultRow{"A-n65-k9", 1182, {1979, 2143, 81}, {1848, 2124, 80}},
    ResultRow{"A-n69-k9", 1166, {2062, 2161, 85}, {1807, 2104, 80}},
    ResultRow{"E-n51-k5", 525, {897, 1022, 95}, {825, 881, 68}},
    ResultRow{"P-n55-k10", 698, {991, 1045, 50}, {892, 985, 41}},
    ResultRow{"P-n65-k10", 797, {1205, 1269, 59}, {1098, 1223, 54}},
    ResultRow{"P-n70-k10", 830, {1417, 1558, 88}, {1218, 1299, 56}},
    ResultRow{"X-n139-k10", 13596, {30763, 42475, 212}, {28568, 33163, 144}},
    ResultRow{"X-n143-k7", 15697, {46831, 51238, 226}, {38493, 52339, 233}},
    ResultRow{"X-n153-k22", 21227, {44070, 53435, 152}, {39955, 49732, 134}},
    ResultRow{"X-n162-k11", 14139, {33193, 42320, 199}, {31518, 38227, 170}},
};

constexpr std::array<std::string_view, 3> kSolved = {"A-n45-k6", "P-n60-k10", "E-n101-k14"};

}  // namespace

std::span<const InstanceRow> instance_table() { return kInstances; }
std::span<const ResultRow> result_table() { return kResults; }
std::span<const std::string_view> solved_example_names() { return kSolved; }

const InstanceRow* find_instance_row(std::string_view name) {
  for (const auto& r : kInstances) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const ResultRow* find_result_row(std::string_view name) {
  for (const auto& r : kResults) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace mmvrp::reference
