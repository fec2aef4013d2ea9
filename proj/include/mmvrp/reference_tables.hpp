#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace mmvrp::reference {

enum class Group { kSmall, kLarge, kSolved };

// Instance properties as published with the benchmark set. |V| counts the
// depot.
struct InstanceRow {
  std::string_view name;
  Group group;
  int vertices;
  int vehicles;
  std::int64_t capacity;
};

struct MethodResult {
  std::int64_t best_cost;
  std::int64_t average_cost;
  int gap_percent;  // as printed
};

struct ResultRow {
  std::string_view name;
  std::int64_t optimal;
  MethodResult text;    // MLLM-T
  MethodResult vision;  // MLLM-V
};

std::span<const InstanceRow> instance_table();
std::span<const ResultRow> result_table();

// The three instances whose solutions are shown to the model.
std::span<const std::string_view> solved_example_names();

const InstanceRow* find_instance_row(std::string_view name);
const ResultRow* find_result_row(std::string_view name);

}  // namespace mmvrp::reference
