#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mmvrp/instance.hpp"

namespace mmvrp {

// TSPLIB / CVRPLIB CVRP file with EDGE_WEIGHT_TYPE EUC_2D. The depot is
// removed from the node list and the remaining nodes become customers
// 1..n in file order. Throws ParseError.
Instance parse_instance(std::string_view text);

// Canonical .vrp text; parse_instance(format_instance(i)) == i for EUC_2D
// instances whose name either lacks a "-kK" suffix or agrees with fleet_size.
std::string format_instance(const Instance& instance);

struct ParsedSolution {
  Solution solution;
  std::optional<double> declared_cost;
};

// CVRPLIB .sol: "Route #i: id id ..." lines then "Cost c". IDs are customer
// IDs (depot omitted). Unrecognised lines are skipped. Throws ParseError.
ParsedSolution parse_solution(std::string_view text);
std::string format_solution(const Solution& solution,
                            std::optional<double> cost = std::nullopt);

// Stable 16-hex-digit content hash; order of customers is significant.
std::string instance_fingerprint(const Instance& instance);

std::string read_text_file(const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);
ParsedSolution load_solution(const std::filesystem::path& path);

}  // namespace mmvrp
