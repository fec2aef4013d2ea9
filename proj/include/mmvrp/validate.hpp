#pragma once

#include <vector>

#include "mmvrp/instance.hpp"

namespace mmvrp {

// ID-level problems of a candidate solution. All lists are sorted ascending
// and hold each ID once. An out-of-range ID is reported only as extraneous.
struct ValidationReport {
  std::vector<CustomerId> duplicated;
  std::vector<CustomerId> missing;
  std::vector<CustomerId> extraneous;

  bool empty() const { return duplicated.empty() && missing.empty() && extraneous.empty(); }
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

ValidationReport validate_ids(const Instance& instance, const Solution& candidate);

// Deterministic version of the instruction given to the model: keep the first
// occurrence of each duplicated ID, drop extraneous IDs, then append each
// missing ID (ascending) to the route with the fewest customers, lowest index
// on ties. Opens one route if the candidate has none.
Solution apply_fix_instruction(const Solution& candidate, const ValidationReport& report);

// Restores capacity feasibility. Overloaded routes shed customers from the
// tail until they fit; each shed customer is then placed at its cheapest
// insertion point among routes with enough residual capacity (ties: lowest
// route index, then position), or in a new route when none fits. Feasible
// input is returned unchanged.
// Throws InvalidIds if validate_ids(candidate) is not empty, Unservable if a
// single demand exceeds the capacity.
Solution repair_capacity(const Instance& instance, const Solution& candidate);

}  // namespace mmvrp
