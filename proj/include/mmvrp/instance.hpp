#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mmvrp {

// Customer IDs are 1-based; the depot never appears in a route. IDs coming
// back from a model can be anything, hence the wide signed type.
using CustomerId = std::int64_t;
using Route = std::vector<CustomerId>;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Nearest-integer Euclidean (TSPLIB EUC_2D) or raw Euclidean.
enum class Rounding { kEuc2d, kExact };

struct Customer {
  CustomerId id = 0;
  Point pos;
  std::int64_t demand = 0;

  friend bool operator==(const Customer&, const Customer&) = default;
};

struct Instance {
  std::string name;
  Point depot;
  std::vector<Customer> customers;  // customers[i].id == i + 1
  std::int64_t capacity = 0;
  int fleet_size = 0;
  Rounding rounding = Rounding::kEuc2d;

  std::size_t size() const { return customers.size(); }
  bool has_customer(CustomerId id) const {
    return id >= 1 && id <= static_cast<CustomerId>(customers.size());
  }
  // Throws UnknownCustomerId.
  const Customer& customer(CustomerId id) const;
  std::int64_t total_demand() const;
  // Total demand exceeds fleet_size * capacity. Flagged, never rejected.
  bool demand_exceeds_fleet() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Throws InvalidInstance when IDs are not 1..n, capacity/fleet are not
// positive, or a demand is negative.
void check_instance(const Instance& instance);

// Builds an instance with customers numbered 1..n in the given order.
Instance make_instance(std::string name, Point depot,
                       const std::vector<std::pair<Point, std::int64_t>>& customers,
                       std::int64_t capacity, int fleet_size,
                       Rounding rounding = Rounding::kEuc2d);

struct Solution {
  std::vector<Route> routes;

  std::size_t customer_count() const;
  friend bool operator==(const Solution&, const Solution&) = default;
};

double distance(Point a, Point b, Rounding rounding);

// Integer-valued in EUC_2D mode (summed as int64). Throws UnknownCustomerId.
double route_cost(const Instance& instance, const Route& route);
double solution_cost(const Instance& instance, const Solution& solution);
std::int64_t route_demand(const Instance& instance, const Route& route);

struct CapacityViolation {
  std::size_t route_index = 0;
  std::int64_t excess = 0;

  friend bool operator==(const CapacityViolation&, const CapacityViolation&) = default;
};

struct FeasibilityReport {
  // Every referenced ID lies in 1..n.
  bool id_valid = false;
  // Demands of IDs outside 1..n are skipped.
  std::vector<std::int64_t> per_route_demand;
  std::vector<CapacityViolation> capacity_violations;
  bool served_exactly_once = false;
  // More routes than fleet_size. Advisory only.
  bool fleet_overrun = false;

  bool feasible() const { return served_exactly_once && capacity_violations.empty(); }
};

FeasibilityReport check_feasibility(const Instance& instance, const Solution& solution);

// (average - optimal) / optimal. Throws NonPositiveOptimal.
double gap(double average_cost, double optimal_cost);
// Whole-percent rendering used in reports, e.g. 0.2207 -> "22%".
std::string format_gap_percent(double gap_ratio);
long gap_whole_percent(double gap_ratio);

}  // namespace mmvrp
