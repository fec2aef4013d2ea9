#include "mmvrp/instance.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mmvrp/error.hpp"

namespace mmvrp {

const Customer& Instance::customer(CustomerId id) const {
  if (!has_customer(id)) throw UnknownCustomerId(id);
  return customers[static_cast<std::size_t>(id - 1)];
}

std::int64_t Instance::total_demand() const {
  std::int64_t total = 0;
  for (const auto& c : customers) total += c.demand;
  return total;
}

bool Instance::demand_exceeds_fleet() const {
  return total_demand() > capacity * static_cast<std::int64_t>(fleet_size);
}

void check_instance(const Instance& instance) {
  if (instance.capacity <= 0) {
    throw InvalidInstance(fmt::format("{}: capacity must be positive", instance.name));
  }
  if (instance.fleet_size <= 0) {
    throw InvalidInstance(fmt::format("{}: fleet size must be positive", instance.name));
  }
  for (std::size_t i = 0; i < instance.customers.size(); ++i) {
    const auto& c = instance.customers[i];
    if (c.id != static_cast<CustomerId>(i + 1)) {
      throw InvalidInstance(
          fmt::format("{}: customer at position {} has id {}", instance.name, i + 1, c.id));
    }
    if (c.demand < 0) {
      throw InvalidInstance(fmt::format("{}: customer {} has negative demand", instance.name, c.id));
    }
  }
}

Instance make_instance(std::string name, Point depot,
                       const std::vector<std::pair<Point, std::int64_t>>& customers,
                       std::int64_t capacity, int fleet_size, Rounding rounding) {
  Instance instance;
  instance.name = std::move(name);
  instance.depot = depot;
  instance.capacity = capacity;
  instance.fleet_size = fleet_size;
  instance.rounding = rounding;
  instance.customers.reserve(customers.size());
  CustomerId id = 1;
  for (const auto& [pos, demand] : customers) {
    instance.customers.push_back(Customer{id++, pos, demand});
  }
  check_instance(instance);
  return instance;
}

std::size_t Solution::customer_count() const {
  std::size_t n = 0;
  for (const auto& r : routes) n += r.size();
  return n;
}

double distance(Point a, Point b, Rounding rounding) {
  const double d = std::hypot(a.x - b.x, a.y - b.y);
  if (rounding == Rounding::kEuc2d) return std::floor(d + 0.5);
  return d;
}

double route_cost(const Instance& instance, const Route& route) {
  if (route.empty()) return 0.0;
  const Rounding mode = instance.rounding;
  Point prev = instance.depot;
  if (mode == Rounding::kEuc2d) {
    // Legs are whole numbers; keep the running sum in an integer.
    std::int64_t total = 0;
    for (CustomerId id : route) {
      const Point next = instance.customer(id).pos;
      total += static_cast<std::int64_t>(distance(prev, next, mode));
      prev = next;
    }
    total += static_cast<std::int64_t>(distance(prev, instance.depot, mode));
    return static_cast<double>(total);
  }
  double total = 0.0;
  for (CustomerId id : route) {
    const Point next = instance.customer(id).pos;
    total += distance(prev, next, mode);
    prev = next;
  }
  return total + distance(prev, instance.depot, mode);
}

double solution_cost(const Instance& instance, const Solution& solution) {
  if (instance.rounding == Rounding::kEuc2d) {
    std::int64_t total = 0;
    for (const auto& r : solution.routes) total += static_cast<std::int64_t>(route_cost(instance, r));
    return static_cast<double>(total);
  }
  double total = 0.0;
  for (const auto& r : solution.routes) total += route_cost(instance, r);
  return total;
}

std::int64_t route_demand(const Instance& instance, const Route& route) {
  std::int64_t total = 0;
  for (CustomerId id : route) total += instance.customer(id).demand;
  return total;
}

FeasibilityReport check_feasibility(const Instance& instance, const Solution& solution) {
  FeasibilityReport report;
  const auto n = instance.customers.size();
  std::vector<int> seen(n + 1, 0);
  bool ids_in_range = true;
  bool exact = true;

  for (std::size_t r = 0; r < solution.routes.size(); ++r) {
    std::int64_t load = 0;
    for (CustomerId id : solution.routes[r]) {
      if (!instance.has_customer(id)) {
        ids_in_range = false;
        exact = false;
        continue;
      }
      load += instance.customers[static_cast<std::size_t>(id - 1)].demand;
      if (++seen[static_cast<std::size_t>(id)] > 1) exact = false;
    }
    report.per_route_demand.push_back(load);
    if (load > instance.capacity) {
      report.capacity_violations.push_back({r, load - instance.capacity});
    }
  }
  for (std::size_t id = 1; id <= n; ++id) {
    if (seen[id] != 1) exact = false;
  }
  report.served_exactly_once = exact;
  report.id_valid = ids_in_range;
  report.fleet_overrun =
      std::count_if(solution.routes.begin(), solution.routes.end(),
                    [](const Route& r) { return !r.empty(); }) > instance.fleet_size;
  return report;
}

double gap(double average_cost, double optimal_cost) {
  if (!(optimal_cost > 0.0)) {
    throw NonPositiveOptimal(fmt::format("optimal cost must be positive, got {}", optimal_cost));
  }
  return (average_cost - optimal_cost) / optimal_cost;
}

long gap_whole_percent(double gap_ratio) { return std::lround(gap_ratio * 100.0); }

std::string format_gap_percent(double gap_ratio) {
  return fmt::format("{}%", gap_whole_percent(gap_ratio));
}

}  // namespace mmvrp
