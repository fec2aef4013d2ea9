#include "mmvrp/validate.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "mmvrp/error.hpp"

namespace mmvrp {

ValidationReport validate_ids(const Instance& instance, const Solution& candidate) {
  const auto n = static_cast<CustomerId>(instance.size());
  std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
  std::set<CustomerId> extraneous;
  for (const auto& route : candidate.routes) {
    for (CustomerId id : route) {
      if (id < 1 || id > n) {
        extraneous.insert(id);
      } else {
        ++count[static_cast<std::size_t>(id)];
      }
    }
  }
  ValidationReport report;
  for (CustomerId id = 1; id <= n; ++id) {
    const int c = count[static_cast<std::size_t>(id)];
    if (c == 0) report.missing.push_back(id);
    if (c >= 2) report.duplicated.push_back(id);
  }
  report.extraneous.assign(extraneous.begin(), extraneous.end());
  return report;
}

Solution apply_fix_instruction(const Solution& candidate, const ValidationReport& report) {
  if (report.empty()) return candidate;
  const std::set<CustomerId> duplicated(report.duplicated.begin(), report.duplicated.end());
  const std::set<CustomerId> extraneous(report.extraneous.begin(), report.extraneous.end());

  Solution fixed;
  std::set<CustomerId> kept;
  for (const auto& route : candidate.routes) {
    Route out;
    for (CustomerId id : route) {
      if (extraneous.contains(id)) continue;
      if (duplicated.contains(id) && !kept.insert(id).second) continue;
      out.push_back(id);
    }
    fixed.routes.push_back(std::move(out));
  }
  if (fixed.routes.empty() && !report.missing.empty()) fixed.routes.emplace_back();
  for (CustomerId id : report.missing) {
    auto shortest = std::min_element(
        fixed.routes.begin(), fixed.routes.end(),
        [](const Route& a, const Route& b) { return a.size() < b.size(); });
    shortest->push_back(id);
  }
  return fixed;
}

namespace {

struct Insertion {
  std::size_t route = 0;
  std::size_t position = 0;
  double delta = std::numeric_limits<double>::infinity();
};

Point position_of(const Instance& instance, CustomerId id) { return instance.customer(id).pos; }

}  // namespace

Solution repair_capacity(const Instance& instance, const Solution& candidate) {
  if (const auto report = validate_ids(instance, candidate); !report.empty()) {
    throw InvalidIds(fmt::format(
        "{}: repair needs a valid-ID solution ({} duplicated, {} missing, {} extraneous)",
        instance.name, report.duplicated.size(), report.missing.size(), report.extraneous.size()));
  }
  for (const auto& c : instance.customers) {
    if (c.demand > instance.capacity) {
      throw Unservable(fmt::format("{}: customer {} demand {} exceeds capacity {}", instance.name,
                                   c.id, c.demand, instance.capacity));
    }
  }

  Solution repaired = candidate;
  std::vector<std::int64_t> load;
  std::vector<CustomerId> shed;
  for (auto& route : repaired.routes) {
    std::int64_t l = route_demand(instance, route);
    std::vector<CustomerId> tail;
    while (l > instance.capacity) {
      tail.push_back(route.back());
      l -= instance.customer(route.back()).demand;
      route.pop_back();
    }
    shed.insert(shed.end(), tail.rbegin(), tail.rend());
    load.push_back(l);
  }
  if (shed.empty()) return candidate;

  const Rounding mode = instance.rounding;
  for (CustomerId id : shed) {
    const std::int64_t demand = instance.customer(id).demand;
    const Point p = position_of(instance, id);
    Insertion best;
    for (std::size_t r = 0; r < repaired.routes.size(); ++r) {
      if (load[r] + demand > instance.capacity) continue;
      const Route& route = repaired.routes[r];
      for (std::size_t pos = 0; pos <= route.size(); ++pos) {
        const Point a = pos == 0 ? instance.depot : position_of(instance, route[pos - 1]);
        const Point b = pos == route.size() ? instance.depot : position_of(instance, route[pos]);
        const double delta = distance(a, p, mode) + distance(p, b, mode) - distance(a, b, mode);
        if (delta < best.delta) best = {r, pos, delta};
      }
    }
    if (best.delta == std::numeric_limits<double>::infinity()) {
      repaired.routes.push_back({id});
      load.push_back(demand);
      continue;
    }
    auto& route = repaired.routes[best.route];
    route.insert(route.begin() + static_cast<std::ptrdiff_t>(best.position), id);
    load[best.route] += demand;
  }
  return repaired;
}

}  // namespace mmvrp
