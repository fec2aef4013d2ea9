#include "mmvrp/baselines.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <tuple>

#include <fmt/format.h>

#include "mmvrp/error.hpp"

namespace mmvrp {

namespace {

void require_servable(const Instance& instance) {
  for (const auto& c : instance.customers) {
    if (c.demand > instance.capacity) {
      throw Unservable(fmt::format("customer {} demand {} exceeds capacity {}", c.id, c.demand,
                                   instance.capacity));
    }
  }
}

}  // namespace

Solution random_solution(const Instance& instance, std::uint64_t seed) {
  require_servable(instance);
  std::vector<CustomerId> order(instance.size());
  std::iota(order.begin(), order.end(), CustomerId{1});
  // Fisher-Yates by hand: std::shuffle's draw sequence is library-specific.
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = rng() % i;
    std::swap(order[i - 1], order[j]);
  }

  Solution sol;
  std::int64_t load = 0;
  for (CustomerId id : order) {
    const std::int64_t d = instance.customer(id).demand;
    if (sol.routes.empty() || load + d > instance.capacity) {
      sol.routes.emplace_back();
      load = 0;
    }
    sol.routes.back().push_back(id);
    load += d;
  }
  return sol;
}

Solution savings_solve(const Instance& instance) {
  require_servable(instance);
  const std::size_t n = instance.size();
  if (n == 0) return {};

  auto pos = [&](std::size_t i) { return i == 0 ? instance.depot : instance.customers[i - 1].pos; };
  auto dist = [&](std::size_t a, std::size_t b) {
    return distance(pos(a), pos(b), instance.rounding);
  };

  struct Saving {
    double value;
    std::size_t i, j;
  };
  std::vector<Saving> savings;
  savings.reserve(n * (n - 1) / 2);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double s = dist(0, i) + dist(0, j) - dist(i, j);
      if (s > 0) savings.push_back({s, i, j});
    }
  }
  std::sort(savings.begin(), savings.end(), [](const Saving& a, const Saving& b) {
    if (a.value != b.value) return a.value > b.value;
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });

  // route_of[c] indexes into routes; merged routes are left empty.
  std::vector<std::deque<CustomerId>> routes(n);
  std::vector<std::int64_t> load(n);
  std::vector<std::size_t> route_of(n + 1);
  for (std::size_t c = 1; c <= n; ++c) {
    routes[c - 1] = {static_cast<CustomerId>(c)};
    load[c - 1] = instance.customers[c - 1].demand;
    route_of[c] = c - 1;
  }

  for (const auto& s : savings) {
    std::size_t ri = route_of[s.i], rj = route_of[s.j];
    if (ri == rj || load[ri] + load[rj] > instance.capacity) continue;
    auto& a = routes[ri];
    auto& b = routes[rj];
    const auto ci = static_cast<CustomerId>(s.i), cj = static_cast<CustomerId>(s.j);
    // Both customers must sit at an end of their routes (adjacent to the depot).
    const bool i_front = a.front() == ci, i_back = a.back() == ci;
    const bool j_front = b.front() == cj, j_back = b.back() == cj;
    if (!(i_front || i_back) || !(j_front || j_back)) continue;
    if (!i_back) std::reverse(a.begin(), a.end());  // put i at the back of a
    if (!j_front) std::reverse(b.begin(), b.end());  // and j at the front of b
    for (CustomerId c : b) {
      a.push_back(c);
      route_of[static_cast<std::size_t>(c)] = ri;
    }
    load[ri] += load[rj];
    b.clear();
    load[rj] = 0;
  }

  Solution sol;
  for (auto& r : routes) {
    if (!r.empty()) sol.routes.emplace_back(r.begin(), r.end());
  }
  std::sort(sol.routes.begin(), sol.routes.end(), [](const Route& a, const Route& b) {
    return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end());
  });
  return sol;
}

}  // namespace mmvrp
