#pragma once

#include <cstdint>

#include "mmvrp/instance.hpp"

namespace mmvrp {

// Shuffles the customer IDs with a seeded mt19937_64, then cuts the sequence
// into a new route whenever the next customer would overflow the vehicle.
// Throws Unservable.
Solution random_solution(const Instance& instance, std::uint64_t seed);

// Parallel Clarke-Wright savings. Only positive savings merge; larger saving
// first, ties by the lower (i, j) pair. Routes are listed by their smallest
// customer ID. Throws Unservable.
Solution savings_solve(const Instance& instance);

}  // namespace mmvrp
