// Acceptance checks. One PASS/FAIL line each; exit status 1 if any fail.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>

#include <fmt/format.h>

#include "mmvrp/baselines.hpp"
#include "mmvrp/orchestrator.hpp"
#include "mmvrp/prompt.hpp"
#include "mmvrp/render.hpp"
#include "mmvrp/validate.hpp"
#include "test_support.hpp"

using namespace mmvrp;
namespace ref = mmvrp::reference;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

// Independent of route_cost: explicit depot legs, rounded EUC_2D.
std::int64_t oracle_cost(const Instance& inst, const Solution& s) {
  auto at = [&](CustomerId id) { return id == 0 ? inst.depot : inst.customers[id - 1].pos; };
  auto d = [](Point a, Point b) {
    return static_cast<std::int64_t>(std::floor(std::hypot(a.x - b.x, a.y - b.y) + 0.5));
  };
  std::int64_t total = 0;
  for (const auto& r : s.routes) {
    if (r.empty()) continue;
    CustomerId prev = 0;
    for (CustomerId id : r) {
      total += d(at(prev), at(id));
      prev = id;
    }
    total += d(at(prev), at(0));
  }
  return total;
}

ValidationReport oracle_ids(std::size_t n, const Solution& s) {
  std::map<CustomerId, int> count;
  for (const auto& r : s.routes) {
    for (CustomerId id : r) ++count[id];
  }
  ValidationReport out;
  for (const auto& [id, c] : count) {
    if (id < 1 || id > static_cast<CustomerId>(n)) out.extraneous.push_back(id);
    else if (c > 1) out.duplicated.push_back(id);
  }
  for (CustomerId id = 1; id <= static_cast<CustomerId>(n); ++id) {
    if (!count.count(id)) out.missing.push_back(id);
  }
  return out;
}

Solution mutate(std::mt19937_64& rng, Solution s, std::size_t n) {
  for (int m = 1 + rng() % 3; m > 0; --m) {
    auto& r = s.routes[rng() % s.routes.size()];
    switch (rng() % 4) {
      case 0: if (!r.empty()) r.erase(r.begin() + rng() % r.size()); break;
      case 1: r.push_back(1 + rng() % n); break;
      case 2: r.push_back(static_cast<CustomerId>(n + 1 + rng() % 5)); break;
      default: r.push_back(-static_cast<CustomerId>(rng() % 3)); break;
    }
  }
  return s;
}

Outcome gap_reproduction() {
  int ok = 0, total = 0;
  std::string bad;
  for (const auto& row : ref::result_table()) {
    for (const auto* m : {&row.text, &row.vision}) {
      ++total;
      const long got = gap_whole_percent(gap(double(m->average_cost), double(row.optimal)));
      if (std::abs(got - m->gap_percent) <= 1) {
        ++ok;
      } else {
        bad += fmt::format(" {} {}: printed {}% recomputed {}%", row.name,
                           m == &row.text ? "MLLM-T" : "MLLM-V", m->gap_percent, got);
      }
    }
  }
  return {ok == total, fmt::format("{}/{} within 1 point;{}", ok, total, bad)};
}

// DIMENSION straight from the header text.
int declared_dimension(const std::filesystem::path& file) {
  const std::string text = read_text_file(file);
  const auto at = text.find("DIMENSION");
  if (at == std::string::npos) return -1;
  const auto colon = text.find(':', at);
  return std::atoi(text.c_str() + colon + 1);
}

Outcome parser_coverage() {
  int ok = 0, conflicts = 0;
  std::string notes;
  for (const auto& row : ref::instance_table()) {
    const auto file = support::data_dir() / "instances" / (std::string(row.name) + ".vrp");
    const Instance inst = load_instance(file);
    if (static_cast<int>(inst.size()) == declared_dimension(file) - 1) ++ok;
    // file wins; differences are only reported
    if (row.vertices != static_cast<int>(inst.size()) + 1) {
      ++conflicts;
      notes += fmt::format(" {} |V| table {} file {};", row.name, row.vertices, inst.size() + 1);
    }
    if (row.vehicles != inst.fleet_size) {
      ++conflicts;
      notes += fmt::format(" {} |K| table {} file {};", row.name, row.vehicles, inst.fleet_size);
    }
    if (row.capacity != inst.capacity) {
      ++conflicts;
      notes += fmt::format(" {} Q table {} file {};", row.name, row.capacity, inst.capacity);
    }
  }
  const int n = static_cast<int>(ref::instance_table().size());
  return {ok == n && n == 20,
          fmt::format("{}/{} parsed with n = DIMENSION - 1; {} table conflicts:{}", ok, n, conflicts, notes)};
}

Outcome cost_oracle() {
  int ok = 0, n = 0;
  std::string bad;
  for (const auto& e : std::filesystem::directory_iterator(support::data_dir() / "solutions")) {
    const std::string name = e.path().stem().string();
    const Instance inst = support::named(name);
    const ParsedSolution ps = load_solution(e.path());
    ++n;
    const auto mine = static_cast<std::int64_t>(solution_cost(inst, ps.solution));
    const bool match = mine == oracle_cost(inst, ps.solution) &&
                       (!ps.declared_cost || std::llround(*ps.declared_cost) == mine);
    if (match) ++ok;
    else bad += fmt::format(" {}={}", name, mine);
  }
  bool examples = true;
  for (auto name : ref::solved_example_names()) {
    examples = examples && std::filesystem::exists(support::data_dir() / "solutions" / (std::string(name) + ".sol"));
  }
  return {ok == n && n >= 3 && examples, fmt::format("{}/{} solution files agree{}", ok, n, bad)};
}

Outcome validator_oracle() {
  std::mt19937_64 rng(2024);
  int ok = 0, total = 0;
  for (const char* name : {"P-n19-k2", "A-n32-k5", "E-n51-k5", "P-n70-k10", "X-n139-k10"}) {
    const Instance inst = support::named(name);
    for (int i = 0; i < 200; ++i) {
      ++total;
      const Solution s = mutate(rng, support::random_partition(rng, inst.size(), 1 + rng() % 8), inst.size());
      if (validate_ids(inst, s) == oracle_ids(inst.size(), s)) ++ok;
    }
  }
  return {ok == total, fmt::format("{}/{} mutated candidates", ok, total)};
}

Outcome repair_soundness() {
  std::mt19937_64 rng(77);
  int ok = 0, total = 0;
  for (const auto& row : ref::instance_table()) {
    const Instance inst = support::named(std::string(row.name));
    for (int i = 0; i < 50; ++i) {
      ++total;
      const Solution s = support::random_partition(rng, inst.size(), 1 + rng() % 6);
      const Solution out = repair_capacity(inst, s);
      if (check_feasibility(inst, out).feasible() && repair_capacity(inst, out) == out) ++ok;
    }
  }
  return {ok == total, fmt::format("{}/{} repaired, feasible and stable", ok, total)};
}

Outcome correction_replay() {
  const Instance toy = support::toy();
  const Solution bad{{{1, 3, 7, 9, 9}, {2, 4, 6, 8, 10, 11}}};
  const Solution good{{{1, 3, 7, 9, 5}, {2, 4, 6, 8, 10}}};
  SolveConfig cfg;
  cfg.mode = PromptMode::kText;
  cfg.examples = support::solved_examples();

  const auto dir = support::scratch_dir("acceptance");
  ScriptedTransport script({solution_to_xml(XmlSolutionDoc::from_solution(good))});
  SessionConfig rec = cfg.session;
  rec.transport = TransportMode::kRecord;
  ChatSession recorder(rec, script);
  recorder.set_record_path(dir / "correction.jsonl");
  refine_loop(recorder, toy, XmlSolutionDoc::from_solution(bad), cfg);

  std::vector<RefineOutcome> outs;
  for (int i = 0; i < 2; ++i) {
    ReplayTransport replay(load_transcript(dir / "correction.jsonl"));
    ChatSession s(cfg.session, replay);
    outs.push_back(refine_loop(s, toy, XmlSolutionDoc::from_solution(bad), cfg));
  }
  std::filesystem::remove_all(dir);
  const bool pass = outs[0].iterations == 1 && !outs[0].used_fallback && outs[0].solution == good &&
                    outs[1].solution == outs[0].solution && outs[1].iterations == 1;
  return {pass, fmt::format("{} iteration(s), replay identical: {}", outs[0].iterations,
                            outs[1].solution == outs[0].solution)};
}

Outcome prompt_round_trip() {
  std::mt19937_64 rng(500);
  int ok = 0;
  for (int i = 0; i < 500; ++i) {
    const int n = 1 + rng() % 150;
    const Instance inst = support::random_instance(rng, n);
    const Solution s = support::random_partition(rng, n, 1 + rng() % 20);
    const std::string reply = "Here you go:\n" + instance_to_xml(inst, s) + "\nDone.";
    if (extract_solution(reply) == XmlSolutionDoc::from_solution(s)) ++ok;
  }
  return {ok == 500, fmt::format("{}/500 solutions survive emit and extract", ok)};
}

Outcome renderer() {
  int ok = 0, n = 0;
  for (const auto& row : ref::instance_table()) {
    ++n;
    const Instance inst = support::named(std::string(row.name));
    const auto a = render_layout(inst);
    const auto b = render_layout(inst);
    const std::size_t want = inst.size() + 1;
    const Solution sol = savings_solve(inst);
    const auto routes = render_routes(inst, sol);
    if (a.vector.markers.size() == want && a.vector.labels.size() == want && a.png.bytes == b.png.bytes &&
        to_svg(a.vector) == to_svg(b.vector) && routes.vector.polylines.size() == sol.routes.size() &&
        routes.png.bytes == render_routes(inst, sol).png.bytes) {
      ++ok;
    }
  }
  return {ok == n, fmt::format("{}/{} instances: n+1 markers, one polyline per route, byte-identical", ok, n)};
}

Outcome baselines() {
  const Instance inst = support::named("P-n19-k2");
  const Solution s = savings_solve(inst);
  bool feasible = check_feasibility(inst, s).feasible();
  double sum = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Solution r = random_solution(inst, seed);
    feasible = feasible && check_feasibility(inst, r).feasible();
    sum += solution_cost(inst, r);
  }
  const double savings = solution_cost(inst, s);
  return {feasible && savings < sum / 100,
          fmt::format("savings {} vs random mean {:.2f}", savings, sum / 100)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"gap-reproduction", gap_reproduction},
      {"parser-coverage", parser_coverage},
      {"cost-oracle", cost_oracle},
      {"validator-oracle", validator_oracle},
      {"repair-soundness", repair_soundness},
      {"correction-replay", correction_replay},
      {"prompt-round-trip", prompt_round_trip},
      {"renderer", renderer},
      {"baselines", baselines},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
  }
  std::cout << fmt::format("{}/{} criteria passed\n", checks.size() - failed, checks.size());
  return failed ? 1 : 0;
}
