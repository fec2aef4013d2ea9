// Records scripted transcripts with the real prompt builders so the CLI can
// replay them: make_fixtures <out-dir>

#include <iostream>

#include <fmt/format.h>

#include "mmvrp/baselines.hpp"
#include "mmvrp/bench.hpp"
#include "mmvrp/prompt.hpp"
#include "test_support.hpp"

using namespace mmvrp;
namespace fs = std::filesystem;

namespace {

std::string wrap(const Solution& s) {
  return "Here is the solution:\n```xml\n" + solution_to_xml(XmlSolutionDoc::from_solution(s)) + "```\n";
}

void record(const Instance& target, PromptMode mode, std::vector<std::string> replies,
            const fs::path& path) {
  SolveConfig cfg;
  cfg.mode = mode;
  cfg.examples = support::solved_examples();
  cfg.session.transport = TransportMode::kRecord;
  ScriptedTransport transport(std::move(replies));
  SolveOptions opts;
  opts.transcript_path = path;
  solve(target, cfg, transport, opts);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <out-dir>\n";
    return 2;
  }
  const fs::path out = argv[1];
  fs::remove_all(out);

  const Instance p19 = support::named("P-n19-k2");
  const Solution good = savings_solve(p19);
  // first answer: customer 1 twice, the last customer of route 1 dropped
  Solution bad = good;
  bad.routes[0].pop_back();
  bad.routes.back().push_back(1);
  for (PromptMode mode : {PromptMode::kVision, PromptMode::kText}) {
    const std::string dir = mode == PromptMode::kVision ? "p19_v" : "p19_t";
    record(p19, mode,
           {"Observations: routes leave the depot in distinct directions and stay compact.",
            wrap(bad), wrap(good)},
           out / dir / "transcript.jsonl");
  }

  for (const std::string name : {"P-n19-k2", "A-n32-k5"}) {
    const Instance inst = support::named(name);
    for (int run = 1; run <= 5; ++run) {
      record(inst, PromptMode::kVision,
             {fmt::format("Observations for run {}.", run),
              wrap(random_solution(inst, static_cast<std::uint64_t>(run)))},
             out / "bench" / transcript_file_name(name, PromptMode::kVision, run));
    }
  }
  std::cout << "fixtures written to " << out.string() << '\n';
  return 0;
}
