#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mmvrp/instance.hpp"
#include "mmvrp/llm.hpp"
#include "mmvrp/orchestrator.hpp"

namespace mmvrp {

enum class Method { kText, kVision, kRandom, kSavings };

std::string_view to_string(Method method);  // "MLLM-T", "MLLM-V", "Random", "Savings"
std::optional<Method> parse_method(std::string_view text);

struct BenchInstance {
  Instance instance;
  std::optional<std::int64_t> optimal;  // published best-known cost, if any
};

struct BenchRow {
  std::string problem;
  std::optional<std::int64_t> optimal;
  Method method = Method::kVision;
  int runs_requested = 0;
  std::vector<double> run_costs;   // successful runs only, in run order
  std::vector<std::string> failures;  // one message per failed run
  std::optional<Solution> best_solution;

  int runs_ok() const { return static_cast<int>(run_costs.size()); }
  std::optional<double> best_cost() const;
  std::optional<double> average_cost() const;
  std::optional<double> gap_ratio() const;
};

struct BenchReport {
  std::vector<Method> methods;
  std::vector<BenchRow> rows;  // instance-major, then method in `methods` order

  const BenchRow* find(std::string_view problem, Method method) const;
  // Every instance has at least one successful run for every method.
  bool all_succeeded() const;
};

using TransportFactory =
    std::function<std::unique_ptr<ChatTransport>(const Instance& target, PromptMode mode, int run)>;

struct BenchConfig {
  std::vector<Method> methods = {Method::kText, Method::kVision};
  int runs = 5;
  int workers = 1;
  std::uint64_t seed = 1;      // random baseline uses seed + run
  SolveConfig solve;           // mode is overridden per method
  TransportFactory transport;  // required for MLLM methods
  // When set, each model run's transcript goes to <dir>/<transcript_file_name>.
  std::optional<std::filesystem::path> transcript_dir;
  // When set, report.csv, report.md and plots/ are written here.
  std::optional<std::filesystem::path> output_dir;
  Sleeper sleeper;
};

// "<instance>_<mllm-t|mllm-v>_run<k>.jsonl"
std::string transcript_file_name(std::string_view instance, PromptMode mode, int run);

// Runs every (instance, method, run) job on a bounded worker pool. A failed
// run is recorded in its row and never stops the batch.
BenchReport run_benchmark(const std::vector<BenchInstance>& instances, const BenchConfig& config);

std::string report_csv(const BenchReport& report);
std::string report_markdown(const BenchReport& report);

// "name -> path" lines; '#' comments and blank lines ignored. Relative paths
// resolve against the manifest's directory.
struct ManifestEntry {
  std::string name;
  std::filesystem::path path;
};
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest);

}  // namespace mmvrp
