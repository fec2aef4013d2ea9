#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mmvrp/instance.hpp"
#include "mmvrp/llm.hpp"
#include "mmvrp/prompt.hpp"
#include "mmvrp/render.hpp"
#include "mmvrp/validate.hpp"

namespace mmvrp {

struct ExampleCase {
  Instance instance;
  Solution solution;
};

struct SolveConfig {
  PromptMode mode = PromptMode::kVision;
  std::vector<ExampleCase> examples;
  int max_refine_iterations = 5;
  SessionConfig session;
  bool apply_repair = true;
  RenderSpec render;
};

// Throws Error on an empty example list or a non-positive iteration cap.
void check_solve_config(const SolveConfig& config);

struct RunMetadata {
  int run_index = 0;
  std::string step1_policy = "per-run";  // Step 1 is re-run in every session
  std::string model;
  double temperature = 1.0;
  std::string transport;
  std::string mode;
  std::string target_fingerprint;
};

struct SolveResult {
  Solution final_solution;
  std::optional<double> cost_before_repair;
  std::optional<double> cost_after_repair;
  FeasibilityReport feasibility;
  ValidationReport validation;
  int refine_iterations = 0;
  bool used_fallback = false;
  std::string observations;
  std::size_t llm_calls = 0;
  std::optional<std::filesystem::path> transcript_path;
  RunMetadata metadata;

  // Cost of the solution actually returned.
  double final_cost() const { return cost_after_repair.value_or(cost_before_repair.value_or(0)); }
};

// Builds the Step-1 message (images rendered on demand in MLLM-V mode), sends
// it and returns the reply. The session must be fresh.
std::string extract_heuristics(ChatSession& session, const SolveConfig& config);

// Sends the Step-2 prompt and parses the reply; re-asks once with a format
// reminder when no solution can be read. Throws NoSolutionAfterRetry.
XmlSolutionDoc generate_solution(ChatSession& session, const Instance& target,
                                 const SolveConfig& config);

struct RefineOutcome {
  Solution solution;
  int iterations = 0;  // error prompts sent
  bool used_fallback = false;
};

// Validate, send the error prompt, repeat. After max_refine_iterations error
// turns the deterministic fix instruction is applied instead.
RefineOutcome refine_loop(ChatSession& session, const Instance& target,
                          XmlSolutionDoc candidate, const SolveConfig& config);

struct SolveOptions {
  int run_index = 0;
  // Record mode: transcript is rewritten here after every exchange.
  // Other modes: written once at the end when set.
  std::optional<std::filesystem::path> transcript_path;
  Sleeper sleeper;
};

// Steps 1-3 on one fresh session, then optional capacity repair.
SolveResult solve(const Instance& target, const SolveConfig& config, ChatTransport& transport,
                  const SolveOptions& options = {});

// Step-1 message assembled from a bundle: preamble, "Example k:" blocks with
// their images, closing instruction. Exposed for tests.
ChatMessage step1_message(const PromptBundle& bundle);
ChatMessage step2_message(const PromptBundle& bundle);

}  // namespace mmvrp
