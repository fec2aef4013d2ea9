#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmvrp/image.hpp"
#include "mmvrp/instance.hpp"

namespace mmvrp {

struct ValidationReport;

// MLLM-T sends text only; MLLM-V adds the annotated layout images.
enum class PromptMode { kText, kVision };

std::string_view to_string(PromptMode mode);  // "MLLM-T" / "MLLM-V"
std::optional<PromptMode> parse_prompt_mode(std::string_view text);

struct ExampleBlock {
  std::string xml;
  std::optional<EncodedImage> image;
};

struct PromptBundle {
  PromptMode mode = PromptMode::kText;
  std::string system_preamble;
  std::vector<ExampleBlock> example_blocks;
  std::string task_block;
  std::optional<EncodedImage> task_image;
  std::string instruction_tail;

  std::size_t image_count() const;
};

struct SolvedExample {
  Instance instance;
  Solution solution;
  // Side-by-side layout/routes composite; required in MLLM-V mode only.
  std::optional<EncodedImage> image;
};

struct XmlRoute {
  std::int64_t id = 0;
  Route customers;

  friend bool operator==(const XmlRoute&, const XmlRoute&) = default;
};

struct XmlSolutionDoc {
  std::vector<XmlRoute> routes;

  static XmlSolutionDoc from_solution(const Solution& solution);
  Solution to_solution() const;
  friend bool operator==(const XmlSolutionDoc&, const XmlSolutionDoc&) = default;
};

// <CVRP name=.. n_customer=.. capacity=..> with <Depot>, <Customers> and,
// when a solution is given, <SOLUTION>.
std::string instance_to_xml(const Instance& instance,
                            const std::optional<Solution>& solution = std::nullopt);
std::string solution_to_xml(const XmlSolutionDoc& doc);

// Throws PromptError(kEmptyExampleSet), or Error when image presence does not
// match the mode.
PromptBundle build_step1_prompt(std::span<const SolvedExample> solved, PromptMode mode);

// `layout` (sub-figure A of the target) must be present iff mode is MLLM-V.
PromptBundle build_step2_prompt(const Instance& target, PromptMode mode,
                                const std::optional<EncodedImage>& layout = std::nullopt);

// Throws PromptError(kEmptyReport) when the report is clean.
std::string build_error_prompt(const XmlSolutionDoc& candidate, const ValidationReport& report);

// Sent once when a reply carried no parseable solution.
std::string build_format_reminder(const Instance& target);

// Finds the first <SOLUTION>...</SOLUTION> region anywhere in the reply and
// reads each <route> payload ("[1,2,3]" or "1 2 3"). Throws
// PromptError(kNoSolutionTag / kUnparseableRoute).
XmlSolutionDoc extract_solution(std::string_view reply);

}  // namespace mmvrp
