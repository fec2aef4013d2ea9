#include "mmvrp/orchestrator.hpp"

#include <fmt/format.h>

#include "mmvrp/error.hpp"
#include "mmvrp/tsplib.hpp"

namespace mmvrp {

void check_solve_config(const SolveConfig& config) {
  if (config.examples.empty()) throw Error("at least one solved example is required");
  if (config.max_refine_iterations < 1) throw Error("max refine iterations must be positive");
  check_session_config(config.session);
}

ChatMessage step1_message(const PromptBundle& bundle) {
  ChatMessage msg{Role::kUser, {}};
  msg.parts.emplace_back(TextPart{bundle.system_preamble});
  for (std::size_t i = 0; i < bundle.example_blocks.size(); ++i) {
    const auto& block = bundle.example_blocks[i];
    msg.parts.emplace_back(TextPart{fmt::format("Example {}:\n{}", i + 1, block.xml)});
    if (block.image) msg.parts.emplace_back(ImagePart{*block.image});
  }
  msg.parts.emplace_back(TextPart{bundle.instruction_tail});
  return msg;
}

ChatMessage step2_message(const PromptBundle& bundle) {
  ChatMessage msg{Role::kUser, {}};
  msg.parts.emplace_back(TextPart{bundle.system_preamble});
  msg.parts.emplace_back(TextPart{bundle.task_block});
  if (bundle.task_image) msg.parts.emplace_back(ImagePart{*bundle.task_image});
  msg.parts.emplace_back(TextPart{bundle.instruction_tail});
  return msg;
}

std::string extract_heuristics(ChatSession& session, const SolveConfig& config) {
  if (!session.history().empty()) throw Error("heuristic extraction needs a fresh session");
  std::vector<SolvedExample> solved;
  solved.reserve(config.examples.size());
  for (const auto& ex : config.examples) {
    SolvedExample s{ex.instance, ex.solution, std::nullopt};
    if (config.mode == PromptMode::kVision) {
      s.image = render_pair(ex.instance, ex.solution, config.render).png;
    }
    solved.push_back(std::move(s));
  }
  const PromptBundle bundle = build_step1_prompt(solved, config.mode);
  return session.send({step1_message(bundle)}).text();
}

XmlSolutionDoc generate_solution(ChatSession& session, const Instance& target,
                                 const SolveConfig& config) {
  if (session.history().size() < 2) {
    throw Error("solution generation requires the heuristic extraction turn first");
  }
  std::optional<EncodedImage> layout;
  if (config.mode == PromptMode::kVision) layout = render_layout(target, config.render).png;
  const PromptBundle bundle = build_step2_prompt(target, config.mode, layout);

  std::string reply = session.send({step2_message(bundle)}).text();
  try {
    return extract_solution(reply);
  } catch (const PromptError& first) {
    reply = session.send({ChatMessage::user(build_format_reminder(target))}).text();
    try {
      return extract_solution(reply);
    } catch (const PromptError& second) {
      throw NoSolutionAfterRetry(fmt::format("{}: no solution in reply ({}), nor after reminder ({})",
                                             target.name, first.what(), second.what()));
    }
  }
}

RefineOutcome refine_loop(ChatSession& session, const Instance& target, XmlSolutionDoc candidate,
                          const SolveConfig& config) {
  RefineOutcome out;
  ValidationReport report;
  for (int iter = 0;; ++iter) {
    report = validate_ids(target, candidate.to_solution());
    if (report.empty()) {
      out.solution = candidate.to_solution();
      return out;
    }
    if (iter == config.max_refine_iterations) break;
    const std::string reply =
        session.send({ChatMessage::user(build_error_prompt(candidate, report))}).text();
    ++out.iterations;
    try {
      candidate = extract_solution(reply);
    } catch (const PromptError&) {
      // unreadable correction: keep the previous candidate, spend the turn
    }
  }
  out.solution = apply_fix_instruction(candidate.to_solution(), report);
  out.used_fallback = true;
  return out;
}

SolveResult solve(const Instance& target, const SolveConfig& config, ChatTransport& transport,
                  const SolveOptions& options) {
  check_solve_config(config);
  const std::string fingerprint = instance_fingerprint(target);
  for (const auto& ex : config.examples) {
    if (instance_fingerprint(ex.instance) == fingerprint) {
      throw Error(fmt::format("target {} is one of the solved examples", target.name));
    }
  }

  ChatSession session(config.session, transport, options.sleeper);
  session.set_transcript_tags(fingerprint, std::string(to_string(config.mode)));
  const bool recording = config.session.transport == TransportMode::kRecord;
  if (recording && options.transcript_path) session.set_record_path(*options.transcript_path);

  SolveResult result;
  result.metadata.run_index = options.run_index;
  result.metadata.model = config.session.model;
  result.metadata.temperature = config.session.temperature;
  result.metadata.transport = std::string(to_string(config.session.transport));
  result.metadata.mode = std::string(to_string(config.mode));
  result.metadata.target_fingerprint = fingerprint;

  result.observations = extract_heuristics(session, config);
  XmlSolutionDoc doc = generate_solution(session, target, config);
  RefineOutcome refined = refine_loop(session, target, std::move(doc), config);
  result.refine_iterations = refined.iterations;
  result.used_fallback = refined.used_fallback;

  result.final_solution = std::move(refined.solution);
  result.cost_before_repair = solution_cost(target, result.final_solution);
  if (config.apply_repair) {
    result.final_solution = repair_capacity(target, result.final_solution);
    result.cost_after_repair = solution_cost(target, result.final_solution);
  }
  result.feasibility = check_feasibility(target, result.final_solution);
  result.validation = validate_ids(target, result.final_solution);
  result.llm_calls = session.transcript().records.size();

  if (options.transcript_path && config.session.transport != TransportMode::kReplay) {
    persist_transcript(session.transcript(), *options.transcript_path);
    result.transcript_path = options.transcript_path;
  } else if (options.transcript_path) {
    result.transcript_path = options.transcript_path;
  }
  return result;
}

}  // namespace mmvrp
