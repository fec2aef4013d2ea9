// mmvrp: command-line front end for the CVRP prompting pipeline.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mmvrp/baselines.hpp"
#include "mmvrp/bench.hpp"
#include "mmvrp/error.hpp"
#include "mmvrp/orchestrator.hpp"
#include "mmvrp/reference_tables.hpp"
#include "mmvrp/render.hpp"
#include "mmvrp/tsplib.hpp"
#include "mmvrp/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mmvrp;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit : int {
  kOk = 0,
  kNotClean = 1,
  kUsage = 2,
  kParse = 3,
  kTransport = 4,
  kUnservable = 5,
  kInternal = 6,
};

constexpr const char* kExitHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  completed, but the result is not clean (invalid or infeasible solution, failed runs)\n"
    "  2  usage error\n"
    "  3  parse error in an input file (message carries the line number)\n"
    "  4  transport or replay error\n"
    "  5  unservable instance (a demand exceeds the capacity)\n"
    "  6  other error\n"
    "\n"
    "Environment:\n"
    "  MMVRP_API_KEY (or OPENAI_API_KEY)  key for live/record transport\n"
    "  MMVRP_API_URL                      chat-completions endpoint\n"
    "  MMVRP_RATE_LIMIT_RPM               requests per minute across the process\n"
    "  MMVRP_MODEL, MMVRP_TEMPERATURE, MMVRP_MAX_TOKENS, MMVRP_TIMEOUT_MS,\n"
    "  MMVRP_MAX_RETRIES, MMVRP_MAX_ITERATIONS, MMVRP_DATA_DIR, MMVRP_WORKERS\n";

struct UsageError : Error {
  using Error::Error;
};

// --- configuration precedence: flag > env > config file > default ----------

class Settings {
 public:
  void load_file(const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    try {
      file_ = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError(fmt::format("config file {}: {}", path, e.what()));
    }
    if (!file_.is_object()) throw UsageError("config file must hold a JSON object");
  }

  template <class T>
  T get(const std::string& key, const CLI::Option* flag, const T& flag_value, const char* env,
        T fallback) {
    T value = fallback;
    std::string source = "default";
    if (flag && flag->count() > 0) {
      value = flag_value;
      source = "flag";
    } else if (const char* e = env ? std::getenv(env) : nullptr; e && *e) {
      value = from_string<T>(e, env);
      source = "env";
    } else if (file_.contains(key)) {
      try {
        value = file_.at(key).get<T>();
      } catch (const json::exception& ex) {
        throw UsageError(fmt::format("config key {}: {}", key, ex.what()));
      }
      source = "config";
    }
    effective_[key] = {{"value", value}, {"source", source}};
    return value;
  }

  const json& effective() const { return effective_; }

 private:
  template <class T>
  static T from_string(const std::string& s, const char* name) {
    try {
      if constexpr (std::is_same_v<T, std::string>) {
        return s;
      } else if constexpr (std::is_same_v<T, bool>) {
        return s == "1" || s == "true" || s == "yes";
      } else if constexpr (std::is_floating_point_v<T>) {
        return static_cast<T>(std::stod(s));
      } else {
        return static_cast<T>(std::stoll(s));
      }
    } catch (const std::exception&) {
      throw UsageError(fmt::format("environment variable {} has a bad value '{}'", name, s));
    }
  }

  json file_ = json::object();
  json effective_ = json::object();
};

// Options shared by the model-driven subcommands.
struct ModelFlags {
  std::string mode = "mllm-v";
  std::string transport = "replay";
  std::string transcript;
  std::string model;
  double temperature = 1.0;
  int max_tokens = 4096;
  int timeout_ms = 120000;
  int max_retries = 3;
  int max_iterations = 5;
  int rate_limit = 20;
  bool no_repair = false;
  std::vector<std::string> examples;

  CLI::Option* o_model = nullptr;
  CLI::Option* o_temperature = nullptr;
  CLI::Option* o_max_tokens = nullptr;
  CLI::Option* o_timeout = nullptr;
  CLI::Option* o_retries = nullptr;
  CLI::Option* o_iterations = nullptr;
  CLI::Option* o_rate = nullptr;

  void add_to(CLI::App* app) {
    o_model = app->add_option("--model", model, "Model identifier");
    o_temperature = app->add_option("--temperature", temperature, "Sampling temperature")
                        ->check(CLI::NonNegativeNumber);
    o_max_tokens = app->add_option("--max-tokens", max_tokens, "Maximum output tokens per reply")
                       ->check(CLI::PositiveNumber);
    o_timeout = app->add_option("--timeout-ms", timeout_ms, "Request timeout in milliseconds")
                    ->check(CLI::PositiveNumber);
    o_retries = app->add_option("--max-retries", max_retries, "Extra attempts after a transport failure")
                    ->check(CLI::NonNegativeNumber);
    o_iterations = app->add_option("--max-iterations", max_iterations, "Correction turns before the fallback fix")
                       ->check(CLI::PositiveNumber);
    o_rate = app->add_option("--rate-limit", rate_limit, "Requests per minute (0: unlimited)")
                 ->check(CLI::NonNegativeNumber);
    app->add_flag("--no-repair", no_repair, "Skip the capacity repair step");
    app->add_option("--example", examples,
                    "Solved example name (instances/<name>.vrp and solutions/<name>.sol under the data dir)");
  }
};

struct Common {
  std::string config_path;
  std::string data_dir;
  CLI::Option* o_data_dir = nullptr;
};

std::string data_dir(Settings& s, const Common& c) {
  return s.get<std::string>("data_dir", c.o_data_dir, c.data_dir, "MMVRP_DATA_DIR", "data");
}

SolveConfig make_solve_config(Settings& s, ModelFlags& f, const std::string& data, TransportMode transport) {
  SolveConfig cfg;
  cfg.session.model = s.get<std::string>("model", f.o_model, f.model, "MMVRP_MODEL", cfg.session.model);
  cfg.session.temperature = s.get("temperature", f.o_temperature, f.temperature, "MMVRP_TEMPERATURE", 1.0);
  cfg.session.max_output_tokens = s.get("max_output_tokens", f.o_max_tokens, f.max_tokens, "MMVRP_MAX_TOKENS", 4096);
  cfg.session.request_timeout = std::chrono::milliseconds(
      s.get("timeout_ms", f.o_timeout, f.timeout_ms, "MMVRP_TIMEOUT_MS", 120000));
  cfg.session.max_retries = s.get("max_retries", f.o_retries, f.max_retries, "MMVRP_MAX_RETRIES", 3);
  cfg.session.transport = transport;
  cfg.max_refine_iterations =
      s.get("max_iterations", f.o_iterations, f.max_iterations, "MMVRP_MAX_ITERATIONS", 5);
  process_rate_limiter().set_limit(
      s.get("rate_limit_rpm", f.o_rate, f.rate_limit, "MMVRP_RATE_LIMIT_RPM", 20));
  cfg.apply_repair = !f.no_repair;

  std::vector<std::string> names = f.examples;
  if (names.empty()) {
    for (auto n : reference::solved_example_names()) names.emplace_back(n);
  }
  for (const auto& n : names) {
    const fs::path vrp = fs::path(data) / "instances" / (n + ".vrp");
    const fs::path sol = fs::path(data) / "solutions" / (n + ".sol");
    if (!fs::exists(vrp) || !fs::exists(sol)) {
      throw UsageError(fmt::format("solved example {} needs {} and {}", n, vrp.string(), sol.string()));
    }
    cfg.examples.push_back({load_instance(vrp), load_solution(sol).solution});
  }
  check_solve_config(cfg);
  return cfg;
}

TransportMode parse_transport_flag(const std::string& text) {
  auto t = parse_transport_mode(text);
  if (!t) throw UsageError("transport must be live, record or replay");
  return *t;
}

PromptMode parse_mode_flag(const std::string& text) {
  auto m = parse_prompt_mode(text);
  if (!m) throw UsageError("mode must be mllm-v or mllm-t");
  return *m;
}

void require_key_for(TransportMode t) {
  if (t == TransportMode::kReplay) return;
  try {
    (void)endpoint_from_env();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

json routes_json(const Solution& s) {
  json out = json::array();
  for (const auto& r : s.routes) out.push_back(r);
  return out;
}

json validation_json(const ValidationReport& r) {
  return {{"duplicated", r.duplicated}, {"missing", r.missing}, {"extraneous", r.extraneous}};
}

json feasibility_json(const FeasibilityReport& f) {
  json viol = json::array();
  for (const auto& v : f.capacity_violations) viol.push_back({{"route", v.route_index + 1}, {"excess", v.excess}});
  return {{"id_valid", f.id_valid},
          {"served_exactly_once", f.served_exactly_once},
          {"route_demands", f.per_route_demand},
          {"capacity_violations", std::move(viol)},
          {"fleet_overrun", f.fleet_overrun},
          {"feasible", f.feasible()}};
}

std::string list_text(const std::vector<CustomerId>& ids) {
  return fmt::format("[{}]", fmt::join(ids, ","));
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

// --- subcommands -------------------------------------------------------------

int cmd_parse(const std::string& path) {
  const Instance inst = load_instance(path);
  json out = {{"schema_version", kSchemaVersion},
              {"command", "parse"},
              {"name", inst.name},
              {"customers", inst.size()},
              {"capacity", inst.capacity},
              {"fleet_size", inst.fleet_size},
              {"total_demand", inst.total_demand()},
              {"demand_exceeds_fleet", inst.demand_exceeds_fleet()},
              {"fingerprint", instance_fingerprint(inst)}};
  if (const auto* row = reference::find_instance_row(inst.name)) {
    json conflicts = json::array();
    if (row->vertices != static_cast<int>(inst.size()) + 1) {
      conflicts.push_back(fmt::format("vertices: table {} vs file {}", row->vertices, inst.size() + 1));
    }
    if (row->vehicles != inst.fleet_size) {
      conflicts.push_back(fmt::format("vehicles: table {} vs file {}", row->vehicles, inst.fleet_size));
    }
    if (row->capacity != inst.capacity) {
      conflicts.push_back(fmt::format("capacity: table {} vs file {}", row->capacity, inst.capacity));
    }
    out["table_conflicts"] = std::move(conflicts);
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_render(const std::string& inst_path, const std::string& sol_path, const std::string& out_dir,
               std::string stem) {
  const Instance inst = load_instance(inst_path);
  if (stem.empty()) stem = inst.name;
  write_rendered(render_layout(inst), out_dir, stem + "_layout");
  if (!sol_path.empty()) {
    const Solution sol = load_solution(sol_path).solution;
    write_rendered(render_routes(inst, sol), out_dir, stem + "_routes");
    write_rendered(render_pair(inst, sol), out_dir, stem + "_pair");
  }
  std::cout << fmt::format("wrote {} images to {}\n", sol_path.empty() ? 1 : 3, out_dir);
  return kOk;
}

int cmd_validate(const std::string& inst_path, const std::string& sol_path, bool as_json) {
  const Instance inst = load_instance(inst_path);
  const ParsedSolution parsed = load_solution(sol_path);
  const ValidationReport v = validate_ids(inst, parsed.solution);
  const FeasibilityReport f = check_feasibility(inst, parsed.solution);
  const bool clean = v.empty() && f.feasible();
  if (as_json) {
    json out = {{"schema_version", kSchemaVersion},
                {"command", "validate"},
                {"instance", inst.name},
                {"validation", validation_json(v)},
                {"feasibility", feasibility_json(f)},
                {"clean", clean}};
    if (f.id_valid) out["cost"] = solution_cost(inst, parsed.solution);
    if (parsed.declared_cost) out["declared_cost"] = *parsed.declared_cost;
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << fmt::format("instance: {}\n", inst.name);
    std::cout << fmt::format("duplicated: {}\nmissing: {}\nextraneous: {}\n", list_text(v.duplicated),
                             list_text(v.missing), list_text(v.extraneous));
    std::cout << fmt::format("served exactly once: {}\n", f.served_exactly_once ? "yes" : "no");
    for (const auto& c : f.capacity_violations) {
      std::cout << fmt::format("route {} exceeds capacity by {}\n", c.route_index + 1, c.excess);
    }
    if (f.fleet_overrun) std::cout << "note: more routes than the fleet size\n";
    if (f.id_valid) std::cout << fmt::format("cost: {}\n", solution_cost(inst, parsed.solution));
    std::cout << (clean ? "valid\n" : "INVALID\n");
  }
  return clean ? kOk : kNotClean;
}

int cmd_repair(const std::string& inst_path, const std::string& sol_path, const std::string& out_path) {
  const Instance inst = load_instance(inst_path);
  Solution sol = load_solution(sol_path).solution;
  const ValidationReport v = validate_ids(inst, sol);
  if (!v.empty()) sol = apply_fix_instruction(sol, v);
  const Solution fixed = repair_capacity(inst, sol);
  const double cost = solution_cost(inst, fixed);
  const std::string text = format_solution(fixed, cost);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
    std::cout << fmt::format("cost {} -> {}\n", solution_cost(inst, sol), cost);
  }
  return kOk;
}

json solve_json(const Instance& inst, const SolveResult& r, const Settings& s) {
  json out = {{"schema_version", kSchemaVersion},
              {"command", "solve"},
              {"instance", inst.name},
              {"fingerprint", r.metadata.target_fingerprint},
              {"mode", r.metadata.mode},
              {"transport", r.metadata.transport},
              {"routes", routes_json(r.final_solution)},
              {"cost_before_repair", r.cost_before_repair ? json(*r.cost_before_repair) : json(nullptr)},
              {"cost_after_repair", r.cost_after_repair ? json(*r.cost_after_repair) : json(nullptr)},
              {"validation", validation_json(r.validation)},
              {"feasibility", feasibility_json(r.feasibility)},
              {"refine_iterations", r.refine_iterations},
              {"used_fallback", r.used_fallback},
              {"llm_calls", r.llm_calls},
              {"observations", r.observations},
              {"transcript", r.transcript_path ? json(r.transcript_path->string()) : json(nullptr)},
              {"metadata",
               {{"run_index", r.metadata.run_index},
                {"step1_policy", r.metadata.step1_policy},
                {"model", r.metadata.model},
                {"temperature", r.metadata.temperature}}},
              {"effective_config", s.effective()}};
  return out;
}

int run_solve(Settings& s, const Common& c, ModelFlags& f, const std::string& inst_path,
              const std::string& out_dir, PromptMode mode, TransportMode transport) {
  if (transport == TransportMode::kReplay && f.transcript.empty()) {
    throw UsageError("replay transport requires --transcript");
  }
  require_key_for(transport);
  const Instance inst = load_instance(inst_path);
  SolveConfig cfg = make_solve_config(s, f, data_dir(s, c), transport);
  cfg.mode = mode;

  std::unique_ptr<ChatTransport> t;
  if (transport == TransportMode::kReplay) {
    t = std::make_unique<ReplayTransport>(load_transcript(f.transcript));
  } else {
    t = std::make_unique<HttpTransport>(endpoint_from_env());
  }
  SolveOptions opts;
  if (!f.transcript.empty()) {
    opts.transcript_path = f.transcript;
  } else if (transport == TransportMode::kRecord) {
    opts.transcript_path = fs::path(out_dir) / "transcript.jsonl";
  }

  const SolveResult r = solve(inst, cfg, *t, opts);
  const json out = solve_json(inst, r, s);

  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "result.json", out.dump(2) + "\n");
  write_file(fs::path(out_dir) / "solution.sol", format_solution(r.final_solution, r.final_cost()));
  write_rendered(render_routes(inst, r.final_solution, cfg.render), out_dir, "routes");

  const bool clean = r.validation.empty() && (!cfg.apply_repair || r.feasibility.feasible());
  std::cout << fmt::format("{} {}: cost {} ({} correction turn(s){}), {}\n", inst.name,
                           to_string(mode), r.final_cost(), r.refine_iterations,
                           r.used_fallback ? ", fallback fix applied" : "",
                           r.feasibility.feasible() ? "feasible" : "INFEASIBLE");
  return clean ? kOk : kNotClean;
}

int cmd_replay_summary(const std::string& path) {
  const Transcript t = load_transcript(path);
  json out = {{"schema_version", kSchemaVersion},
              {"command", "replay"},
              {"fingerprint", t.fingerprint},
              {"mode", t.mode},
              {"model", t.model},
              {"temperature", t.temperature},
              {"records", t.records.size()},
              {"images", t.image_count()}};
  std::int64_t prompt = 0, completion = 0;
  for (const auto& r : t.records) {
    prompt += r.usage.prompt_tokens;
    completion += r.usage.completion_tokens;
  }
  out["usage"] = {{"prompt_tokens", prompt}, {"completion_tokens", completion}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

struct BenchFlags {
  std::string manifest;
  std::vector<std::string> instances;
  std::vector<std::string> methods = {"mllm-t", "mllm-v"};
  int runs = 5;
  int workers = 1;
  std::uint64_t seed = 1;
  std::string transcripts;
  std::string out = "bench-out";
  CLI::Option* o_runs = nullptr;
  CLI::Option* o_workers = nullptr;
  CLI::Option* o_seed = nullptr;
};

int cmd_bench(Settings& s, const Common& c, ModelFlags& f, BenchFlags& b) {
  const TransportMode transport = parse_transport_flag(f.transport);
  std::vector<Method> methods;
  for (const auto& m : b.methods) {
    auto parsed = parse_method(m);
    if (!parsed) throw UsageError("unknown method " + m);
    methods.push_back(*parsed);
  }
  const bool model_runs = std::any_of(methods.begin(), methods.end(), [](Method m) {
    return m == Method::kText || m == Method::kVision;
  });
  if (model_runs && transport == TransportMode::kReplay && b.transcripts.empty()) {
    throw UsageError("replay transport requires --transcripts (directory of recorded runs)");
  }
  if (model_runs) require_key_for(transport);

  const std::string data = data_dir(s, c);
  const fs::path manifest = b.manifest.empty() ? fs::path(data) / "manifest.txt" : fs::path(b.manifest);
  const std::vector<ManifestEntry> entries = load_manifest(manifest);
  std::vector<std::string> names = b.instances;
  if (names.empty()) {
    for (const auto& e : entries) names.push_back(e.name);
  }

  std::vector<BenchInstance> instances;
  for (const auto& n : names) {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const ManifestEntry& e) { return e.name == n; });
    if (it == entries.end()) throw UsageError(fmt::format("instance {} is not in manifest {}", n, manifest.string()));
    BenchInstance bi{load_instance(it->path), std::nullopt};
    if (const auto* row = reference::find_result_row(n)) {
      bi.optimal = row->optimal;
    } else if (const fs::path sol = fs::path(data) / "solutions" / (n + ".sol"); fs::exists(sol)) {
      if (auto declared = load_solution(sol).declared_cost) bi.optimal = std::llround(*declared);
    }
    instances.push_back(std::move(bi));
  }

  BenchConfig cfg;
  cfg.methods = methods;
  cfg.runs = s.get("runs", b.o_runs, b.runs, nullptr, 5);
  cfg.workers = s.get("workers", b.o_workers, b.workers, "MMVRP_WORKERS", 1);
  cfg.seed = s.get<std::uint64_t>("seed", b.o_seed, b.seed, nullptr, 1);
  if (model_runs) cfg.solve = make_solve_config(s, f, data, transport);
  cfg.output_dir = b.out;
  if (!b.transcripts.empty()) cfg.transcript_dir = b.transcripts;

  const std::string dir = b.transcripts;
  cfg.transport = [transport, dir](const Instance& target, PromptMode mode,
                                   int run) -> std::unique_ptr<ChatTransport> {
    if (transport == TransportMode::kReplay) {
      return std::make_unique<ReplayTransport>(
          load_transcript(fs::path(dir) / transcript_file_name(target.name, mode, run)));
    }
    return std::make_unique<HttpTransport>(endpoint_from_env());
  };

  const BenchReport report = run_benchmark(instances, cfg);
  json meta = {{"schema_version", kSchemaVersion},
               {"command", "bench"},
               {"instances", names},
               {"methods", b.methods},
               {"transport", std::string(to_string(transport))},
               {"step1_policy", "per-run"},
               {"effective_config", s.effective()}};
  write_file(fs::path(b.out) / "run.json", meta.dump(2) + "\n");
  std::cout << report_markdown(report);
  return report.all_succeeded() ? kOk : kNotClean;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const Unservable& e) {
    std::cerr << "unservable: " << e.what() << '\n';
    return kUnservable;
  } catch (const TransportError& e) {
    std::cerr << "transport error: " << e.what() << '\n';
    return kTransport;
  } catch (const ReplayExhausted& e) {
    std::cerr << "replay exhausted: " << e.what() << '\n';
    return kTransport;
  } catch (const ReplayMismatch& e) {
    std::cerr << "replay mismatch: " << e.what() << '\n';
    return kTransport;
  } catch (const CorruptTranscript& e) {
    std::cerr << "corrupt transcript: " << e.what() << '\n';
    return kTransport;
  } catch (const NoSolutionAfterRetry& e) {
    std::cerr << "no solution: " << e.what() << '\n';
    return kTransport;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CVRP solving with multimodal language-model prompts"};
  app.footer(kExitHelp);
  app.require_subcommand(1);

  Common common;
  app.add_option("--config", common.config_path, "JSON file with default settings");
  common.o_data_dir = app.add_option("--data-dir", common.data_dir,
                                     "Directory with instances/, solutions/ and manifest.txt");

  std::string instance, solution, out_dir, stem;
  bool as_json = false;

  auto* parse = app.add_subcommand("parse", "Parse a .vrp file and print a summary");
  parse->add_option("--instance,instance", instance, "Instance file")->required();

  auto* render = app.add_subcommand("render", "Draw the layout (and routes) of an instance");
  render->add_option("--instance", instance, "Instance file")->required();
  render->add_option("--solution", solution, "Solution file (.sol)");
  render->add_option("--out", out_dir, "Output directory")->required();
  render->add_option("--stem", stem, "File name stem (default: instance name)");

  auto* validate = app.add_subcommand("validate", "Check a solution file against an instance");
  validate->add_option("--instance", instance, "Instance file")->required();
  validate->add_option("--solution", solution, "Solution file (.sol)")->required();
  validate->add_flag("--json", as_json, "Machine-readable output");

  auto* repair = app.add_subcommand("repair", "Fix IDs and capacity of a solution file");
  repair->add_option("--instance", instance, "Instance file")->required();
  repair->add_option("--solution", solution, "Solution file (.sol)")->required();
  repair->add_option("--out", out_dir, "Output .sol file (default: stdout)");

  ModelFlags model;
  auto* solve_cmd = app.add_subcommand("solve", "Run the three-step prompting workflow on one instance");
  solve_cmd->add_option("--instance", instance, "Instance file")->required();
  solve_cmd->add_option("--mode", model.mode, "mllm-v (text + images) or mllm-t (text only)");
  solve_cmd->add_option("--transport", model.transport, "live, record or replay");
  solve_cmd->add_option("--transcript", model.transcript, "Transcript to replay, or to record into");
  solve_cmd->add_option("--out", out_dir, "Output directory")->required();
  model.add_to(solve_cmd);

  ModelFlags replay_model;
  auto* replay = app.add_subcommand("replay", "Summarise a transcript, or re-run a solve from it");
  replay->add_option("--transcript", replay_model.transcript, "Transcript file")->required();
  replay->add_option("--instance", instance, "Re-run the solve for this instance");
  replay->add_option("--out", out_dir, "Output directory for the re-run");
  replay->add_option("--mode", replay_model.mode, "Mode (default: the transcript's mode tag)");
  replay_model.add_to(replay);

  BenchFlags bench;
  ModelFlags bench_model;
  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark and write report files");
  bench_cmd->add_option("--manifest", bench.manifest, "Manifest file (default: <data-dir>/manifest.txt)");
  bench_cmd->add_option("--instances", bench.instances, "Instance names (default: whole manifest)")->delimiter(',');
  bench_cmd->add_option("--methods", bench.methods, "mllm-t, mllm-v, random, savings")->delimiter(',');
  bench.o_runs = bench_cmd->add_option("--runs", bench.runs, "Runs per instance and method")->check(CLI::PositiveNumber);
  bench.o_workers = bench_cmd->add_option("--workers", bench.workers, "Parallel jobs")->check(CLI::PositiveNumber);
  bench.o_seed = bench_cmd->add_option("--seed", bench.seed, "Base seed of the random baseline");
  bench_cmd->add_option("--transport", bench_model.transport, "live, record or replay");
  bench_cmd->add_option("--transcripts", bench.transcripts, "Directory of per-run transcripts");
  bench_cmd->add_option("--out", bench.out, "Output directory");
  bench_model.add_to(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  return guarded([&]() -> int {
    Settings settings;
    settings.load_file(common.config_path);
    if (*parse) return cmd_parse(instance);
    if (*render) return cmd_render(instance, solution, out_dir, stem);
    if (*validate) return cmd_validate(instance, solution, as_json);
    if (*repair) return cmd_repair(instance, solution, out_dir);
    if (*solve_cmd) {
      return run_solve(settings, common, model, instance, out_dir, parse_mode_flag(model.mode),
                       parse_transport_flag(model.transport));
    }
    if (*replay) {
      if (instance.empty()) return cmd_replay_summary(replay_model.transcript);
      if (out_dir.empty()) throw UsageError("--out is required when re-running a transcript");
      PromptMode mode = parse_mode_flag(replay_model.mode);
      if (replay->get_option("--mode")->count() == 0) {
        const Transcript t = load_transcript(replay_model.transcript);
        if (auto m = parse_prompt_mode(t.mode)) mode = *m;
      }
      return run_solve(settings, common, replay_model, instance, out_dir, mode, TransportMode::kReplay);
    }
    if (*bench_cmd) return cmd_bench(settings, common, bench_model, bench);
    return kUsage;
  });
}
