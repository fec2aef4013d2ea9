#include "mmvrp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "mmvrp/baselines.hpp"
#include "mmvrp/error.hpp"
#include "mmvrp/render.hpp"
#include "mmvrp/tsplib.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;

namespace mmvrp {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kText: return "MLLM-T";
    case Method::kVision: return "MLLM-V";
    case Method::kRandom: return "Random";
    case Method::kSavings: return "Savings";
  }
  return "MLLM-V";
}

std::optional<Method> parse_method(std::string_view text) {
  if (auto mode = parse_prompt_mode(text)) {
    return *mode == PromptMode::kText ? Method::kText : Method::kVision;
  }
  if (detail::iequals(text, "random")) return Method::kRandom;
  if (detail::iequals(text, "savings")) return Method::kSavings;
  return std::nullopt;
}

std::optional<double> BenchRow::best_cost() const {
  if (run_costs.empty()) return std::nullopt;
  return *std::min_element(run_costs.begin(), run_costs.end());
}

std::optional<double> BenchRow::average_cost() const {
  if (run_costs.empty()) return std::nullopt;
  return std::accumulate(run_costs.begin(), run_costs.end(), 0.0) /
         static_cast<double>(run_costs.size());
}

std::optional<double> BenchRow::gap_ratio() const {
  const auto avg = average_cost();
  if (!avg || !optimal || *optimal <= 0) return std::nullopt;
  return gap(*avg, static_cast<double>(*optimal));
}

const BenchRow* BenchReport::find(std::string_view problem, Method method) const {
  for (const auto& r : rows) {
    if (r.problem == problem && r.method == method) return &r;
  }
  return nullptr;
}

bool BenchReport::all_succeeded() const {
  return std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.runs_ok() > 0; });
}

std::string transcript_file_name(std::string_view instance, PromptMode mode, int run) {
  return fmt::format("{}_{}_run{}.jsonl", instance, mode == PromptMode::kText ? "mllm-t" : "mllm-v",
                     run);
}

namespace {

struct Job {
  std::size_t row;
  int run;
};

struct JobResult {
  std::optional<double> cost;
  std::optional<Solution> solution;
  std::string failure;
};

JobResult run_job(const BenchInstance& bi, Method method, int run, const BenchConfig& config) {
  JobResult out;
  try {
    Solution sol;
    switch (method) {
      case Method::kRandom:
        sol = random_solution(bi.instance, config.seed + static_cast<std::uint64_t>(run));
        break;
      case Method::kSavings:
        sol = savings_solve(bi.instance);
        break;
      default: {
        if (!config.transport) throw Error("no transport configured for model runs");
        SolveConfig sc = config.solve;
        sc.mode = method == Method::kText ? PromptMode::kText : PromptMode::kVision;
        auto transport = config.transport(bi.instance, sc.mode, run);
        SolveOptions opts;
        opts.run_index = run;
        opts.sleeper = config.sleeper;
        if (config.transcript_dir) {
          opts.transcript_path = *config.transcript_dir / transcript_file_name(bi.instance.name, sc.mode, run);
        }
        SolveResult res = solve(bi.instance, sc, *transport, opts);
        sol = std::move(res.final_solution);
        // without repair this may be infeasible; it still counts
        out.cost = res.final_cost();
        out.solution = std::move(sol);
        return out;
      }
    }
    out.cost = solution_cost(bi.instance, sol);
    out.solution = std::move(sol);
  } catch (const std::exception& e) {
    out.failure = fmt::format("run {}: {}", run, e.what());
  }
  return out;
}

std::string cost_text(std::optional<double> v) {
  if (!v) return "-";
  return detail::format_number(std::round(*v * 100.0) / 100.0);
}

std::string gap_text(std::optional<double> g) { return g ? format_gap_percent(*g) : "-"; }

// One line per instance, methods side by side.
std::vector<std::vector<std::string>> table_cells(const BenchReport& report, bool header) {
  std::vector<std::vector<std::string>> out;
  if (header) {
    std::vector<std::string> h = {"Problem", "Optimal"};
    for (Method m : report.methods) {
      for (const char* col : {"B.Cost", "A.Cost", "Gap"}) h.push_back(fmt::format("{} {}", to_string(m), col));
    }
    for (Method m : report.methods) h.push_back(fmt::format("{} Runs", to_string(m)));
    out.push_back(std::move(h));
  }
  const std::size_t k = report.methods.size();
  for (std::size_t i = 0; k && i + k <= report.rows.size(); i += k) {
    const BenchRow& first = report.rows[i];
    std::vector<std::string> line = {first.problem,
                                     first.optimal ? std::to_string(*first.optimal) : "-"};
    for (std::size_t j = 0; j < k; ++j) {
      const BenchRow& r = report.rows[i + j];
      line.push_back(cost_text(r.best_cost()));
      line.push_back(cost_text(r.average_cost()));
      line.push_back(gap_text(r.gap_ratio()));
    }
    for (std::size_t j = 0; j < k; ++j) {
      const BenchRow& r = report.rows[i + j];
      line.push_back(fmt::format("{}/{}", r.runs_ok(), r.runs_requested));
    }
    out.push_back(std::move(line));
  }
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

BenchReport run_benchmark(const std::vector<BenchInstance>& instances, const BenchConfig& config) {
  if (config.runs < 1) throw Error("runs must be positive");
  if (config.methods.empty()) throw Error("no methods selected");

  BenchReport report;
  report.methods = config.methods;
  std::vector<Job> jobs;
  for (const auto& bi : instances) {
    for (Method m : config.methods) {
      BenchRow row;
      row.problem = bi.instance.name;
      row.optimal = bi.optimal;
      row.method = m;
      row.runs_requested = m == Method::kSavings ? 1 : config.runs;  // savings is deterministic
      for (int r = 1; r <= row.runs_requested; ++r) jobs.push_back({report.rows.size(), r});
      report.rows.push_back(std::move(row));
    }
  }

  // Results land in fixed slots, so the report does not depend on scheduling.
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  const std::size_t methods = config.methods.size();
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      const Job& job = jobs[j];
      const BenchInstance& bi = instances[job.row / methods];
      results[j] = run_job(bi, report.rows[job.row].method, job.run, config);
    }
  };
  const int workers = std::max(1, std::min<int>(config.workers, static_cast<int>(jobs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    BenchRow& row = report.rows[jobs[j].row];
    JobResult& res = results[j];
    if (!res.cost) {
      row.failures.push_back(std::move(res.failure));
      continue;
    }
    if (!row.best_cost() || *res.cost < *row.best_cost()) row.best_solution = std::move(res.solution);
    row.run_costs.push_back(*res.cost);
  }

  if (config.output_dir) {
    const fs::path dir = *config.output_dir;
    fs::create_directories(dir / "plots");
    write_file(dir / "report.csv", report_csv(report));
    write_file(dir / "report.md", report_markdown(report));
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const BenchRow& row = report.rows[i];
      if (!row.best_solution) continue;
      const Instance& inst = instances[i / methods].instance;
      std::string tag(to_string(row.method));
      std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char c) { return std::tolower(c); });
      const RenderedImage img = render_routes(inst, *row.best_solution, config.solve.render);
      write_file(dir / "plots" / fmt::format("{}_{}_best.png", row.problem, tag),
                 std::string(img.png.bytes.begin(), img.png.bytes.end()));
    }
  }
  return report;
}

std::string report_csv(const BenchReport& report) {
  std::string out;
  for (const auto& line : table_cells(report, true)) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out += ',';
      out += line[i];
    }
    out += '\n';
  }
  return out;
}

std::string report_markdown(const BenchReport& report) {
  const auto cells = table_cells(report, true);
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    out += '|';
    for (const auto& c : cells[r]) out += fmt::format(" {} |", c);
    out += '\n';
    if (r == 0) {
      out += '|';
      for (std::size_t i = 0; i < cells[r].size(); ++i) out += i == 0 ? " --- |" : " ---: |";
      out += '\n';
    }
  }
  out +=
      "\nB.Cost: lowest cost over the successful runs. "
      "A.Cost: mean cost over the successful runs. Gap: (A.Cost - Optimal) / Optimal, whole "
      "percent. Runs: successful / requested; failed runs are excluded from both costs.\n";

  bool any_failure = false;
  for (const auto& row : report.rows) {
    for (const auto& f : row.failures) {
      if (!any_failure) out += "\nFailed runs:\n\n";
      any_failure = true;
      out += fmt::format("- {} {}: {}\n", row.problem, to_string(row.method), f);
    }
  }
  return out;
}

std::vector<ManifestEntry> load_manifest(const fs::path& manifest) {
  const std::string text = read_text_file(manifest);
  const fs::path base = manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
  std::vector<ManifestEntry> out;
  int line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::size_t arrow = line.find("->");
    std::size_t width = 2;
    if (arrow == std::string_view::npos) {
      arrow = line.find("\xE2\x86\x92");  // UTF-8 right arrow
      width = 3;
    }
    if (arrow == std::string_view::npos) {
      throw ParseError(ParseError::Kind::kMalformedRow, line_no,
                       fmt::format("{}:{}: expected 'name -> path'", manifest.string(), line_no));
    }
    ManifestEntry e;
    e.name = std::string(detail::trim(line.substr(0, arrow)));
    const fs::path p(std::string(detail::trim(line.substr(arrow + width))));
    e.path = p.is_absolute() ? p : base / p;
    if (e.name.empty() || p.empty()) {
      throw ParseError(ParseError::Kind::kMalformedRow, line_no,
                       fmt::format("{}:{}: expected 'name -> path'", manifest.string(), line_no));
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace mmvrp
