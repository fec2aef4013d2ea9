#include <gtest/gtest.h>

#include <fstream>
#include <numeric>

#include "mmvrp/baselines.hpp"
#include "mmvrp/bench.hpp"
#include "mmvrp/error.hpp"
#include "test_support.hpp"

using namespace mmvrp;

namespace {

std::string xml(const Solution& s) { return solution_to_xml(XmlSolutionDoc::from_solution(s)); }

SolveConfig solve_config() {
  SolveConfig cfg;
  cfg.examples = support::solved_examples();
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Random, SingleCustomer) {
  const Instance inst = make_instance("one-n2-k1", {0, 0}, {{{3, 4}, 2}}, 5, 1);
  EXPECT_EQ(random_solution(inst, 1), (Solution{{{1}}}));
}

TEST(Random, SameSeedSameSolution) {
  const Instance inst = support::named("A-n32-k5");
  EXPECT_EQ(random_solution(inst, 42), random_solution(inst, 42));
  EXPECT_NE(random_solution(inst, 42), random_solution(inst, 43));
}

TEST(Random, AlwaysFeasible) {
  const Instance inst = support::named("P-n19-k2");
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    ASSERT_TRUE(check_feasibility(inst, random_solution(inst, seed)).feasible()) << seed;
  }
}

TEST(Random, Unservable) {
  const Instance inst = make_instance("big-n2-k1", {0, 0}, {{{1, 1}, 9}}, 5, 1);
  EXPECT_THROW(random_solution(inst, 1), Unservable);
  EXPECT_THROW(savings_solve(inst), Unservable);
}

TEST(Savings, TwoCustomersMerge) {
  // Both far out on the same side: saving is positive and capacity allows.
  const Instance inst = make_instance("two-n3-k1", {0, 0}, {{{10, 0}, 1}, {{10, 1}, 1}}, 5, 1);
  const Solution s = savings_solve(inst);
  ASSERT_EQ(s.routes.size(), 1u);
  EXPECT_EQ(s.routes[0].size(), 2u);
}

TEST(Savings, CapacityKeepsSingletons) {
  const Instance inst = make_instance("two-n3-k2", {0, 0}, {{{10, 0}, 4}, {{10, 1}, 4}}, 5, 2);
  EXPECT_EQ(savings_solve(inst), (Solution{{{1}, {2}}}));
}

TEST(Savings, OppositeSidesStaySeparate) {
  // Saving d(0,1)+d(0,2)-d(1,2) is zero, so no merge.
  const Instance inst = make_instance("opp-n3-k2", {0, 0}, {{{10, 0}, 1}, {{-10, 0}, 1}}, 5, 2);
  EXPECT_EQ(savings_solve(inst), (Solution{{{1}, {2}}}));
}

TEST(Savings, BeatsRandomMean) {
  const Instance inst = support::named("P-n19-k2");
  const Solution s = savings_solve(inst);
  ASSERT_TRUE(check_feasibility(inst, s).feasible());
  double sum = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) sum += solution_cost(inst, random_solution(inst, seed));
  EXPECT_LT(solution_cost(inst, s), sum / 100);
}

TEST(Savings, FeasibleOnAllInstances) {
  for (const auto& row : reference::instance_table()) {
    const Instance inst = support::named(std::string(row.name));
    EXPECT_TRUE(check_feasibility(inst, savings_solve(inst)).feasible()) << row.name;
  }
}

TEST(Bench, ScriptedRunsAndFailures) {
  const Instance p19 = support::named("P-n19-k2");
  BenchConfig cfg;
  cfg.methods = {Method::kVision, Method::kRandom, Method::kSavings};
  cfg.runs = 5;
  cfg.workers = 3;
  cfg.solve = solve_config();
  cfg.transport = [](const Instance& inst, PromptMode, int run) -> std::unique_ptr<ChatTransport> {
    if (run == 3) return std::make_unique<ScriptedTransport>(std::vector<std::string>{"obs", "prose", "prose"});
    return std::make_unique<ScriptedTransport>(
        std::vector<std::string>{"obs", xml(random_solution(inst, 100 + run))});
  };
  const auto out = support::scratch_dir("bench");
  cfg.output_dir = out;
  const BenchReport report = run_benchmark({{p19, 213}}, cfg);

  const BenchRow* v = report.find("P-n19-k2", Method::kVision);
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->runs_requested, 5);
  EXPECT_EQ(v->runs_ok(), 4);
  ASSERT_EQ(v->failures.size(), 1u);
  EXPECT_NE(v->failures[0].find("run 3"), std::string::npos);
  double sum = 0, best = 1e18;
  for (int run : {1, 2, 4, 5}) {
    const double c = solution_cost(p19, random_solution(p19, 100 + run));
    sum += c;
    best = std::min(best, c);
  }
  EXPECT_DOUBLE_EQ(*v->average_cost(), sum / 4);
  EXPECT_DOUBLE_EQ(*v->best_cost(), best);

  const BenchRow* r = report.find("P-n19-k2", Method::kRandom);
  ASSERT_NE(r, nullptr);
  double rsum = 0;
  for (int run = 1; run <= 5; ++run) rsum += solution_cost(p19, random_solution(p19, cfg.seed + run));
  EXPECT_DOUBLE_EQ(*r->average_cost(), rsum / 5);

  const BenchRow* s = report.find("P-n19-k2", Method::kSavings);
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->runs_requested, 1);
  EXPECT_DOUBLE_EQ(*s->best_cost(), solution_cost(p19, savings_solve(p19)));
  EXPECT_TRUE(report.all_succeeded());

  EXPECT_TRUE(std::filesystem::exists(out / "report.csv"));
  EXPECT_TRUE(std::filesystem::exists(out / "plots" / "P-n19-k2_mllm-v_best.png"));
  EXPECT_TRUE(std::filesystem::exists(out / "plots" / "P-n19-k2_savings_best.png"));
  const std::string md = slurp(out / "report.md");
  EXPECT_NE(md.find("Failed runs"), std::string::npos);
  EXPECT_NE(md.find("| 4/5 |"), std::string::npos);
  std::filesystem::remove_all(out);
}

TEST(Bench, WorkerCountDoesNotChangeReport) {
  const std::vector<BenchInstance> insts = {{support::named("P-n19-k2"), 213},
                                            {support::named("A-n32-k5"), 788}};
  BenchConfig cfg;
  cfg.methods = {Method::kRandom, Method::kSavings};
  cfg.runs = 4;
  cfg.workers = 1;
  const std::string one = report_csv(run_benchmark(insts, cfg));
  cfg.workers = 4;
  EXPECT_EQ(report_csv(run_benchmark(insts, cfg)), one);
}

TEST(Bench, TranscriptsPerRun) {
  const Instance p19 = support::named("P-n19-k2");
  BenchConfig cfg;
  cfg.methods = {Method::kText};
  cfg.runs = 2;
  cfg.solve = solve_config();
  cfg.solve.session.transport = TransportMode::kRecord;
  cfg.transport = [](const Instance& inst, PromptMode, int run) -> std::unique_ptr<ChatTransport> {
    return std::make_unique<ScriptedTransport>(std::vector<std::string>{"obs", xml(random_solution(inst, run))});
  };
  const auto dir = support::scratch_dir("bench-tr");
  cfg.transcript_dir = dir;
  run_benchmark({{p19, 213}}, cfg);
  EXPECT_EQ(transcript_file_name("P-n19-k2", PromptMode::kText, 1), "P-n19-k2_mllm-t_run1.jsonl");
  for (int run : {1, 2}) {
    const Transcript t = load_transcript(dir / transcript_file_name("P-n19-k2", PromptMode::kText, run));
    EXPECT_EQ(t.records.size(), 2u);
    EXPECT_EQ(t.mode, "MLLM-T");
  }
  std::filesystem::remove_all(dir);
}

TEST(Bench, MissingTransportFailsEveryRun) {
  BenchConfig cfg;
  cfg.methods = {Method::kText};
  cfg.runs = 2;
  cfg.solve = solve_config();
  const BenchReport report = run_benchmark({{support::toy(), std::nullopt}}, cfg);
  EXPECT_EQ(report.rows[0].failures.size(), 2u);
  EXPECT_FALSE(report.all_succeeded());
  EXPECT_NE(report_csv(report).find(",-,-,-,0/2"), std::string::npos);
}

TEST(Report, ColumnOrder) {
  BenchReport report;
  report.methods = {Method::kText, Method::kVision};
  report.rows = {{"P-n19-k2", 213, Method::kText, 5, {263, 321}, {}, {}},
                 {"P-n19-k2", 213, Method::kVision, 5, {235, 285}, {}, {}}};
  const std::string csv = report_csv(report);
  EXPECT_EQ(csv,
            "Problem,Optimal,MLLM-T B.Cost,MLLM-T A.Cost,MLLM-T Gap,MLLM-V B.Cost,MLLM-V A.Cost,"
            "MLLM-V Gap,MLLM-T Runs,MLLM-V Runs\n"
            "P-n19-k2,213,263,292,37%,235,260,22%,2/5,2/5\n");
  const std::string md = report_markdown(report);
  EXPECT_NE(md.find("| Problem | Optimal | MLLM-T B.Cost |"), std::string::npos);
  EXPECT_NE(md.find("A.Cost: mean cost"), std::string::npos);
  EXPECT_EQ(md.find("Failed runs"), std::string::npos);
}

TEST(Report, GapFromPublishedAverages) {
  // Gap recomputed from the printed averages and optima.
  struct Case { const char* name; std::int64_t avg; long gap; };
  for (const Case& c : {Case{"P-n19-k2", 260, 22}, Case{"E-n51-k5", 881, 68}, Case{"X-n153-k22", 49732, 134}}) {
    const auto* row = reference::find_result_row(c.name);
    ASSERT_NE(row, nullptr);
    BenchRow r{c.name, row->optimal, Method::kVision, 1, {double(c.avg)}, {}, {}};
    EXPECT_EQ(gap_whole_percent(*r.gap_ratio()), c.gap) << c.name;
  }
}

TEST(Methods, Names) {
  EXPECT_EQ(parse_method("mllm-v"), Method::kVision);
  EXPECT_EQ(parse_method("Savings"), Method::kSavings);
  EXPECT_EQ(to_string(Method::kRandom), "Random");
  EXPECT_FALSE(parse_method("foo"));
}

TEST(Manifest, Parses) {
  const auto dir = support::scratch_dir("manifest");
  {
    std::ofstream out(dir / "m.txt");
    out << "# comment\n\nA-n32-k5 -> inst/A.vrp\nB \xE2\x86\x92 /abs/B.vrp\n";
  }
  const auto m = load_manifest(dir / "m.txt");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].name, "A-n32-k5");
  EXPECT_EQ(m[0].path, dir / "inst/A.vrp");
  EXPECT_EQ(m[1].path, std::filesystem::path("/abs/B.vrp"));
  {
    std::ofstream out(dir / "bad.txt");
    out << "A -> a\njust a name\n";
  }
  try {
    load_manifest(dir / "bad.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  std::filesystem::remove_all(dir);
}

TEST(Manifest, ShippedManifestCoversTable) {
  const auto m = load_manifest(support::data_dir() / "manifest.txt");
  EXPECT_EQ(m.size(), reference::instance_table().size());
  for (const auto& e : m) EXPECT_TRUE(std::filesystem::exists(e.path)) << e.name;
}
