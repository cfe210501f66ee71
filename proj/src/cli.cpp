// Copyright 2026 The recbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "recbench/cli.hpp"

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "recbench/cache_sim.hpp"
#include "recbench/harness.hpp"
#include "recbench/model_config.hpp"
#include "recbench/report.hpp"
#include "recbench/types.hpp"
#include "recbench/workload.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace recbench::cli {

namespace {

constexpr int code(ExitStatus s) { return static_cast<int>(s); }

std::string default_out_dir() {
  if (const char* env = std::getenv("RECBENCH_OUT"); env != nullptr && *env != '\0') return env;
  return "recbench_out";
}

// ---------------------------------------------------------------------------
// bench run / colocate / sweep

struct BenchArgs {
  std::string model = "rmc1";
  double scale = 0.01;
  std::vector<std::int64_t> batches{1};
  std::vector<int> colocate{1};
  double duration = 5.0;
  double warmup = -1.0;  // < 0: 10% of duration
  std::int64_t warmup_queries = 100;
  std::int64_t queries = 0;  // 0: run for the duration
  int concurrency = 1;
  double rate = 0.0;  // > 0: open loop
  double sla_ms = 450.0;
  double sla_pctl = 99.0;
  bool pin = false;
  bool shared_weights = false;
  bool require_sla = false;
  bool no_timing = false;
  std::uint64_t seed = 0;
  std::string out;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BenchArgs, model, scale, batches, colocate, duration, warmup,
                                   warmup_queries, queries, concurrency, rate, sla_ms, sla_pctl,
                                   pin, shared_weights, require_sla, no_timing, seed, out)

void add_bench_flags(CLI::App& cmd, BenchArgs& a, std::string& manifest_in, bool batches_multi,
                     bool colocate_flag) {
  cmd.add_option("--model", a.model, "rmc1|rmc2|rmc3 or a JSON model config");
  cmd.add_option("--scale", a.scale, "Embedding row multiplier for presets");
  if (batches_multi) {
    cmd.add_option("--batch", a.batches, "Batch size (repeatable)");
  } else {
    cmd.add_option("--batch", a.batches, "Batch size")->expected(1);
  }
  if (colocate_flag) cmd.add_option("--colocate", a.colocate, "Co-located instances (repeatable)");
  cmd.add_option("--duration", a.duration, "Seconds per configuration point, warmup included");
  cmd.add_option("--warmup", a.warmup, "Warmup seconds (default: 10% of duration)");
  cmd.add_option("--warmup-queries", a.warmup_queries, "Minimum warmup queries per instance");
  cmd.add_option("--queries", a.queries, "Measured queries per instance (overrides duration)");
  cmd.add_option("--concurrency", a.concurrency, "Closed-loop outstanding queries per instance");
  cmd.add_option("--rate", a.rate, "Open-loop Poisson arrival rate (queries/s per instance)");
  cmd.add_option("--sla-ms", a.sla_ms, "SLA latency threshold in milliseconds");
  cmd.add_option("--sla-pctl", a.sla_pctl, "SLA percentile");
  cmd.add_flag("--pin", a.pin, "Pin each instance to its own core");
  cmd.add_flag("--shared-weights", a.shared_weights, "Co-located instances share one weight copy");
  cmd.add_flag("--require-sla", a.require_sla, "Exit 3 when no point meets the SLA");
  cmd.add_flag("--no-timing", a.no_timing, "Skip per-operator timing");
  cmd.add_option("--seed", a.seed, "Root seed");
  cmd.add_option("--out", a.out, "Output directory (default: $RECBENCH_OUT or ./recbench_out)");
  cmd.add_option("--from-manifest", manifest_in, "Re-run the arguments recorded in a manifest");
}

RunPlan make_plan(const BenchArgs& a, const RecModelConfig& config) {
  RunPlan plan;
  plan.model = config;
  plan.scale = a.scale;
  plan.batch_sizes = a.batches;
  plan.colocation_degrees = a.colocate;
  const double warmup = a.warmup >= 0 ? a.warmup : 0.1 * a.duration;
  plan.arrival = a.rate > 0 ? ArrivalPlan::open_loop(a.rate, a.duration, warmup)
                            : ArrivalPlan::closed_loop(a.concurrency, a.duration, warmup);
  plan.pinning = a.pin ? Pinning::kOneCorePerInstance : Pinning::kNone;
  plan.seed = a.seed;
  plan.sla = {a.sla_ms, a.sla_pctl};
  plan.warmup_queries = a.warmup_queries;
  if (a.queries > 0) plan.measured_queries = a.queries;
  plan.shared_weights = a.shared_weights;
  plan.timing = a.no_timing ? Timing::kOff : Timing::kOn;
  return plan;
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) {
  g_interrupted.store(true);
  request_stop();
}

class SignalScope {
 public:
  SignalScope() {
    clear_stop();
    prev_int_ = std::signal(SIGINT, on_signal);
    prev_term_ = std::signal(SIGTERM, on_signal);
  }
  ~SignalScope() {
    std::signal(SIGINT, prev_int_);
    std::signal(SIGTERM, prev_term_);
    clear_stop();
  }

 private:
  using Handler = void (*)(int);
  Handler prev_int_;
  Handler prev_term_;
};

void print_point(std::ostream& out, const RunResult& r) {
  const auto& s = r.pooled;
  out << r.point.model << " scale=" << r.point.scale << " batch=" << r.point.batch
      << " colocation=" << r.point.colocation;
  if (!r.valid) {
    out << " INVALID: " << r.error << '\n';
    return;
  }
  out << " count=" << s.count << " mean=" << report::format_double(s.mean_us, 1)
      << "us p50=" << report::format_double(s.p50_us, 1)
      << "us p99=" << report::format_double(s.p99_us, 1)
      << "us tput=" << report::format_double(s.tput_inf_s, 1)
      << " inf/s items=" << report::format_double(s.tput_items_s, 1)
      << "/s sla_viol=" << report::format_double(s.sla_violation_fraction, 4)
      << " fc=" << report::format_double(r.breakdown[OpKind::kFC], 3)
      << " sls=" << report::format_double(r.breakdown[OpKind::kSLS], 3) << '\n';
}

enum class BenchMode { kRun, kColocate, kSweep };

const char* mode_name(BenchMode m) {
  switch (m) {
    case BenchMode::kRun: return "bench run";
    case BenchMode::kColocate: return "bench colocate";
    case BenchMode::kSweep: return "bench sweep";
  }
  return "bench";
}

int cmd_bench(BenchMode mode, BenchArgs args, const std::string& manifest_in, bool out_given,
              std::ostream& out, std::ostream& err) {
  if (!manifest_in.empty()) {
    std::ifstream in(manifest_in);
    if (!in) throw ConfigError("cannot read manifest '" + manifest_in + "'");
    const json m = json::parse(in);
    const std::string out_dir = args.out;
    args = m.at("args").get<BenchArgs>();
    if (out_given) args.out = out_dir;
  }
  if (args.out.empty()) args.out = default_out_dir();
  if (mode == BenchMode::kRun) args.colocate = {1};
  if (mode == BenchMode::kColocate && args.batches.size() != 1) {
    throw ConfigError("bench colocate takes exactly one --batch");
  }

  const RecModelConfig config = resolve_model(args.model, args.scale);
  const RunPlan plan = make_plan(args, config);
  validate_plan(plan);
  const HostInfo host = host_info();
  const int max_n = *std::max_element(args.colocate.begin(), args.colocate.end());
  if (args.pin && static_cast<unsigned>(max_n) > host.cores) {
    throw ConfigError("--pin with " + std::to_string(max_n) + " instances needs at least " +
                      std::to_string(max_n) + " cores; this host has " +
                      std::to_string(host.cores));
  }

  fs::create_directories(args.out);
  const std::string started = report::utc_timestamp();
  SignalScope signals;
  g_interrupted.store(false);

  std::vector<RunResult> results;
  if (mode == BenchMode::kRun) {
    const ModelInstance instance = init_weights(config, derive_seed(args.seed, {kWeightsStream, 0}));
    for (auto batch : args.batches) {
      try {
        results.push_back(run_single(instance, plan, batch));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        RunResult failed;
        failed.valid = false;
        failed.error = e.what();
        failed.point = {config.name, args.scale, batch, 1};
        results.push_back(std::move(failed));
      }
      print_point(out, results.back());
      if (stop_requested()) break;
    }
  } else {
    results = sweep(plan);
    for (const auto& r : results) print_point(out, r);
  }

  std::vector<report::ResultRow> rows;
  std::vector<PointResult> points;
  json errors = json::array();
  for (const auto& r : results) {
    if (r.valid) {
      rows.push_back(report::to_row(r));
      points.push_back(r.as_point());
    } else {
      errors.push_back({{"batch", r.point.batch}, {"colocation", r.point.colocation},
                        {"error", r.error}});
    }
  }

  const fs::path dir(args.out);
  {
    std::ofstream csv(dir / "results.csv");
    report::write_results_csv(csv, rows);
    std::ofstream bd(dir / "breakdown.csv");
    std::vector<RunResult> valid;
    for (const auto& r : results) {
      if (r.valid) valid.push_back(r);
    }
    report::write_breakdown_csv(bd, valid);
  }

  json lbt = nullptr;
  bool sla_met = false;
  if (!points.empty()) {
    const LbtResult w = latency_bounded_throughput(points, plan.sla);
    sla_met = w.qualified;
    lbt = {{"qualified", w.qualified},
           {"batch", points[w.index].point.batch},
           {"colocation", points[w.index].point.colocation},
           {"tput_items_s", w.tput_items_s}};
    out << (w.qualified ? "SLA winner: " : "no point meets the SLA; lowest latency: ")
        << "batch=" << points[w.index].point.batch
        << " colocation=" << points[w.index].point.colocation
        << " items/s=" << report::format_double(w.tput_items_s, 1) << '\n';
  }

  std::string pinning = "none";
  for (const auto& r : results) {
    if (r.pinning == PinningStatus::kUnavailable) pinning = "unavailable";
    else if (r.pinning == PinningStatus::kPinned && pinning == "none") pinning = "pinned";
  }

  const json manifest = {
      {"tool", "recbench"},
      {"version", RECBENCH_VERSION},
      {"command", mode_name(mode)},
      {"args", args},
      {"config", config},
      {"seeds",
       {{"root", args.seed},
        {"derivation",
         "weights(instance) = derive_seed(root, [1, instance]); "
         "request(instance, query) = derive_seed(root, [2, instance, query]); "
         "table ids = derive_seed(request, [table]); "
         "arrivals(instance) = derive_seed(root, [3, instance])"}}},
      {"sla", {{"threshold_ms", plan.sla.threshold_ms}, {"percentile", plan.sla.percentile}}},
      {"latency_bounded_throughput", lbt},
      {"host", report::host_json(host)},
      {"pinning", pinning},
      {"started_at", started},
      {"finished_at", report::utc_timestamp()},
      {"outputs", {{"results", "results.csv"}, {"breakdown", "breakdown.csv"}}},
      {"truncated", g_interrupted.load() || stop_requested()},
      {"errors", errors}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';

  if (!errors.empty()) {
    for (const auto& e : errors) err << "error: " << e.at("error").get<std::string>() << '\n';
    return code(ExitStatus::kRuntimeError);
  }
  if (args.require_sla && !sla_met) return code(ExitStatus::kSlaNoneQualified);
  return code(ExitStatus::kSuccess);
}

// ---------------------------------------------------------------------------
// trace gen

struct TraceArgs {
  std::string model = "rmc1";
  double scale = 0.01;
  std::int64_t batch = 1;
  std::int64_t queries = 100;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_trace_gen(TraceArgs a, std::ostream& out) {
  const RecModelConfig config = resolve_model(a.model, a.scale);
  if (a.batch < 1 || a.queries < 0) throw ConfigError("--batch must be >= 1 and --queries >= 0");
  if (a.out.empty()) a.out = (fs::path(default_out_dir()) / "trace.csv").string();
  fs::path path(a.out);
  if (fs::is_directory(path)) path /= "trace.csv";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());

  std::ofstream file(path);
  if (!file) throw ConfigError("cannot write trace '" + path.string() + "'");
  // Same request streams as instance 0 of a benchmark run with this seed.
  const RequestGenerator gen(config);
  file << kTraceSchemaComment << '\n' << kTraceHeader << '\n';
  std::int64_t rows = 0;
  for (std::int64_t q = 0; q < a.queries; ++q) {
    const auto request =
        gen(a.batch, derive_seed(a.seed, {kRequestStream, 0, static_cast<std::uint64_t>(q)}));
    for (std::size_t t = 0; t < request.sparse.size(); ++t) {
      for (std::int64_t id : request.sparse[t].ids) {
        file << t << ',' << id << '\n';
        ++rows;
      }
    }
  }
  out << "wrote " << rows << " lookups to " << path.string() << '\n';
  return code(ExitStatus::kSuccess);
}

// ---------------------------------------------------------------------------
// cache sim

struct CacheArgs {
  std::string trace;
  std::uint64_t l2_kb = 1024;
  std::uint64_t l3_kb = 8192;
  std::uint64_t assoc = 16;
  std::uint64_t line = 64;
  std::string policy = "inclusive";
  std::string model;
  double scale = 0.01;
  std::int64_t batch = 1;
  std::int64_t dim = 32;
  bool include_fc = false;
  std::string out;
};

int cmd_cache_sim(const CacheArgs& a, std::ostream& out) {
  const auto policy = cachesim::parse_policy(a.policy);
  if (!policy) throw ConfigError("--policy must be inclusive or exclusive");
  cachesim::HierarchyConfig h;
  h.l2 = {a.l2_kb * 1024, a.line, a.assoc};
  h.l3 = {a.l3_kb * 1024, a.line, a.assoc};
  h.policy = *policy;
  cachesim::validate(h);

  std::ifstream in(a.trace);
  if (!in) throw ConfigError("cannot read trace '" + a.trace + "'");
  const auto records = read_trace_csv(in);

  std::optional<cachesim::AddressMap> map;
  std::int64_t fc_every = 0;
  if (!a.model.empty()) {
    const RecModelConfig config = resolve_model(a.model, a.scale);
    map = cachesim::AddressMap::for_model(config);
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      if (r.table_id >= static_cast<std::int64_t>(config.tables.size()) ||
          r.row_id >= config.tables[static_cast<std::size_t>(r.table_id)].rows) {
        throw ConfigError("trace record " + std::to_string(i + 1) + " (" +
                          std::to_string(r.table_id) + "," + std::to_string(r.row_id) +
                          ") is outside model '" + config.name + "'");
      }
    }
    if (a.include_fc) {
      for (const auto& t : config.tables) fc_every += a.batch * t.lookups_per_sample;
    }
  } else {
    if (a.include_fc) throw ConfigError("--include-fc needs --model");
    if (a.dim < 1) throw ConfigError("--dim must be >= 1");
    std::vector<std::int64_t> rows;
    for (const auto& r : records) {
      if (static_cast<std::size_t>(r.table_id) >= rows.size()) {
        rows.resize(static_cast<std::size_t>(r.table_id) + 1, 1);
      }
      auto& n = rows[static_cast<std::size_t>(r.table_id)];
      n = std::max(n, r.row_id + 1);
    }
    const std::vector<std::int64_t> dims(rows.size(), a.dim);
    map.emplace(rows, dims);
  }

  const auto trace = cachesim::trace_from_records(*map, records, fc_every);
  const auto stats = cachesim::simulate(h, trace);
  if (a.out.empty()) {
    report::write_cache_stats_csv(out, h, stats);
  } else {
    fs::path path(a.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot write '" + a.out + "'");
    report::write_cache_stats_csv(file, h, stats);
  }
  return code(ExitStatus::kSuccess);
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::string in;
  std::string out;
  double sla_ms = 450.0;
  double sla_pctl = 99.0;
  bool require_sla = false;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  if (!fs::is_directory(a.in)) throw ConfigError("--in '" + a.in + "' is not a directory");
  validate_sla({a.sla_ms, a.sla_pctl});
  if (a.sla_pctl != 5 && a.sla_pctl != 50 && a.sla_pctl != 95 && a.sla_pctl != 99) {
    throw ConfigError("report supports --sla-pctl 5, 50, 95 or 99 (the recorded columns)");
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(a.in)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<report::ResultRow> rows;
  std::size_t merged = 0;
  for (const auto& path : files) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    if (first.rfind(kTraceSchemaComment, 0) == 0 ||
        first.rfind(report::kCombinedSchemaComment, 0) == 0 ||
        first.rfind(report::kBreakdownSchemaComment, 0) == 0 ||
        first == report::kCacheStatsHeader) {
      continue;
    }
    if (first != report::kResultsSchemaComment) {
      throw ConfigError("'" + path.string() + "' does not use the " +
                        report::kResultsSchemaComment + " schema");
    }
    in.seekg(0);
    report::ResultsFile file;
    try {
      file = report::read_results_csv(in);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    rows.insert(rows.end(), file.rows.begin(), file.rows.end());
    ++merged;
  }
  if (merged == 0 || rows.empty()) {
    throw ConfigError("no results rows found under '" + a.in + "'");
  }

  const SlaConfig sla{a.sla_ms, a.sla_pctl};
  std::vector<PointResult> points;
  for (const auto& r : rows) points.push_back({r.point, r.summary, true});
  const LbtResult winner = latency_bounded_throughput(points, sla);

  const fs::path out_dir = a.out.empty() ? fs::path(a.in) : fs::path(a.out);
  fs::create_directories(out_dir);
  std::ofstream combined(out_dir / "combined.csv");
  report::write_combined_csv(combined, rows, sla, winner);

  const auto& p = rows[winner.index].point;
  out << "merged " << rows.size() << " rows from " << merged << " file(s)\n"
      << (winner.qualified ? "SLA winner: " : "no point meets the SLA; lowest latency: ")
      << p.model << " scale=" << p.scale << " batch=" << p.batch
      << " colocation=" << p.colocation
      << " items/s=" << report::format_double(winner.tput_items_s, 1) << '\n';
  if (a.require_sla && !winner.qualified) return code(ExitStatus::kSlaNoneQualified);
  return code(ExitStatus::kSuccess);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"recbench: recommendation-model inference benchmarks and cache simulation"};
  app.set_version_flag("--version", std::string("recbench ") + RECBENCH_VERSION);
  app.require_subcommand(1);

  BenchArgs run_args;
  BenchArgs colo_args;
  BenchArgs sweep_args;
  colo_args.colocate = {1, 2, 4};
  std::string run_manifest, colo_manifest, sweep_manifest;
  auto* bench = app.add_subcommand("bench", "Latency/throughput benchmarks");
  bench->require_subcommand(1);
  auto* bench_run = bench->add_subcommand("run", "Single model, one point per --batch");
  add_bench_flags(*bench_run, run_args, run_manifest, true, false);
  auto* bench_colo = bench->add_subcommand("colocate", "Co-located instances, one point per --colocate");
  add_bench_flags(*bench_colo, colo_args, colo_manifest, false, true);
  auto* bench_sweep = bench->add_subcommand("sweep", "Cartesian --batch x --colocate sweep");
  add_bench_flags(*bench_sweep, sweep_args, sweep_manifest, true, true);

  TraceArgs trace_args;
  auto* trace = app.add_subcommand("trace", "Embedding lookup traces");
  trace->require_subcommand(1);
  auto* trace_gen = trace->add_subcommand("gen", "Write a lookup trace CSV (table_id,row_id)");
  trace_gen->add_option("--model", trace_args.model, "rmc1|rmc2|rmc3 or a JSON model config");
  trace_gen->add_option("--scale", trace_args.scale, "Embedding row multiplier for presets");
  trace_gen->add_option("--batch", trace_args.batch, "Samples per query");
  trace_gen->add_option("--queries", trace_args.queries, "Number of queries");
  trace_gen->add_option("--seed", trace_args.seed, "Root seed");
  trace_gen->add_option("--out", trace_args.out, "Output file (or directory)");

  CacheArgs cache_args;
  auto* cache = app.add_subcommand("cache", "Cache hierarchy simulation");
  cache->require_subcommand(1);
  auto* cache_sim = cache->add_subcommand("sim", "Simulate an L2/L3 hierarchy over a trace");
  cache_sim->add_option("--trace", cache_args.trace, "Lookup trace CSV")->required();
  cache_sim->add_option("--l2-kb", cache_args.l2_kb, "L2 capacity in KiB");
  cache_sim->add_option("--l3-kb", cache_args.l3_kb, "L3 capacity in KiB");
  cache_sim->add_option("--assoc", cache_args.assoc, "Associativity of both levels");
  cache_sim->add_option("--line", cache_args.line, "Line size in bytes");
  cache_sim->add_option("--policy", cache_args.policy, "inclusive|exclusive");
  cache_sim->add_option("--model", cache_args.model, "Model whose table layout to use");
  cache_sim->add_option("--scale", cache_args.scale, "Preset scale for --model");
  cache_sim->add_option("--batch", cache_args.batch, "Query batch, for --include-fc");
  cache_sim->add_option("--dim", cache_args.dim, "Embedding width when no --model is given");
  cache_sim->add_flag("--include-fc", cache_args.include_fc, "Sweep FC weights after every query");
  cache_sim->add_option("--out", cache_args.out, "Stats CSV path (default: stdout)");

  ReportArgs report_args;
  auto* rep = app.add_subcommand("report", "Merge result CSVs and pick the SLA winner");
  rep->add_option("--in", report_args.in, "Directory of result CSVs")->required();
  rep->add_option("--out", report_args.out, "Output directory (default: --in)");
  rep->add_option("--sla-ms", report_args.sla_ms, "SLA latency threshold in milliseconds");
  rep->add_option("--sla-pctl", report_args.sla_pctl, "SLA percentile (5, 50, 95 or 99)");
  rep->add_flag("--require-sla", report_args.require_sla, "Exit 3 when no point meets the SLA");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? code(ExitStatus::kSuccess) : code(ExitStatus::kConfigError);
  }

  try {
    if (*bench_run) {
      return cmd_bench(BenchMode::kRun, run_args, run_manifest, bench_run->count("--out") > 0,
                       out, err);
    }
    if (*bench_colo) {
      return cmd_bench(BenchMode::kColocate, colo_args, colo_manifest,
                       bench_colo->count("--out") > 0, out, err);
    }
    if (*bench_sweep) {
      return cmd_bench(BenchMode::kSweep, sweep_args, sweep_manifest,
                       bench_sweep->count("--out") > 0, out, err);
    }
    if (*trace_gen) return cmd_trace_gen(trace_args, out);
    if (*cache_sim) return cmd_cache_sim(cache_args, out);
    if (*rep) return cmd_report(report_args, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return code(ExitStatus::kConfigError);
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return code(ExitStatus::kConfigError);
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return code(ExitStatus::kRuntimeError);
  }
  return code(ExitStatus::kConfigError);
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace recbench::cli
