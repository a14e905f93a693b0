/*
 * Copyright (C) 2026 The isect Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

// Command-line front end: batch runs, trace replay and the full case table.

#include <isect/io.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

isect::SimConfig load_config(const std::string& path)
{
  if (path.empty())
    return {};
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  return isect::parse_config(text.str());
}

std::ofstream open_output(const fs::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

std::string trace_name(const isect::Scenario& sc)
{
  std::string label = sc.label;
  std::replace(label.begin(), label.end(), '\'', 'p');
  return "case" + label + "_run" + std::to_string(sc.run_index) + ".csv";
}

struct RunArgs
{
  std::string case_id;
  std::size_t runs = 100;
  std::uint64_t seed = 0;
  std::string config;
  std::string traces;
  std::string out;
  std::string plot;
  std::uint64_t plot_run = 0;
  unsigned jobs = 1;
};

int cmd_run(const RunArgs& a)
{
  isect::BatchSpec spec;
  spec.case_id = isect::parse_case(a.case_id);
  spec.runs = a.runs;
  spec.seed = a.seed;
  spec.config = load_config(a.config);

  isect::BatchOptions opts;
  opts.jobs = a.jobs;
  if (!a.traces.empty())
  {
    fs::create_directories(a.traces);
    opts.record_traces = true;
    opts.on_run = [&](const isect::Scenario& sc, const isect::SimResult& r)
    {
      auto out = open_output(fs::path(a.traces) / trace_name(sc));
      isect::write_trace(out, sc, spec.config, r);
    };
  }
  const auto batch = isect::run_batch(spec, opts);

  if (!a.plot.empty())
  {
    isect::TraceFile tf;
    tf.scenario = isect::generate_scenario(spec.case_id, a.plot_run, spec.seed);
    tf.config = spec.config;
    tf.result = isect::run(tf.scenario, tf.config);
    auto out = open_output(a.plot);
    isect::write_svg(out, tf);
  }

  if (!a.out.empty())
  {
    auto out = open_output(a.out);
    isect::write_summary(out, batch.runs);
  }
  std::cout << isect::stats_columns << "\n";
  isect::write_stats_row(std::cout, spec.case_id, batch.stats);
  return 0;
}

int cmd_replay(const std::string& trace, const std::string& svg)
{
  std::ifstream in(trace);
  if (!in)
    throw std::runtime_error("cannot open trace '" + trace + "'");
  const auto tf = isect::read_trace(in);
  if (!svg.empty())
  {
    auto out = open_output(svg);
    isect::write_svg(out, tf);
  }
  const auto report = isect::verify_trace(tf);
  if (report.consistent)
  {
    std::cout << "consistent: case " << tf.scenario.label << ", run "
              << tf.scenario.run_index << ", collided=" << tf.result.collided
              << ", congested=" << tf.result.congested << "\n";
    return 0;
  }
  std::cout << "inconsistent\n";
  for (const auto& p : report.problems)
    std::cout << "  " << p << "\n";
  return 1;
}

int cmd_table(
  std::uint64_t seed, std::size_t runs, const std::string& config,
  const std::string& out_path, unsigned jobs)
{
  const auto cfg = load_config(config);
  std::ostringstream stats;
  stats << isect::stats_columns << "\n";
  for (const auto c : isect::all_cases())
  {
    isect::BatchSpec spec;
    spec.case_id = c;
    spec.runs = runs;
    spec.seed = seed;
    spec.config = cfg;
    isect::BatchOptions opts;
    opts.jobs = jobs;
    isect::write_stats_row(stats, c, isect::run_batch(spec, opts).stats);
  }
  if (out_path.empty())
  {
    std::cout << stats.str();
  }
  else
  {
    auto out = open_output(out_path);
    out << stats.str();
    std::cout << stats.str();
  }
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Game-theoretic decision making at an unsignalized intersection"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  try
  {
    seed = isect::default_seed();
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: ISECT_SEED: " << e.what() << "\n";
    return 2;
  }

  RunArgs run_args;
  run_args.seed = seed;
  auto* run = app.add_subcommand("run", "Simulate one case and print its stats");
  run->add_option("--case", run_args.case_id, "Case: 1-4, primed as 1' or 1p")
    ->required();
  run->add_option("--runs", run_args.runs, "Number of runs")->capture_default_str();
  run->add_option("--seed", run_args.seed, "Master seed (default: $ISECT_SEED or 42)");
  run->add_option("--config", run_args.config, "Key = value configuration file");
  run->add_option("--traces", run_args.traces, "Directory for per-run trace files");
  run->add_option("--out", run_args.out, "Per-run summary CSV");
  run->add_option("--plot", run_args.plot, "SVG plot of one run");
  run->add_option("--plot-run", run_args.plot_run, "Run index to plot")
    ->capture_default_str();
  run->add_option("--jobs", run_args.jobs, "Worker threads")->capture_default_str();

  std::string trace;
  std::string svg;
  auto* replay = app.add_subcommand("replay", "Re-verify a trace file");
  replay->add_option("--trace", trace, "Trace file written by run --traces")
    ->required();
  replay->add_option("--svg", svg, "Also plot the trace to this SVG file");

  std::uint64_t table_seed = seed;
  std::size_t table_runs = 1000;
  std::string table_config;
  std::string table_out;
  unsigned table_jobs = 1;
  auto* table = app.add_subcommand("table", "Run all eight cases");
  table->add_option("--seed", table_seed, "Master seed (default: $ISECT_SEED or 42)");
  table->add_option("--runs", table_runs, "Runs per case")->capture_default_str();
  table->add_option("--config", table_config, "Key = value configuration file");
  table->add_option("--out", table_out, "Stats CSV file");
  table->add_option("--jobs", table_jobs, "Worker threads")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*run)
      return cmd_run(run_args);
    if (*replay)
      return cmd_replay(trace, svg);
    if (*table)
      return cmd_table(table_seed, table_runs, table_config, table_out, table_jobs);
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
