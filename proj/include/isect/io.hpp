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

#ifndef ISECT__IO_HPP
#define ISECT__IO_HPP

#include "harness.hpp"

#include <charconv>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace isect {

//==============================================================================
// Numbers are written in the shortest form that reads back bit-exactly.

inline std::string format_number(double x)
{
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline std::string format_fixed(double x, int precision)
{
  char buf[64];
  const auto r = std::to_chars(
    buf, buf + sizeof buf, x, std::chars_format::fixed, precision);
  return std::string(buf, r.ptr);
}

inline std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_number(std::string_view s)
{
  s = trim(s);
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return x;
}

template<typename Int>
Int parse_integer(std::string_view s)
{
  s = trim(s);
  Int x{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  return x;
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
  std::vector<std::string_view> out;
  while (true)
  {
    const auto p = s.find(sep);
    out.push_back(s.substr(0, p));
    if (p == std::string_view::npos)
      return out;
    s.remove_prefix(p + 1);
  }
}

/// Seed used when none is given: ISECT_SEED if set, else 42.
inline std::uint64_t default_seed()
{
  if (const char* env = std::getenv("ISECT_SEED"))
    return parse_integer<std::uint64_t>(env);
  return 42;
}

//==============================================================================
// Configuration file: one "key = value" per line, '#' starts a comment.
// Lists are space separated; patterns are separated by ';'.

namespace detail {

inline std::string format_list(const std::vector<double>& xs)
{
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += (i ? " " : "") + format_number(xs[i]);
  return out;
}

inline std::vector<double> parse_list(std::string_view s)
{
  std::vector<double> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok)
    out.push_back(parse_number(tok));
  return out;
}

struct ConfigKey
{
  std::string_view name;
  std::function<std::string(const SimConfig&)> get;
  std::function<void(SimConfig&, std::string_view)> set;
};

template<typename T>
ConfigKey number_key(std::string_view name, T SimConfig::*group, double T::*field)
{
  return {name,
    [=](const SimConfig& c) { return format_number(c.*group.*field); },
    [=](SimConfig& c, std::string_view v) { c.*group.*field = parse_number(v); }};
}

inline const std::vector<ConfigKey>& config_keys()
{
  using L = IntersectionLayout;
  using C = CostParams;
  using B = BehaviorParams;
  static const std::vector<ConfigKey> keys{
    number_key("layout.lane_width", &SimConfig::layout, &L::lane_width),
    number_key("layout.box_half_width", &SimConfig::layout, &L::box_half_width),
    number_key("layout.arm_length", &SimConfig::layout, &L::arm_length),
    number_key("cost.C_n", &SimConfig::cost, &C::C_n),
    number_key("cost.C_d", &SimConfig::cost, &C::C_d),
    number_key("cost.C_u", &SimConfig::cost, &C::C_u),
    number_key("cost.C_o", &SimConfig::cost, &C::C_o),
    number_key("cost.D", &SimConfig::cost, &C::D),
    number_key("cost.D_danger", &SimConfig::cost, &C::D_danger),
    number_key("cost.v_l", &SimConfig::cost, &C::v_l),
    number_key("cost.lambda", &SimConfig::cost, &C::lambda),
    {"cost.h",
      [](const SimConfig& c) { return std::to_string(c.cost.h); },
      [](SimConfig& c, std::string_view v)
      { c.cost.h = parse_integer<std::size_t>(v); }},
    number_key("cost.dt", &SimConfig::cost, &C::dt),
    {"patterns",
      [](const SimConfig& c)
      {
        std::string out;
        for (std::size_t i = 0; i < c.patterns.size(); ++i)
          out += (i ? "; " : "") + format_list(c.patterns[i]);
        return out;
      },
      [](SimConfig& c, std::string_view v)
      {
        std::vector<Pattern> ps;
        for (const auto part : split(v, ';'))
          ps.push_back(parse_list(part));
        c.patterns = PatternSet(std::move(ps));
      }},
    number_key("behavior.closer_threshold", &SimConfig::behavior,
      &B::closer_threshold),
    number_key("behavior.prediction_tolerance", &SimConfig::behavior,
      &B::prediction_tolerance),
    number_key("behavior.fit_acceptance_probability", &SimConfig::behavior,
      &B::fit_acceptance_probability),
    number_key("behavior.unlock_probability", &SimConfig::behavior,
      &B::unlock_probability),
    number_key("behavior.unlock_acceleration", &SimConfig::behavior,
      &B::unlock_acceleration),
    number_key("behavior.stop_deceleration", &SimConfig::behavior,
      &B::stop_deceleration),
    {"behavior.irrational_accelerations",
      [](const SimConfig& c)
      { return format_list(c.behavior.irrational_accelerations); },
      [](SimConfig& c, std::string_view v)
      { c.behavior.irrational_accelerations = parse_list(v); }},
    {"step_cap",
      [](const SimConfig& c) { return std::to_string(c.step_cap); },
      [](SimConfig& c, std::string_view v)
      { c.step_cap = parse_integer<std::size_t>(v); }},
  };
  return keys;
}

} // namespace detail

/// Every key of the configuration, one per line.
inline std::string serialize_config(const SimConfig& config)
{
  std::string out;
  for (const auto& k : detail::config_keys())
    out += std::string(k.name) + " = " + k.get(config) + "\n";
  return out;
}

/// Parse "key = value" lines on top of the defaults. Unknown keys and
/// malformed values are errors; the result is validated.
inline SimConfig parse_config(std::string_view text)
{
  SimConfig config;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n'))
  {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument(
        "config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto& keys = detail::config_keys();
    const auto it = std::find_if(keys.begin(), keys.end(),
      [&](const detail::ConfigKey& k) { return k.name == key; });
    if (it == keys.end())
      throw std::invalid_argument("config line " + std::to_string(line_no)
        + ": unknown key '" + std::string(key) + "'");
    try
    {
      it->set(config, value);
    }
    catch (const std::invalid_argument& e)
    {
      throw std::invalid_argument(
        "config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

//==============================================================================
// Trace files: '#'-prefixed metadata followed by one CSV row per vehicle and
// step. Everything needed to re-simulate the run is in the metadata.

inline constexpr std::string_view trace_magic = "isect-trace 1";
inline constexpr std::string_view trace_columns =
  "step,id,kind,arm,maneuver,length,width,s,x,y,heading,v,a,status,order,deadlock";

struct TraceFile
{
  Scenario scenario;
  SimConfig config;
  SimResult result;
};

inline void write_trace(
  std::ostream& os, const Scenario& sc, const SimConfig& config,
  const SimResult& r)
{
  os << "# " << trace_magic << "\n";
  os << "# label: " << sc.label << "\n";
  os << "# seed: " << sc.seed << "\n";
  os << "# run: " << sc.run_index << "\n";
  std::istringstream cfg(serialize_config(config));
  for (std::string line; std::getline(cfg, line);)
    os << "# config: " << line << "\n";
  for (const auto& v : sc.vehicles)
  {
    os << "# vehicle: " << v.id << ',' << to_string(v.arm) << ','
       << to_string(v.maneuver) << ',' << format_number(v.dims.length) << ','
       << format_number(v.dims.width) << ',' << to_string(v.kind) << ','
       << format_number(v.initial_speed) << "\n";
  }
  os << "# result: collided=" << r.collided << " congested=" << r.congested
     << " timed_out=" << r.timed_out << " total_steps=" << r.total_steps
     << " steps_run=" << r.steps_run << "\n";
  for (const auto& e : r.events)
  {
    os << "# event: " << e.step << ',' << to_string(e.kind);
    for (const auto id : e.vehicles)
      os << ',' << id;
    os << "\n";
  }
  os << trace_columns << "\n";
  for (const auto& row : r.trace)
  {
    const auto& c = row.config;
    os << row.step << ',' << row.id << ',' << to_string(row.kind) << ','
       << to_string(row.arm) << ',' << to_string(row.maneuver) << ','
       << format_number(row.dims.length) << ',' << format_number(row.dims.width)
       << ',' << format_number(c.s) << ',' << format_number(c.pose.position.x)
       << ',' << format_number(c.pose.position.y) << ','
       << format_number(c.pose.heading) << ',' << format_number(c.v) << ','
       << format_number(c.a) << ',' << to_string(c.status) << ',' << row.order
       << ',' << row.deadlock << "\n";
  }
}

inline TraceFile read_trace(std::istream& is)
{
  TraceFile tf;
  std::string config_text;
  bool magic = false;
  bool header = false;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what)
  {
    throw std::invalid_argument(
      "trace line " + std::to_string(line_no) + ": " + what);
  };

  for (std::string line; std::getline(is, line);)
  {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    if (line.rfind("# ", 0) == 0)
    {
      const std::string_view meta = std::string_view(line).substr(2);
      if (meta == trace_magic)
      {
        magic = true;
        continue;
      }
      const auto colon = meta.find(": ");
      if (colon == std::string_view::npos)
        fail("malformed metadata");
      const auto key = meta.substr(0, colon);
      const auto value = meta.substr(colon + 2);
      if (key == "label")
        tf.scenario.label = std::string(value);
      else if (key == "seed")
        tf.scenario.seed = parse_integer<std::uint64_t>(value);
      else if (key == "run")
        tf.scenario.run_index = parse_integer<std::uint64_t>(value);
      else if (key == "config")
        config_text += std::string(value) + "\n";
      else if (key == "vehicle")
      {
        const auto f = split(value, ',');
        if (f.size() != 7)
          fail("vehicle needs 7 fields");
        VehicleSetup v;
        v.id = parse_integer<VehicleId>(f[0]);
        v.arm = parse_arm(f[1]);
        v.maneuver = parse_maneuver(f[2]);
        v.dims = {parse_number(f[3]), parse_number(f[4])};
        v.kind = parse_driver_kind(f[5]);
        v.initial_speed = parse_number(f[6]);
        tf.scenario.vehicles.push_back(v);
      }
      else if (key == "result")
      {
        std::istringstream in{std::string(value)};
        for (std::string kv; in >> kv;)
        {
          const auto eq = kv.find('=');
          if (eq == std::string::npos)
            fail("malformed result field");
          const auto k = kv.substr(0, eq);
          const auto n = parse_integer<std::size_t>(kv.substr(eq + 1));
          if (k == "collided") tf.result.collided = n != 0;
          else if (k == "congested") tf.result.congested = n != 0;
          else if (k == "timed_out") tf.result.timed_out = n != 0;
          else if (k == "total_steps") tf.result.total_steps = n;
          else if (k == "steps_run") tf.result.steps_run = n;
          else fail("unknown result field '" + k + "'");
        }
      }
      else if (key == "event")
      {
        const auto f = split(value, ',');
        if (f.size() < 2)
          fail("event needs a step and a kind");
        Event e;
        e.step = parse_integer<std::size_t>(f[0]);
        e.kind = parse_event_kind(f[1]);
        for (std::size_t i = 2; i < f.size(); ++i)
          e.vehicles.push_back(parse_integer<VehicleId>(f[i]));
        if (e.kind == EventKind::Collision && e.vehicles.size() == 2)
          tf.result.collisions.emplace_back(e.vehicles[0], e.vehicles[1]);
        tf.result.events.push_back(std::move(e));
      }
      else
        fail("unknown metadata '" + std::string(key) + "'");
      continue;
    }
    if (!header)
    {
      if (line != trace_columns)
        fail("unexpected column header");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 16)
      fail("row needs 16 fields");
    TraceRow row;
    row.step = parse_integer<std::size_t>(f[0]);
    row.id = parse_integer<VehicleId>(f[1]);
    row.kind = parse_driver_kind(f[2]);
    row.arm = parse_arm(f[3]);
    row.maneuver = parse_maneuver(f[4]);
    row.dims = {parse_number(f[5]), parse_number(f[6])};
    row.config.s = parse_number(f[7]);
    row.config.pose.position = {parse_number(f[8]), parse_number(f[9])};
    row.config.pose.heading = parse_number(f[10]);
    row.config.v = parse_number(f[11]);
    row.config.a = parse_number(f[12]);
    row.config.status = parse_status(f[13]);
    row.order = std::string(f[14]);
    row.deadlock = parse_integer<int>(f[15]) != 0;
    tf.result.trace.push_back(std::move(row));
  }
  if (!magic)
    throw std::invalid_argument("not a trace file");
  if (!header)
    throw std::invalid_argument("trace has no column header");
  tf.config = parse_config(config_text);
  return tf;
}

//==============================================================================
struct ReplayReport
{
  bool consistent = true;
  std::vector<std::string> problems;

  void fail(std::string what)
  {
    consistent = false;
    problems.push_back(std::move(what));
  }
};

/// Check a trace against itself and against a fresh simulation: collision
/// and congestion flags are recomputed from the recorded positions, and the
/// recorded scenario is re-simulated and compared row by row.
inline ReplayReport verify_trace(const TraceFile& tf)
{
  ReplayReport report;
  const auto& rows = tf.result.trace;

  bool collided = false;
  bool congested = false;
  for (std::size_t i = 0; i < rows.size();)
  {
    std::size_t j = i;
    Snapshot X;
    while (j < rows.size() && rows[j].step == rows[i].step)
    {
      const auto& r = rows[j++];
      const NavigationPath path(r.arm, r.maneuver, tf.config.layout);
      X.push_back({r.id, path, r.dims, r.config});
    }
    const auto pairs = detect_collision(X);
    for (const auto& [a, b] : pairs)
    {
      const bool recorded = std::any_of(
        tf.result.events.begin(), tf.result.events.end(), [&](const Event& e)
        {
          return e.kind == EventKind::Collision && e.step == rows[i].step
            && e.vehicles == std::vector<VehicleId>{a, b};
        });
      if (!recorded)
      {
        report.fail("unrecorded contact of " + std::to_string(a) + " and "
          + std::to_string(b) + " at step " + std::to_string(rows[i].step));
      }
    }
    collided = collided || !pairs.empty();
    congested = congested || detect_congestion(X);
    i = j;
  }
  if (collided != tf.result.collided)
    report.fail("collision flag disagrees with recorded positions");
  if (congested != tf.result.congested)
    report.fail("congestion flag disagrees with recorded statuses");

  const SimResult again = run(tf.scenario, tf.config);
  if (again.collided != tf.result.collided
    || again.congested != tf.result.congested
    || again.timed_out != tf.result.timed_out
    || again.total_steps != tf.result.total_steps
    || again.steps_run != tf.result.steps_run)
    report.fail("re-simulation gives a different outcome");
  if (again.events != tf.result.events)
    report.fail("re-simulation gives different events");
  if (again.trace.size() != rows.size())
  {
    report.fail("re-simulation gives a trace of different length");
  }
  else
  {
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
      if (!(again.trace[i] == rows[i]))
      {
        report.fail("re-simulation departs from the trace at step "
          + std::to_string(rows[i].step) + ", vehicle "
          + std::to_string(rows[i].id));
        break;
      }
    }
  }
  return report;
}

//==============================================================================
/// Stats table with one row per case.
inline constexpr std::string_view stats_columns =
  "case,collision_rate_pct,congestion_rate_pct,avg_total_steps,timeout_count,runs";

inline void write_stats_row(std::ostream& os, CaseId c, const AggregateStats& s)
{
  os << c.str() << ',' << format_fixed(s.collision_rate(), 2) << ','
     << format_fixed(s.congestion_rate(), 2) << ','
     << format_fixed(s.avg_total_steps(), 2) << ',' << s.timeouts << ','
     << s.runs << "\n";
}

inline constexpr std::string_view summary_columns =
  "run,collided,congested,timed_out,total_steps,mean_vehicle_steps,steps_run,collision_pairs";

inline void write_summary(std::ostream& os, const std::vector<RunSummary>& runs)
{
  os << summary_columns << "\n";
  for (const auto& r : runs)
  {
    os << r.run_index << ',' << r.collided << ',' << r.congested << ','
       << r.timed_out << ',' << r.total_steps << ','
       << format_fixed(r.mean_vehicle_steps, 2) << ',' << r.steps_run << ',';
    for (std::size_t i = 0; i < r.collisions.size(); ++i)
      os << (i ? " " : "") << r.collisions[i].first << '-'
         << r.collisions[i].second;
    os << "\n";
  }
}

//==============================================================================
/// Top view of one run: the box, every vehicle's path and its position at
/// every recorded step. Contacts are circled.
inline void write_svg(std::ostream& os, const TraceFile& tf)
{
  const auto& layout = tf.config.layout;
  const double extent = layout.box_half_width + layout.arm_length + 2.0;
  const double scale = 10.0;
  const std::string size = format_fixed(2.0 * extent * scale, 0);
  const auto sx = [&](Vec2 p) { return format_fixed((p.x + extent) * scale, 2); };
  const auto sy = [&](Vec2 p) { return format_fixed((extent - p.y) * scale, 2); };
  const auto pt = [&](Vec2 p) { return sx(p) + "," + sy(p); };
  const auto color = [](VehicleId id)
  {
    static constexpr std::array<std::string_view, 4> palette{
      "#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    return palette[static_cast<std::size_t>(id) % palette.size()];
  };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
     << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << ' ' << size
     << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double b = layout.box_half_width;
  os << "<polygon points=\"" << pt({-b, -b}) << ' ' << pt({b, -b}) << ' '
     << pt({b, b}) << ' ' << pt({-b, b})
     << "\" fill=\"#f4cccc\" stroke=\"#cc0000\"/>\n";

  for (const auto& v : tf.scenario.vehicles)
  {
    const NavigationPath path(v.arm, v.maneuver, layout);
    os << "<polyline fill=\"none\" stroke=\"" << color(v.id)
       << "\" stroke-dasharray=\"4 3\" points=\"";
    const int samples = 100;
    for (int i = 0; i <= samples; ++i)
    {
      os << (i ? " " : "")
         << pt(path.pose(path.total_length() * i / samples).position);
    }
    os << "\"/>\n";
    const Vec2 start = path.pose(0.0).position;
    os << "<text x=\"" << sx(start) << "\" y=\"" << sy(start)
       << "\" font-size=\"14\" fill=\"" << color(v.id) << "\">" << v.id << ' '
       << to_string(v.kind) << "</text>\n";
  }
  for (const auto& r : tf.result.trace)
  {
    os << "<circle cx=\"" << sx(r.config.pose.position) << "\" cy=\""
       << sy(r.config.pose.position) << "\" r=\"2\" fill=\"" << color(r.id)
       << "\"/>\n";
  }
  for (const auto& e : tf.result.events)
  {
    if (e.kind != EventKind::Collision)
      continue;
    for (const auto& r : tf.result.trace)
    {
      if (r.step != e.step
        || std::find(e.vehicles.begin(), e.vehicles.end(), r.id)
          == e.vehicles.end())
        continue;
      os << "<circle cx=\"" << sx(r.config.pose.position) << "\" cy=\""
         << sy(r.config.pose.position)
         << "\" r=\"8\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
  }
  os << "</svg>\n";
}

} // namespace isect

#endif // ISECT__IO_HPP
