#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gather/algorithm.hpp"
#include "gather/classifier.hpp"
#include "gather/generator.hpp"
#include "gather/oracle.hpp"
#include "gather/scenario.hpp"
#include "gather/simulation.hpp"

namespace gather::cli {

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_parse = 2, exit_fault = 3 };

struct RunFlags {
  SchedulerPolicy policy;
  Caps caps;
  std::string trace;  // file for one scenario, directory for several
  unsigned jobs = 1;
};

struct Result {
  int code = exit_ok;
  std::string text;  // complete lines, newline terminated
};

inline std::string quoted(const std::string& s) { return "\"" + s + "\""; }

// Loads a scenario, turning every load failure into an exit code and message.
inline bool load(const std::string& path, Configuration& c, Result& r) {
  try {
    c = load_scenario(path);
    return true;
  } catch (const ParseError& e) {
    r = {exit_parse, "error: " + path + ": " + e.what() + "\n"};
  } catch (const ConfigError& e) {
    r = {exit_parse, "error: " + path + ": " + e.what() + "\n"};
  } catch (const std::ios_base::failure& e) {
    r = {exit_parse, "error: " + path + ": cannot read file\n"};
  } catch (const std::runtime_error& e) {
    r = {exit_parse, "error: " + path + ": " + e.what() + "\n"};
  }
  return false;
}

inline Result run_one(const std::string& path, const RunFlags& flags, std::ostream* trace) {
  Result r;
  Configuration c;
  if (!load(path, c, r)) return r;
  if (!c.is_initial()) {
    return {exit_parse, "error: " + path + ": " + std::to_string(c.robot_count()) + " robots on " +
                            std::to_string(c.position_count()) +
                            " nodes; a run needs at least 7 robots, each on its own node\n"};
  }
  const std::int64_t cost = oracle::optimal_cost(c);
  const auto weber = oracle::brute_force_weber(c);
  std::ostringstream out;
  try {
    Simulation sim(c, flags.policy, flags.caps);
    Outcome o = sim.run(trace);
    switch (o.kind) {
      case Outcome::Gathered: {
        bool optimal = o.total_moves == cost && std::binary_search(weber.begin(), weber.end(), o.node);
        out << "outcome=Gathered node=" << to_string(o.node) << " moves=" << o.total_moves << " optimal_cost=" << cost
            << " optimal=" << (optimal ? "true" : "false") << " steps=" << o.steps << "\n";
        r.code = optimal ? exit_ok : exit_fault;
        break;
      }
      case Outcome::Ungatherable:
        out << "outcome=Ungatherable reason=" << quoted(o.reason) << " moves=0 steps=0\n";
        break;
      case Outcome::CapExceeded:
        out << "outcome=CapExceeded reason=" << quoted(o.reason) << " moves=" << o.total_moves << " steps=" << o.steps
            << "\n";
        r.code = exit_fault;
        break;
    }
  } catch (const SimulationFault& f) {
    if (trace) {
      for (auto& e : f.trace) *trace << format_event(e) << '\n';
      std::int64_t moves = std::count_if(f.trace.begin(), f.trace.end(),
                                         [](const TraceEvent& e) { return e.kind == TraceEvent::move; });
      *trace << "outcome=Fault moves=" << moves << " steps=" << (f.trace.empty() ? 0 : f.trace.back().step) << '\n';
    }
    out << "outcome=Fault reason=" << quoted(f.what()) << "\n";
    r.code = exit_fault;
  }
  r.text = out.str();
  return r;
}

inline int cmd_run(const std::vector<std::string>& paths, const RunFlags& flags, std::ostream& out, std::ostream& err) {
  const bool batch = paths.size() > 1;
  if (batch && !flags.trace.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(flags.trace, ec);
    if (ec) {
      err << "error: cannot create trace directory " << flags.trace << "\n";
      return exit_usage;
    }
  }
  auto trace_path = [&](const std::string& scenario) {
    if (flags.trace.empty()) return std::string();
    if (!batch) return flags.trace;
    return (std::filesystem::path(flags.trace) / (std::filesystem::path(scenario).stem().string() + ".trace")).string();
  };

  std::vector<Result> results(paths.size());
  auto work = [&](std::size_t i) {
    std::string tp = trace_path(paths[i]);
    if (tp.empty()) {
      results[i] = run_one(paths[i], flags, nullptr);
    } else if (tp == "-") {
      std::ostringstream buf;
      results[i] = run_one(paths[i], flags, &buf);
      results[i].text = buf.str() + results[i].text;
    } else {
      std::ofstream f(tp);
      if (!f) {
        results[i] = {exit_usage, "error: cannot write trace file " + tp + "\n"};
        return;
      }
      results[i] = run_one(paths[i], flags, &f);
    }
  };

  unsigned jobs = std::max(1u, std::min<unsigned>(flags.jobs, static_cast<unsigned>(paths.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < paths.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < paths.size();) work(i);
      });
    for (auto& t : pool) t.join();
  }

  int code = exit_ok;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Result& r = results[i];
    std::ostream& sink = r.text.rfind("error:", 0) == 0 ? err : out;
    sink << (batch ? "file=" + paths[i] + " " : std::string()) << r.text;
    code = std::max(code, r.code);
  }
  return code;
}

inline std::string join(const std::vector<Node>& v) {
  std::string s;
  for (auto& p : v) s += (s.empty() ? "" : " ") + to_string(p);
  return s.empty() ? "-" : s;
}

inline std::string describe(const SymmetryDescriptor& d) {
  std::string s = to_string(d.kind);
  if (!d.axes.empty()) {
    s += " axes=";
    for (std::size_t i = 0; i < d.axes.size(); ++i) s += (i ? "," : "") + to_string(d.axes[i]);
  }
  if (d.rotational()) s += " center=(" + std::to_string(d.center2.x) + "/2," + std::to_string(d.center2.y) + "/2)";
  return s;
}

inline int cmd_classify(const std::string& path, std::ostream& out, std::ostream& err) {
  Result r;
  Configuration c;
  if (!load(path, c, r)) {
    err << r.text;
    return r.code;
  }
  Analysis a(c);
  const ClassLabel& l = a.label;
  out << "class=" << to_string(l) << " gatherable=" << (l.gatherable ? "true" : "false")
      << " u_prime=" << (l.in_u_prime ? "true" : "false") << "\n";
  if (!l.reason.empty()) out << "reason=" << quoted(l.reason) << "\n";
  out << "meeting_symmetry=" << describe(a.msym) << "\n";
  out << "config_symmetry=" << describe(a.csym) << "\n";
  out << "weber=" << join(a.weber.nodes) << " min_consistency=" << a.weber.min_consistency << "\n";
  out << "potential_weber=" << join(a.wp) << "\n";
  std::vector<Node> corners;
  for (auto& f : a.leading) corners.push_back(f.corner);
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  out << "leading_corners=" << join(corners) << "\n";
  if (a.leading.size() >= 2) {
    std::vector<Node> keys;
    for (auto& f : a.key_frames()) keys.push_back(f.corner);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    out << "key_corners=" << join(keys) << "\n";
  }
  bool regions = l.major == Major::I3 || l.major == Major::I4;
  if (regions && a.weber.nodes.size() >= 2 && !a.csym.symmetric() && l.gatherable) {
    out << "condition=" << to_string(condition(a)) << "\n";
    if (l.major == Major::I3) {
      out << "H+=side" << (half_plane_plus_side(a) > 0 ? "+" : "-") << " of " << to_string(*a.axis) << "\n";
    } else if (!a.center_is_weber()) {
      Signs s = quadrant_plus_plus_signs(a);
      out << "H++=(" << (s[0] > 0 ? "+" : "-") << "," << (s[1] > 0 ? "+" : "-") << ") of " << to_string(a.l) << " "
          << to_string(a.lp) << "\n";
    }
  }
  if (l.gatherable && !c.is_final()) {
    try {
      out << "target=" << to_string(select_target(c)) << "\n";
    } catch (const RefusalError& e) {
      out << "target=- reason=" << quoted(e.what()) << "\n";
    }
  }
  return exit_ok;
}

inline int cmd_explore(const std::string& path, const oracle::ExploreOptions& opt, std::ostream& out,
                       std::ostream& err) {
  Result r;
  Configuration c;
  if (!load(path, c, r)) {
    err << r.text;
    return r.code;
  }
  const std::int64_t cost = oracle::optimal_cost(c);
  oracle::ExploreReport rep;
  try {
    rep = oracle::explore_schedules(c, opt);
  } catch (const oracle::ExplorationLimit& e) {
    out << "outcomes=? error=" << quoted(e.what()) << " states=" << e.states << " depth=" << e.depth << "\n";
    return exit_fault;
  }
  std::int64_t lo = rep.outcomes.empty() ? 0 : rep.outcomes.front().total_moves, hi = lo;
  for (auto& o : rep.outcomes) {
    lo = std::min(lo, o.total_moves);
    hi = std::max(hi, o.total_moves);
  }
  out << "outcomes=" << rep.outcomes.size() << " moves_min=" << lo << " moves_max=" << hi << " optimal_cost=" << cost
      << " states=" << rep.states << " configurations=" << rep.configurations << " depth=" << rep.depth << "\n";
  bool good = rep.outcomes.size() == 1;
  for (auto& o : rep.outcomes) {
    out << "outcome=" << kind_name(o.kind);
    if (o.kind == Outcome::Gathered) out << " node=" << to_string(o.node);
    out << " moves=" << o.total_moves;
    if (!o.reason.empty()) out << " reason=" << quoted(o.reason);
    out << "\n";
    good = good && (o.kind == Outcome::Ungatherable || (o.kind == Outcome::Gathered && o.total_moves == cost));
  }
  return good ? exit_ok : exit_fault;
}

inline int cmd_gen(const GenOptions& o, const std::string& output, std::ostream& out, std::ostream& err) {
  if (o.n < 7) {
    err << "error: --n must be at least 7\n";
    return exit_usage;
  }
  if (o.meetings < 1 || o.extent < 0) {
    err << "error: --meetings must be positive and --extent non-negative\n";
    return exit_usage;
  }
  Configuration c;
  try {
    c = generate(o);
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_fault;
  }
  std::string comment = "n=" + std::to_string(o.n) + " meetings=" + std::to_string(o.meetings) +
                        " extent=" + std::to_string(o.extent) + " seed=" + std::to_string(o.seed) +
                        " class=" + to_string(classify(c));
  std::string text = render_scenario(c, comment);
  if (output.empty() || output == "-") {
    out << text;
  } else {
    std::ofstream f(output);
    if (!f) {
      err << "error: cannot write " << output << "\n";
      return exit_usage;
    }
    f << text;
  }
  return exit_ok;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Optimal gathering of oblivious robots on meeting nodes of the grid"};
  app.require_subcommand(1);

  RunFlags flags;
  std::string scheduler = "fsync", assert_mode = "on";
  std::vector<std::string> run_paths;
  auto* run = app.add_subcommand("run", "simulate one or more scenarios");
  run->add_option("scenarios", run_paths, "scenario files")->required();
  run->add_option("--scheduler", scheduler, "fsync, ssync or async")
      ->check(CLI::IsMember({"fsync", "ssync", "async"}));
  run->add_option("--seed", flags.policy.seed, "adversary seed");
  run->add_option("--max-steps", flags.caps.max_steps, "scheduler step cap")->check(CLI::PositiveNumber);
  run->add_option("--fairness", flags.policy.fairness, "every robot completes a cycle within this many steps")
      ->check(CLI::PositiveNumber);
  run->add_option("--trace", flags.trace, "trace file, '-' for stdout, or a directory when running several scenarios");
  run->add_option("--assert", assert_mode, "invariant checks: on or off")->check(CLI::IsMember({"on", "off"}));
  run->add_option("--jobs", flags.jobs, "scenarios simulated in parallel")->check(CLI::PositiveNumber);

  std::string classify_path;
  auto* cls = app.add_subcommand("classify", "report the class of a scenario");
  cls->add_option("scenario", classify_path, "scenario file")->required();

  std::string explore_path;
  oracle::ExploreOptions xopt;
  auto* xpl = app.add_subcommand("explore", "enumerate every asynchronous schedule of a small scenario");
  xpl->add_option("scenario", explore_path, "scenario file")->required();
  xpl->add_option("--depth", xopt.max_depth, "event depth cap");
  xpl->add_option("--max-states", xopt.max_states, "state budget");
  xpl->add_flag("--symmetry", xopt.use_symmetry, "merge states related by a symmetry of the meeting nodes");

  GenOptions gopt;
  std::string gen_class, gen_out;
  auto* gen = app.add_subcommand("gen", "generate a random scenario");
  gen->add_option("--n", gopt.n, "number of robots");
  auto* meetings_opt = gen->add_option("--meetings", gopt.meetings, "number of meeting nodes (default 1, or 4 with --class)");
  gen->add_option("--extent", gopt.extent, "coordinates are drawn from [0, extent]");
  gen->add_option("--seed", gopt.seed, "generator seed");
  gen->add_option("--class", gen_class, "required class label, e.g. I3b2")
      ->check(CLI::IsMember({"I1", "I2", "I3a", "I3b1", "I3b2", "I3b3", "I3b4", "I4a", "I4b1", "I4b2", "I4b3"}));
  gen->add_option("--attempts", gopt.attempts, "rejection-sampling budget")->check(CLI::PositiveNumber);
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  if (*run) {
    flags.policy.kind = scheduler == "fsync" ? SchedulerKind::fsync
                        : scheduler == "ssync" ? SchedulerKind::ssync
                                               : SchedulerKind::async;
    flags.caps.assertions = assert_mode == "on";
    return cmd_run(run_paths, flags, out, err);
  }
  if (*cls) return cmd_classify(classify_path, out, err);
  if (*xpl) return cmd_explore(explore_path, xopt, out, err);
  if (!gen_class.empty()) {
    gopt.label = gen_class;
    // a single meeting node is always I1
    if (meetings_opt->count() == 0) gopt.meetings = 4;
  }
  return cmd_gen(gopt, gen_out, out, err);
}

}  // namespace gather::cli
