#include "evograph/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "evograph/closedform.hpp"
#include "evograph/dynamics.hpp"
#include "evograph/exactchain.hpp"
#include "evograph/montecarlo.hpp"
#include "evograph/rng.hpp"
#include "evograph/trainkinetics.hpp"

namespace evograph::cli {
namespace {

using json = nlohmann::ordered_json;

struct InvalidRegime : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double r = 2.0;
  int B = 0, L = 0, H = 0;
  std::string family;
  std::size_t n = 0;
  std::string rule = "Bd";
  std::string placement = "uniform";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::uint64_t max_steps = 0;
  std::int64_t delta = 0;
  std::size_t cap = kDefaultExactCap;
  std::string engine = "jump";
  std::string format = "json";
  std::string out;
  bool timing = false;
  // sweep grids
  std::string r_grid, B_grid, L_grid, H_grid, rule_grid, placement_grid;
  std::string task = "simulate";
  bool resume = false;
};

struct GraphChoice {
  GraphTopology graph;
  json params;
};

GraphChoice choose_graph(const Options& o) {
  if (!o.family.empty()) {
    if (o.n < 2) throw std::invalid_argument("--family needs --n >= 2");
    GraphChoice c{build_family(parse_family(o.family), o.n), json::object()};
    c.params["graph"] = o.family;
    c.params["N"] = o.n;
    return c;
  }
  if (o.B < 1 || o.L < 1 || o.H < 1) throw std::invalid_argument("give --family/--n or a superstar via --B --L --H");
  const SuperstarSpec spec{o.B, o.L, o.H};
  GraphChoice c{build_superstar(spec), json::object()};
  c.params["graph"] = "superstar";
  c.params["B"] = o.B;
  c.params["L"] = o.L;
  c.params["H"] = o.H;
  c.params["N"] = spec.node_count();
  return c;
}

json moran_fields(double r, double n) {
  json j;
  j["moran"] = closedform::moran_fixation(r, n);
  j["log_moran"] = closedform::log_moran_fixation(r, n);
  return j;
}

json trainlen_report(const Options& o) {
  if (o.H < 2) throw std::invalid_argument("--H must be >= 2");
  if (!(o.r > 0.0) || !std::isfinite(o.r)) throw std::invalid_argument("--r must be finite and > 0");
  json j;
  j["command"] = "trainlen";
  j["params"] = {{"r", o.r}, {"H", o.H}};
  const double t = train::expected_train_length(o.r, o.H);
  const double dp = train::train_dp_oracle(o.r, o.H);
  j["T"] = t;
  // Null past the exact limit, where T comes from the log-space sum.
  j["T_exact"] = o.H <= train::kExactTrainLengthLimit
                     ? json(train::expected_train_length_exact(exact_rational(o.r), o.H).get_str())
                     : json(nullptr);
  j["dp"] = dp;
  j["dp_check"] = std::fabs(t - dp) <= 1e-10 * std::max(1.0, t);
  if (o.r > 1.0) {
    const auto b = train::train_length_bounds(o.r, o.H);
    j["bounds"] = {{"lower", b.lower}, {"upper", b.upper}};
  }
  if (o.trials > 0) {
    const auto s = train::simulate_train(o.r, o.H, o.seed, o.trials);
    j["simulation"] = {{"runs", s.runs},         {"mean", s.mean},   {"ci_lo", s.ci_lo},
                       {"ci_hi", s.ci_hi},       {"extinct", s.extinct}, {"seed", o.seed}};
    j["rng"] = Rng::kName;
  }
  return j;
}

json bounds_report(const Options& o) {
  if (o.B < 1 || o.L < 1 || o.H < 2) throw std::invalid_argument("bounds need --B >= 1, --L >= 1, --H >= 2");
  if (!(o.r > 0.0) || !std::isfinite(o.r)) throw std::invalid_argument("--r must be finite and > 0");
  if (o.delta < 0) throw std::invalid_argument("--delta must be >= 1");
  const std::int64_t n = SuperstarSpec{o.B, o.L, o.H}.node_count();
  const std::int64_t delta = o.delta > 0 ? o.delta : closedform::default_delta(o.B);
  json j;
  j["command"] = "bounds";
  j["params"] = {{"r", o.r}, {"B", o.B}, {"L", o.L}, {"H", o.H}, {"N", n}, {"delta", delta}};
  if (o.r == 1.0) throw InvalidRegime("neutral mutant: gamma = 1, no bounds");
  if (o.r < 1.0) {
    const auto d = closedform::deleterious_upper_bound(o.r, o.B, o.L, o.H, delta);
    if (!(d.gamma > 1.0)) throw InvalidRegime("gamma = " + std::to_string(d.gamma) + " <= 1");
    j["regime"] = "deleterious";
    j["T"] = d.T_resident;
    j["gamma"] = d.gamma;
    j["bounds"] = {{"upper", d.bound}, {"upper_log10", d.log10_bound}, {"upper_tight_log10", d.log10_tight}};
    j.update(moran_fields(o.r, static_cast<double>(n)));
    j["note"] = d.note;
    return j;
  }
  const auto rep = closedform::bounds_report(o.r, o.B, o.L, o.H, delta);
  if (!rep.ledger.valid) {
    throw InvalidRegime("gamma = " + std::to_string(rep.ledger.gamma) +
                        " is not > 1 with every error term below 1 (e1, e3, e4_minus)");
  }
  const auto& e = rep.ledger;
  j["regime"] = "advantageous";
  j["T"] = rep.T;
  j["epsilons"] = {{"e0", e.e0},
                   {"e1", e.e1},
                   {"e2", e.e2},
                   {"e3", e.e3},
                   {"e4_minus", e.e4_minus},
                   {"e4_plus", e.e4_plus},
                   {"e5", e.e5},
                   {"e5_log10", e.e5_log10 ? json(*e.e5_log10) : json(nullptr)}};
  j["gamma"] = e.gamma;
  j["bounds"] = {{"lower", rep.finite.lower},
                 {"upper", rep.finite.upper},
                 {"lower_asym", rep.asymptotic.lower},
                 {"upper_asym", rep.asymptotic.upper},
                 {"lower_asym_loose", rep.asymptotic.loose_lower},
                 {"upper_asym_loose", rep.asymptotic.loose_upper}};
  j.update(moran_fields(o.r, static_cast<double>(n)));
  return j;
}

json exact_report(const Options& o) {
  auto [g, params] = choose_graph(o);
  const Rule rule = parse_rule(o.rule);
  const auto x = exact_fixation(g, o.r, rule, o.cap);
  params["r"] = o.r;
  params["rule"] = rule_name(rule);
  json j;
  j["command"] = "exact";
  j["params"] = params;
  j["per_node"] = x.per_node;
  j["average"] = x.average;
  j["residual"] = x.residual;
  j["strongly_connected"] = x.strongly_connected;
  j["warning"] = x.warning;
  j.update(moran_fields(o.r, static_cast<double>(g.size())));
  return j;
}

SimConfig sim_config(const Options& o) {
  SimConfig cfg;
  cfg.r = o.r;
  cfg.rule = parse_rule(o.rule);
  cfg.placement = parse_placement(o.placement);
  cfg.seed = o.seed;
  cfg.max_steps = o.max_steps;
  cfg.engine = parse_engine(o.engine);
  cfg.validate();
  if (o.trials < 1) throw std::invalid_argument("--trials must be >= 1");
  return cfg;
}

json estimate_json(const EstimateReport& rep) {
  return {{"p", rep.p},
          {"ci_lo", rep.ci_lo},
          {"ci_hi", rep.ci_hi},
          {"trials", rep.trials},
          {"successes", rep.successes},
          {"failures", rep.failures},
          {"capped", rep.capped},
          {"requested", rep.requested},
          {"steps_total", rep.steps_total}};
}

json estimate_report(const Options& o, bool one_to_two) {
  Options local = o;
  if (one_to_two) local.placement = "reservoir";
  auto [g, params] = choose_graph(local);
  const SimConfig cfg = sim_config(local);
  params["r"] = cfg.r;
  params["rule"] = rule_name(cfg.rule);
  params["placement"] = placement_name(cfg.placement);
  params["engine"] = engine_name(cfg.engine);
  params["trials"] = local.trials;
  params["seed"] = cfg.seed;
  params["max_steps"] = cfg.step_cap(g.size());
  const EstimateReport rep = one_to_two ? estimate_one_to_two(g, cfg, local.trials)
                                        : estimate_fixation(g, cfg, local.trials);
  json j;
  j["command"] = one_to_two ? "one_to_two" : "simulate";
  j["params"] = params;
  j["estimate"] = estimate_json(rep);
  if (one_to_two) {
    if (cfg.r > 1.0) {
      const double t = train::expected_train_length(cfg.r, local.H);
      j["T"] = t;
      j["reference"] = closedform::reservoir_growth_bias(cfg.r, local.H);
    }
  } else {
    j.update(moran_fields(cfg.r, static_cast<double>(g.size())));
  }
  j["rng"] = {{"generator", Rng::kName}, {"replica_seed", "seed + replica index"}};
  j["warning"] = rep.warning;
  if (o.timing) j["wall_seconds"] = rep.wall_seconds;
  return j;
}

// ---- output ---------------------------------------------------------------

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_null()) return s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, out);
    } else {
      out.emplace_back(key, csv_cell(v));
    }
  }
}

std::string join(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s;
}

void emit(const json& j, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << j.dump(2) << '\n';
    return;
  }
  std::vector<std::pair<std::string, std::string>> cells;
  flatten(j, "", cells);
  std::vector<std::string> head, row;
  for (auto& [k, v] : cells) {
    head.push_back(k);
    row.push_back(v);
  }
  out << join(head) << '\n' << join(row) << '\n';
}

// ---- sweep ----------------------------------------------------------------

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double to_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::vector<std::string> csv_header(const std::string& line) {
  std::vector<std::string> cols;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cols.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cols.push_back(cur);
  return cols;
}

int run_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  auto reals = [&](const std::string& grid, double fallback) {
    return grid.empty() ? std::vector<double>{fallback} : parse_real_grid(grid);
  };
  auto ints = [&](const std::string& grid, int fallback) {
    return grid.empty() ? std::vector<int>{fallback} : parse_int_grid(grid);
  };
  auto words = [&](const std::string& grid, const std::string& fallback) {
    return grid.empty() ? std::vector<std::string>{fallback} : parse_word_list(grid);
  };
  const auto rs = reals(o.r_grid, o.r);
  const auto Bs = ints(o.B_grid, o.B);
  const auto Ls = ints(o.L_grid, o.L);
  const auto Hs = ints(o.H_grid, o.H);
  const auto rule_list = words(o.rule_grid, o.rule);
  const auto placement_list = words(o.placement_grid, o.placement);
  for (const auto& name : rule_list) parse_rule(name);
  for (const auto& name : placement_list) parse_placement(name);
  static const std::vector<std::string> tasks = {"simulate", "one_to_two", "bounds", "trainlen", "exact"};
  if (std::find(tasks.begin(), tasks.end(), o.task) == tasks.end()) {
    throw std::invalid_argument("unknown sweep task '" + o.task + "'");
  }

  std::vector<Options> jobs;
  for (double r : rs)
    for (int B : Bs)
      for (int L : Ls)
        for (int H : Hs)
          for (const auto& rule : rule_list)
            for (const auto& placement : placement_list) {
              Options job = o;
              job.r = r;
              job.B = B;
              job.L = L;
              job.H = H;
              job.rule = rule;
              job.placement = placement;
              jobs.push_back(job);
            }

  std::size_t done = 0;
  std::vector<std::string> header;
  if (o.resume) {
    if (o.out.empty()) throw std::invalid_argument("--resume needs --out");
    std::ifstream prev(o.out);
    std::string line;
    bool first = true;
    while (std::getline(prev, line)) {
      if (line.empty()) continue;
      if (o.format == "csv" && first) {
        header = csv_header(line);
      } else {
        ++done;
      }
      first = false;
    }
  }
  err << json{{"sweep", {{"task", o.task}, {"jobs", jobs.size()}, {"completed", std::min(done, jobs.size())}}}}.dump()
      << '\n';

  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.out.empty()) {
    file.open(o.out, o.resume ? std::ios::app : std::ios::trunc);
    if (!file) throw std::invalid_argument("cannot open --out '" + o.out + "'");
    sink = &file;
  }

  for (std::size_t i = done; i < jobs.size(); ++i) {
    const Options& job = jobs[i];
    json j;
    try {
      if (o.task == "simulate") j = estimate_report(job, false);
      else if (o.task == "one_to_two") j = estimate_report(job, true);
      else if (o.task == "bounds") j = bounds_report(job);
      else if (o.task == "trainlen") j = trainlen_report(job);
      else j = exact_report(job);
    } catch (const InvalidRegime& e) {
      j = {{"command", o.task},
           {"params", {{"r", job.r}, {"B", job.B}, {"L", job.L}, {"H", job.H}}},
           {"error", "invalid_regime"},
           {"message", e.what()}};
    }
    json row = {{"job", i}};
    row.update(j);
    j = std::move(row);
    if (o.format == "json") {
      *sink << j.dump() << '\n';
    } else {
      std::vector<std::pair<std::string, std::string>> cells;
      flatten(j, "", cells);
      if (header.empty()) {
        for (auto& c : cells) header.push_back(c.first);
        *sink << join(header) << '\n';
      }
      std::vector<std::string> row;
      for (const auto& col : header) {
        auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& c) { return c.first == col; });
        row.push_back(it == cells.end() ? std::string() : it->second);
      }
      *sink << join(row) << '\n';
    }
    sink->flush();
  }
  return kOk;
}

void error_line(std::ostream& err, const char* kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

std::vector<double> parse_real_grid(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid '" + text + "' is not start:stop:step");
    const double start = to_real(parts[0]), stop = to_real(parts[1]), step = to_real(parts[2]);
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("grid '" + text + "' needs step > 0, stop >= start");
    const double count = std::floor((stop - start) / step + 1e-9);
    if (count > 1e6) throw std::invalid_argument("grid '" + text + "' is too large");
    for (long k = 0; k <= static_cast<long>(count); ++k) values.push_back(start + static_cast<double>(k) * step);
  } else {
    for (const auto& p : split(text, ',')) values.push_back(to_real(p));
  }
  if (values.empty()) throw std::invalid_argument("empty grid");
  return values;
}

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_real_grid(text)) {
    if (v != std::floor(v) || std::fabs(v) > 2e9) throw std::invalid_argument("grid '" + text + "' needs integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::string> parse_word_list(const std::string& text) {
  auto words = split(text, ',');
  if (words.empty()) throw std::invalid_argument("empty list");
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("empty entry in '" + text + "'");
  }
  return words;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Moran process on superstar graphs: formulas, bounds, exact chains and simulation", "evograph"};
  app.require_subcommand(1);

  auto format_opts = [&](CLI::App* c) {
    c->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--out", o.out, "Write the report to PATH");
  };
  auto graph_opts = [&](CLI::App* c) {
    c->add_option("--family", o.family, "complete | cycle | star (default: superstar from --B --L --H)");
    c->add_option("--n", o.n, "Size for --family");
    c->add_option("--B", o.B, "Superstar branches");
    c->add_option("--L", o.L, "Reservoir nodes per branch");
    c->add_option("--H", o.H, "Stem length");
  };
  auto sim_opts = [&](CLI::App* c) {
    c->add_option("--rule", o.rule, "Bd | bD | dB | Db");
    c->add_option("--placement", o.placement, "uniform | reservoir | fecundity");
    c->add_option("--trials", o.trials, "Replicas");
    c->add_option("--seed", o.seed, "Seed; replica i uses seed + i");
    c->add_option("--max-steps", o.max_steps, "Step cap per replica (default 1000 N^2)");
    c->add_option("--engine", o.engine, "jump | step")->check(CLI::IsMember({"jump", "step"}));
    c->add_flag("--timing", o.timing, "Include wall-clock time (breaks byte-identical output)");
  };

  auto* trainlen = app.add_subcommand("trainlen", "Expected train length T with oracle checks");
  trainlen->add_option("--r", o.r, "Mutant fitness")->required();
  trainlen->add_option("--H", o.H, "Stem length")->required();
  trainlen->add_option("--trials", o.trials, "Simulated trains (0 to skip)");
  trainlen->add_option("--seed", o.seed, "Seed for the simulated trains");
  format_opts(trainlen);

  auto* bounds = app.add_subcommand("bounds", "Finite and asymptotic fixation bounds with the error ledger");
  bounds->add_option("--r", o.r, "Mutant fitness")->required();
  bounds->add_option("--B", o.B, "Branches")->required();
  bounds->add_option("--L", o.L, "Reservoir nodes per branch")->required();
  bounds->add_option("--H", o.H, "Stem length")->required();
  bounds->add_option("--delta", o.delta, "Martingale threshold (default floor(sqrt(B)))");
  format_opts(bounds);

  auto* exact = app.add_subcommand("exact", "Exact fixation probabilities for small graphs");
  exact->add_option("--r", o.r, "Mutant fitness")->required();
  exact->add_option("--rule", o.rule, "Bd | bD | dB | Db");
  exact->add_option("--cap", o.cap, "Largest N accepted");
  graph_opts(exact);
  format_opts(exact);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo fixation estimate");
  simulate->add_option("--r", o.r, "Mutant fitness")->required();
  graph_opts(simulate);
  sim_opts(simulate);
  format_opts(simulate);

  auto* one_to_two = app.add_subcommand("one_to_two", "Probability that a reservoir mutant seeds a second one");
  one_to_two->alias("one-to-two");
  one_to_two->add_option("--r", o.r, "Mutant fitness")->required();
  one_to_two->add_option("--B", o.B, "Branches")->required();
  one_to_two->add_option("--L", o.L, "Reservoir nodes per branch")->required();
  one_to_two->add_option("--H", o.H, "Stem length")->required();
  sim_opts(one_to_two);
  format_opts(one_to_two);

  auto* sweep = app.add_subcommand("sweep", "Grid of jobs, one report line per job");
  sweep->add_option("--task", o.task, "simulate | one_to_two | bounds | trainlen | exact");
  sweep->add_option("--r", o.r_grid, "Grid: a,b,c or start:stop:step");
  sweep->add_option("--B", o.B_grid, "Grid");
  sweep->add_option("--L", o.L_grid, "Grid");
  sweep->add_option("--H", o.H_grid, "Grid");
  sweep->add_option("--rule", o.rule_grid, "List");
  sweep->add_option("--placement", o.placement_grid, "List");
  sweep->add_option("--family", o.family, "complete | cycle | star");
  sweep->add_option("--n", o.n, "Size for --family");
  sweep->add_option("--trials", o.trials, "Replicas per job");
  sweep->add_option("--seed", o.seed, "Seed for every job");
  sweep->add_option("--max-steps", o.max_steps, "Step cap per replica");
  sweep->add_option("--engine", o.engine, "jump | step")->check(CLI::IsMember({"jump", "step"}));
  sweep->add_option("--delta", o.delta, "Martingale threshold for bounds jobs");
  sweep->add_flag("--resume", o.resume, "Skip jobs already present in --out");
  sweep->add_flag("--timing", o.timing, "Include wall-clock time");
  format_opts(sweep);

  auto* graph = app.add_subcommand("graph", "Export a graph as JSON");
  graph_opts(graph);
  graph->add_option("--out", o.out, "Write to PATH");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_line(err, "invalid_argument", e.what());
    return kInvalidArguments;
  }

  try {
    if (*sweep) return run_sweep(o, out, err);

    json report;
    if (*trainlen) report = trainlen_report(o);
    else if (*bounds) report = bounds_report(o);
    else if (*exact) report = exact_report(o);
    else if (*simulate) report = estimate_report(o, false);
    else if (*one_to_two) report = estimate_report(o, true);
    else if (*graph) report = json::parse(graph_to_json(choose_graph(o).graph));

    std::ofstream file;
    std::ostream* sink = &out;
    if (!o.out.empty()) {
      file.open(o.out, std::ios::trunc);
      if (!file) throw std::invalid_argument("cannot open --out '" + o.out + "'");
      sink = &file;
    }
    emit(report, o.format, *sink);
    return kOk;
  } catch (const InvalidRegime& e) {
    error_line(err, "invalid_regime", e.what());
    return kInvalidRegime;
  } catch (const std::invalid_argument& e) {
    error_line(err, "invalid_argument", e.what());
    return kInvalidArguments;
  } catch (const std::out_of_range& e) {
    error_line(err, "invalid_argument", e.what());
    return kInvalidArguments;
  } catch (const std::domain_error& e) {
    error_line(err, "invalid_argument", e.what());
    return kInvalidArguments;
  } catch (const std::exception& e) {
    error_line(err, "runtime_error", e.what());
    return kRuntimeError;
  }
}

}  // namespace evograph::cli
