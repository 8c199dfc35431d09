#include "helmprec/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "helmprec/experiments.hpp"
#include "helmprec/media.hpp"
#include "helmprec/symbol_interp.hpp"

namespace helmprec::cli {

namespace fs = std::filesystem;

namespace {

/// Bad flags, missing parameters, malformed values: exit code 2.
class ArgumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Command {
  std::string name;
  std::string description;
  std::vector<std::string> keys;
  Settings defaults;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"bench",
       "Time apply_precond over grid sizes and node counts; fit the complexity order",
       {"n", "m", "trials", "seed", "omega", "omega-pi", "out"},
       {{"trials", "5"}, {"seed", "1"}, {"out", "runs"}}},
      {"cond",
       "Dense spectral condition numbers of P and QP on the circular inclusion",
       {"omega", "omega-pi", "ppw", "n", "m", "delta", "eta", "damping", "out", "dump-media"},
       {{"m", "1,2,4,8"}, {"delta", "4"}, {"eta", "0.00125"}, {"damping", "20"}, {"out", "runs"}}},
      {"solve",
       "GMRES with and without the preconditioner (inclusion or phantom case)",
       {"case", "omega", "omega-pi", "ppw", "n", "m", "mtilde", "delta", "eta", "damping", "restart",
        "maxiter", "tol", "out", "dump-media"},
       {{"case", "inclusion"},
        {"m", "8"},
        {"delta", "1"},
        {"eta", "0.00125"},
        {"damping", "20"},
        {"restart", "10"},
        {"maxiter", "100"},
        {"tol", "1e-8"},
        {"out", "runs"}}},
      {"symbol-error",
       "Sup error of the interpolated symbol and observed convergence order",
       {"m", "omega", "omega-pi", "cmin", "cmax", "damping", "xi-n", "out"},
       {{"m", "5,9,17"}, {"cmin", "1"}, {"cmax", "5"}, {"damping", "20"}, {"xi-n", "64"}, {"out", "runs"}}},
      {"dump-media",
       "Write c, a and zeta of a case as HPF1 fields",
       {"case", "n", "ppw", "omega", "omega-pi", "delta", "eta", "damping", "out"},
       {{"case", "inclusion"}, {"delta", "4"}, {"eta", "0.00125"}, {"damping", "20"}, {"out", "runs"}}},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ArgumentError("--" + key + ": expected a number, got '" + text + "'");
  }
  return v;
}

long long to_int(const std::string& key, const std::string& text) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ArgumentError("--" + key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split_list(text)) out.push_back(to_double(key, p));
  if (out.empty()) throw ArgumentError("--" + key + ": empty list");
  return out;
}

std::vector<int> ints(const std::string& key, const std::string& text) {
  std::vector<int> out;
  for (const auto& p : split_list(text)) out.push_back(static_cast<int>(to_int(key, p)));
  if (out.empty()) throw ArgumentError("--" + key + ": empty list");
  return out;
}

bool has(const Settings& s, const std::string& key) { return s.count(key) != 0; }

std::vector<double> omegas_of(const Settings& s) {
  if (has(s, "omega") && has(s, "omega-pi")) throw ArgumentError("give either --omega or --omega-pi, not both");
  if (has(s, "omega")) return doubles("omega", s.at("omega"));
  if (has(s, "omega-pi")) {
    auto w = doubles("omega-pi", s.at("omega-pi"));
    for (double& x : w) x *= std::numbers::pi;
    return w;
  }
  throw ArgumentError("missing required parameter --omega (or --omega-pi)");
}

void require(const Settings& s, const std::string& key) {
  if (!has(s, key)) throw ArgumentError("missing required parameter --" + key);
}

ExperimentSpec spec_from(const Settings& s, bool needOmega, bool needSize) {
  ExperimentSpec spec;
  if (needOmega) spec.omegas = omegas_of(s);
  if (has(s, "ppw") && has(s, "n") && needSize) throw ArgumentError("give either --ppw or --n, not both");
  if (has(s, "ppw")) spec.ppw = to_double("ppw", s.at("ppw"));
  if (has(s, "n")) spec.ns = ints("n", s.at("n"));
  if (needSize && !spec.ppw && spec.ns.empty()) throw ArgumentError("missing required parameter --ppw (or --n)");
  if (has(s, "m")) spec.ms = ints("m", s.at("m"));
  if (has(s, "mtilde")) spec.mTilde = static_cast<int>(to_int("mtilde", s.at("mtilde")));
  if (has(s, "delta")) spec.delta = to_double("delta", s.at("delta"));
  if (has(s, "eta")) spec.eta = to_double("eta", s.at("eta"));
  if (has(s, "damping")) spec.damping = to_double("damping", s.at("damping"));
  if (has(s, "case")) spec.caseId = s.at("case");
  if (has(s, "trials")) spec.trials = static_cast<int>(to_int("trials", s.at("trials")));
  if (has(s, "seed")) spec.seed = static_cast<std::uint64_t>(to_int("seed", s.at("seed")));
  if (has(s, "restart")) spec.restart = static_cast<int>(to_int("restart", s.at("restart")));
  if (has(s, "maxiter")) spec.maxIter = static_cast<int>(to_int("maxiter", s.at("maxiter")));
  if (has(s, "tol")) spec.tol = to_double("tol", s.at("tol"));
  if (has(s, "cmin")) spec.cMin = to_double("cmin", s.at("cmin"));
  if (has(s, "cmax")) spec.cMax = to_double("cmax", s.at("cmax"));
  if (has(s, "xi-n")) spec.xiN = static_cast<int>(to_int("xi-n", s.at("xi-n")));
  if (spec.caseId != "inclusion" && spec.caseId != "phantom") {
    throw ArgumentError("--case: expected inclusion or phantom, got '" + spec.caseId + "'");
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ArgumentError(e.what());
  }
  return spec;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string run_tag(const std::string& subcommand, Settings s) {
  s.erase("out");
  s.erase("dump-media");
  std::ostringstream tag;
  tag << std::hex << std::setw(16) << std::setfill('0') << fnv1a(render_settings(subcommand, s));
  return tag.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void dump_media(const fs::path& dir, const MediaModel& media) {
  fs::create_directories(dir);
  write_hpf1((dir / "c.hpf").string(), media.c);
  write_hpf1((dir / "a.hpf").string(), media.a);
  write_hpf1((dir / "zeta.hpf").string(), media.zeta);
}

void run_bench(const Settings& s, const fs::path& dir, std::ostream& out) {
  require(s, "n");
  require(s, "m");
  ExperimentSpec spec = spec_from(s, false, false);
  const double omega = (has(s, "omega") || has(s, "omega-pi")) ? omegas_of(s).front() : 40.0 * std::numbers::pi;
  const BenchResult r = bench_complexity(spec.ns, spec.ms, spec.trials, omega);
  write_bench_csv((dir / "bench.csv").string(), r);
  for (const auto& [m, beta] : r.betaByM) out << "bench: M=" << m << " beta=" << format_double(beta) << '\n';
  out << "bench: pooled beta=" << format_double(r.beta) << '\n';
}

void run_cond(const Settings& s, const fs::path& dir, std::ostream& out) {
  const ExperimentSpec spec = spec_from(s, true, true);
  if (has(s, "dump-media")) {
    const Grid2D grid(resolve_grid_sizes(spec, spec.omegas.front()).front(), 1.0);
    dump_media(s.at("dump-media"), case_media(spec, grid));
  }
  const auto rows = cond_sweep(spec);
  write_cond_csv((dir / "cond.csv").string(), rows);
  for (const auto& r : rows) {
    out << "cond: omega=" << format_double(r.omega) << " N=" << r.n << " M=" << r.m
        << " cond_P=" << format_csv_number(r.condP) << " cond_QP=" << format_csv_number(r.condQP) << '\n';
  }
}

void run_solve(const Settings& s, const fs::path& dir, std::ostream& out) {
  const ExperimentSpec spec = spec_from(s, true, true);
  if (spec.omegas.size() != 1 || spec.ms.size() != 1) throw ArgumentError("solve takes a single --omega and --m");
  const SolveCaseResult r = solve_case(spec);
  if (has(s, "dump-media")) dump_media(s.at("dump-media"), r.media);
  write_residual_csv((dir / "residuals_unpreconditioned.csv").string(), r.unpreconditioned);
  write_residual_csv((dir / "residuals_preconditioned.csv").string(), r.preconditioned);
  write_hpf1((dir / "solution.hpf").string(), r.solution);
  write_pgm((dir / "amplitude.pgm").string(), r.solution, false);
  if (spec.caseId == "phantom") write_pgm((dir / "amplitude_log10.pgm").string(), r.solution, true);
  out << "solve: case=" << spec.caseId << " N=" << r.n << " plan tables=" << r.planTables
      << " entries=" << r.planEntries << '\n';
  out << "solve: unpreconditioned relres=" << format_csv_number(r.unpreconditioned.final_residual())
      << " after " << r.unpreconditioned.iterations << " iterations\n";
  out << "solve: preconditioned relres=" << format_csv_number(r.preconditioned.final_residual()) << " after "
      << r.preconditioned.iterations << " iterations\n";
}

void run_symbol_error(const Settings& s, const fs::path& dir, std::ostream& out) {
  const ExperimentSpec spec = spec_from(s, true, false);
  const auto r = symbol_error_study(spec.ms, spec.omegas.front(), spec.cMin, spec.cMax, spec.damping, spec.xiN);
  write_symbol_error_csv((dir / "symbol_error.csv").string(), r);
  for (const auto& row : r.rows) {
    out << "symbol-error: M=" << row.m << " h=" << format_double(row.step)
        << " sup_error=" << format_csv_number(row.supError) << '\n';
  }
  out << "symbol-error: observed order=" << format_double(r.order) << '\n';
}

void run_dump_media(const Settings& s, const fs::path& dir, std::ostream& out) {
  ExperimentSpec spec = spec_from(s, has(s, "omega") || has(s, "omega-pi"), false);
  int n = 0;
  if (has(s, "n")) {
    n = spec.ns.front();
  } else if (spec.ppw && !spec.omegas.empty()) {
    n = grid_size_for_ppw(*spec.ppw, spec.omegas.front());
  } else {
    throw ArgumentError("dump-media needs --n or --ppw with --omega");
  }
  dump_media(dir, case_media(spec, Grid2D(n, 1.0)));
  out << "dump-media: wrote c.hpf a.hpf zeta.hpf to " << dir.string() << '\n';
}

}  // namespace

Settings parse_config_text(const std::string& text) {
  Settings s;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError("config line " + std::to_string(lineNo) + ": expected key=value");
    }
    s[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return s;
}

Settings read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ArgumentError("cannot read config file " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

std::string render_settings(const std::string& subcommand, const Settings& settings) {
  std::ostringstream out;
  out << "# helmprec " << subcommand << '\n';
  for (const auto& [k, v] : settings) out << k << '=' << v << '\n';
  return out.str();
}

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpolated pseudodifferential preconditioner experiments for the 2D Helmholtz equation",
               "helmprec"};
  app.require_subcommand(1, 1);

  std::map<std::string, Settings> flagValues;
  std::map<std::string, std::string> configPaths;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands()) {
    CLI::App* sc = app.add_subcommand(cmd.name, cmd.description);
    for (const auto& key : cmd.keys) sc->add_option("--" + key, flagValues[cmd.name][key]);
    sc->add_option("--config", configPaths[cmd.name], "key=value file; flags take precedence");
    subs[cmd.name] = sc;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Command* cmd = nullptr;
  for (const auto& c : commands()) {
    if (subs[c.name]->parsed()) cmd = &c;
  }
  CLI::App* sc = subs[cmd->name];

  Settings resolved;
  fs::path runDir;
  try {
    const std::set<std::string> allowed(cmd->keys.begin(), cmd->keys.end());
    if (!configPaths[cmd->name].empty()) {
      for (const auto& [k, v] : read_config_file(configPaths[cmd->name])) {
        if (!allowed.count(k)) throw ArgumentError("config file: unknown key '" + k + "' for " + cmd->name);
        resolved[k] = v;
      }
    }
    for (const auto& key : cmd->keys) {
      if (sc->count("--" + key) > 0) resolved[key] = flagValues[cmd->name][key];
    }
    for (const auto& [k, v] : cmd->defaults) resolved.emplace(k, v);

    const fs::path outRoot = resolved.at("out");
    runDir = outRoot / cmd->name / run_tag(cmd->name, resolved);
    // Parse everything up front so argument problems exit with code 2
    // before any file is written.
    (void)spec_from(resolved, cmd->name == "cond" || cmd->name == "solve" || cmd->name == "symbol-error",
                    cmd->name == "cond" || cmd->name == "solve");
    fs::create_directories(runDir);
    const std::string rendered = render_settings(cmd->name, resolved);
    write_text(outRoot / "config.resolved", rendered);
    write_text(runDir / "config.resolved", rendered);
  } catch (const ArgumentError& e) {
    err << "helmprec " << cmd->name << ": " << e.what() << "\n\n" << sc->help();
    return 2;
  } catch (const std::exception& e) {
    err << "helmprec " << cmd->name << ": error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (cmd->name == "bench") run_bench(resolved, runDir, out);
    if (cmd->name == "cond") run_cond(resolved, runDir, out);
    if (cmd->name == "solve") run_solve(resolved, runDir, out);
    if (cmd->name == "symbol-error") run_symbol_error(resolved, runDir, out);
    if (cmd->name == "dump-media") run_dump_media(resolved, runDir, out);
    out << "output: " << runDir.string() << '\n';
  } catch (const ArgumentError& e) {
    err << "helmprec " << cmd->name << ": " << e.what() << "\n\n" << sc->help();
    return 2;
  } catch (const std::exception& e) {
    err << "helmprec " << cmd->name << ": error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace helmprec::cli
