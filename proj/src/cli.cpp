#include "cyclefem/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cyclefem/errors.hpp"

namespace cyclefem::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string header(const RunConfig& c, const char* stage) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# cyclefem %s stage=%s config=%016llx\n", kVersion, stage,
                static_cast<unsigned long long>(c.hash));
  return buf;
}

fs::path output_dir(const RunConfig& c) {
  const fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + c.out_dir + ": " + ec.message());
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) throw IoError("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string join(const Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

}  // namespace

void run_equilibria(const RunConfig& c, std::ostream& log) {
  const auto model = make_model(c);
  const Vector u_start = c.guess ? newton_equilibrium(*model, c.lambda_start, *c.guess, c.equilibrium_newton).u
                                 : find_initial_equilibrium(*model, c.lambda_start, *c.search_box);
  const EquilibriumPoint start = make_equilibrium_point(*model, c.lambda_start, u_start, c.equilibrium_newton);
  const int direction = c.lambda_target > c.lambda_start ? 1 : -1;
  const EquilibriumPoint second = tangent_step(*model, start, c.equilibrium_ds, direction, c.equilibrium_newton);
  EquilibriumBranch branch =
      continue_equilibria(*model, start, second, c.equilibrium_ds, c.equilibrium_steps, c.equilibrium_newton);

  bool reached = false;
  for (std::size_t i = 0; i < branch.points.size(); ++i) {
    if ((branch.points[i].lambda - c.lambda_target) * direction >= 0.0) {
      branch.points.resize(i + 1);
      reached = true;
      break;
    }
  }
  log << "equilibria: " << branch.points.size() << " points, lambda " << fmt(branch.points.front().lambda)
      << " .. " << fmt(branch.points.back().lambda) << '\n';
  for (const auto& w : branch.warnings) log << "equilibria: warning: " << w << '\n';

  const auto brackets = scan_branch_for_hopf(*model, branch);
  std::string report = header(c, "equilibria");
  report += "# Hopf brackets: sign changes of the largest real part over complex eigenvalues\n";
  if (brackets.empty()) report += "# none found\n";
  for (std::size_t b = 0; b < brackets.size(); ++b) {
    const EquilibriumPoint& lo = branch.points[brackets[b].first];
    const EquilibriumPoint& hi = branch.points[brackets[b].second];
    const EquilibriumPoint seed = refine_hopf_bracket(*model, lo, hi, c.equilibrium_newton);
    log << "equilibria: bracket " << b + 1 << " at lambda " << fmt(seed.lambda) << '\n';
    report += "\n[bracket " + std::to_string(b + 1) + "]\n";
    report += "step_lo = " + std::to_string(brackets[b].first) + "\n";
    report += "lambda_lo = " + fmt(lo.lambda) + "\nlambda_hi = " + fmt(hi.lambda) + "\n";
    report += "test_lo = " + fmt(*lo.test_function) + "\ntest_hi = " + fmt(*hi.test_function) + "\n";
    report += "seed_lambda = " + fmt(seed.lambda) + "\nseed_u = " + join(seed.u) + "\n";
  }

  const fs::path dir = output_dir(c);
  std::ostringstream csv;
  csv << header(c, "equilibria");
  write_branch_csv(csv, branch, model->component_names());
  write_file(dir / "equilibria.csv", csv.str());
  write_file(dir / "hopf_brackets.txt", report);

  if (branch.failure && !reached) throw ConvergenceError("equilibrium branch stopped: " + *branch.failure, {});
}

void run_hopf(const RunConfig& c, std::ostream& log) {
  const auto model = make_model(c);
  double lambda = 0.0;
  Vector u;
  if (c.seed_lambda) {
    lambda = *c.seed_lambda;
    u = *c.seed_u;
  } else {
    std::istringstream in(read_file(fs::path(c.out_dir) / "hopf_brackets.txt"));
    ConfigTable report;
    try {
      report = parse_config(in);
    } catch (const ConfigError& e) {
      throw IoError(std::string("hopf_brackets.txt: ") + e.what());
    }
    const auto section = report.find("bracket " + std::to_string(c.bracket + 1));
    if (section == report.end())
      throw NotHopfError("the bracket report has no bracket " + std::to_string(c.bracket + 1));
    try {
      lambda = std::stod(section->second.at("seed_lambda"));
      std::stringstream ss(section->second.at("seed_u"));
      for (std::string item; std::getline(ss, item, ',');) u.push_back(std::stod(item));
    } catch (const std::exception& e) {
      throw IoError(std::string("hopf_brackets.txt: unreadable seed: ") + e.what());
    }
    if (u.size() != model->dim()) throw IoError("hopf_brackets.txt: seed does not match the model dimension");
  }

  HopfGuessOptions guess_options;
  guess_options.k = c.hopf_k;
  const HopfPoint p = refine_hopf(*model, hopf_initial_guess(*model, lambda, u, guess_options), c.hopf_newton);
  log << "hopf: lambda " << fmt(p.lambda) << " beta " << fmt(p.beta) << " period " << fmt(p.period())
      << " residual " << p.residual << '\n';

  std::ostringstream out;
  out << header(c, "hopf");
  write_hopf_point(out, p);
  write_file(output_dir(c) / "hopf_point.txt", out.str());
}

void run_cycles(const RunConfig& c, std::ostream& log) {
  const auto model = make_model(c);
  const fs::path hopf_path = c.hopf_file ? fs::path(*c.hopf_file) : fs::path(c.out_dir) / "hopf_point.txt";
  std::istringstream in(read_file(hopf_path));
  const HopfPoint hopf = read_hopf_point(in);
  if (hopf.u.size() != model->dim()) throw IoError(hopf_path.string() + " does not match the model dimension");

  const Mesh mesh(c.n_elements);
  const CycleBranch branch = run_cycle_continuation(*model, mesh, hopf, c.cycles, [&](const CycleSolution& s) {
    if (s.step % 10 == 0 || s.step == 1)
      log << "cycles: step " << s.step << " lambda " << fmt(s.lambda) << " T " << fmt(s.period) << '\n';
  });
  const auto names = model->component_names();
  const fs::path dir = output_dir(c);

  std::ostringstream full, summary;
  full << header(c, "cycles");
  write_cycle_branch_csv(full, branch, names);
  summary << header(c, "cycles");
  write_cycle_summary_csv(summary, branch, names);
  write_file(dir / "cycles.csv", full.str());
  write_file(dir / "cycles_summary.csv", summary.str());

  // Cycles to export: the requested steps, and at each requested lambda the
  // nearer end of every branch segment that crosses it.
  std::set<std::size_t> chosen;
  const auto& cy = branch.cycles;
  for (std::size_t i = 0; i < cy.size(); ++i)
    if (std::find(c.export_steps.begin(), c.export_steps.end(), cy[i].step) != c.export_steps.end()) chosen.insert(i);
  for (const double target : c.export_lambda)
    for (std::size_t i = 1; i < cy.size(); ++i)
      if ((cy[i - 1].lambda - target) * (cy[i].lambda - target) <= 0.0)
        chosen.insert(std::abs(cy[i - 1].lambda - target) <= std::abs(cy[i].lambda - target) ? i - 1 : i);
  if (chosen.empty() && !cy.empty() && c.export_steps.empty() && c.export_lambda.empty()) chosen.insert(cy.size() - 1);

  std::string manifest = header(c, "cycles");
  manifest += "cycles = " + std::to_string(cy.size()) + "\n";
  manifest += "failure = " + (branch.failure ? *branch.failure : std::string("none")) + "\n";
  manifest += "file = cycles.csv\nfile = cycles_summary.csv\n";

  for (const auto& [a, b] : c.projections) {
    auto axis = [&](const std::string& name) -> std::ptrdiff_t {
      if (name == "lambda") return -1;
      return std::find(names.begin(), names.end(), name) - names.begin();
    };
    const std::ptrdiff_t ia = axis(a), ib = axis(b);
    std::string text = header(c, "cycles");
    text += "# " + a + " " + b + "; one block per exported cycle, closed (first node repeated)\n";
    for (const std::size_t i : chosen) {
      const CycleSolution& s = cy[i];
      text += "\n# step " + std::to_string(s.step) + " lambda " + fmt(s.lambda) + " T " + fmt(s.period) + "\n";
      const std::size_t nodes = mesh.unknown_nodes();
      for (std::size_t j = 0; j <= nodes; ++j) {
        const std::size_t node = j % nodes;
        const double x = ia < 0 ? s.lambda : s.states.at(node, static_cast<std::size_t>(ia));
        const double y = ib < 0 ? s.lambda : s.states.at(node, static_cast<std::size_t>(ib));
        text += fmt(x) + " " + fmt(y) + "\n";
      }
    }
    const std::string file = "proj_" + a + "_" + b + ".dat";
    write_file(dir / file, text);
    manifest += "file = " + file + "\n";
  }
  if (!c.projections.empty()) {
    for (const std::size_t i : chosen)
      manifest += "exported = step " + std::to_string(cy[i].step) + " lambda " + fmt(cy[i].lambda) + " T " +
                  fmt(cy[i].period) + "\n";
  }
  write_file(dir / "manifest.txt", manifest);

  log << "cycles: " << cy.size() << " accepted";
  if (!cy.empty()) log << ", last lambda " << fmt(cy.back().lambda) << " T " << fmt(cy.back().period);
  log << '\n';
  if (branch.failure) throw ConvergenceError("cycle branch stopped at " + *branch.failure, {});
}

int run(int argc, const char* const* argv, std::ostream& log) {
  CLI::App app{"Equilibria, Hopf points and limit-cycle branches of one-parameter ODE systems"};
  std::string config_path, out_dir;
  for (const char* stage : {"equilibria", "hopf", "cycles"}) {
    CLI::App* sub = app.add_subcommand(stage);
    sub->add_option("--config", config_path, "run configuration")->required();
    sub->add_option("--out", out_dir, "output directory, overrides [output] dir");
  }
  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, log, log) == 0 ? kOk : kConfigFailure;
  }
  const std::string stage = app.get_subcommands().front()->get_name();

  try {
    RunConfig config = load_run_config(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (stage == "equilibria") run_equilibria(config, log);
    if (stage == "hopf") run_hopf(config, log);
    if (stage == "cycles") run_cycles(config, log);
    return kOk;
  } catch (const ConfigError& e) {
    log << stage << ": config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const IoError& e) {
    log << stage << ": i/o error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    log << stage << ": " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace cyclefem::cli
