// Command-line front end: one subcommand per pipeline stage plus the full run.
#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "nvist/errors.hpp"
#include "nvist/evolve.hpp"
#include "nvist/io.hpp"
#include "nvist/pipeline.hpp"

using namespace nvist;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kRefused = 4 };

struct Args {
  std::string config, out, in;
  std::vector<double> taus;
  int workers = 0;
  bool subk_model = false;
  bool allow_supercritical = false;
};

RunConfig effective_config(const Args& a) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_config(a.config);
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (!a.taus.empty()) {
    cfg.tau_schedule = a.taus;
    std::sort(cfg.tau_schedule.begin(), cfg.tau_schedule.end());
  }
  if (a.workers > 0) cfg.workers = a.workers;
  if (a.subk_model) cfg.subk_model = true;
  if (a.allow_supercritical) cfg.allow_supercritical = true;
  validate(cfg);
  return cfg;
}

fs::path out_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  return cfg.output_dir;
}

Field potential_for(const Args& a, const RunConfig& cfg) {
  return a.in.empty() ? generate_potential(cfg) : read_field(a.in);
}

void print(const json& j) { std::cout << std::setw(2) << j << '\n'; }

std::string tau_name(double tau) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << tau;
  return os.str();
}

int run(const std::string& cmd, const Args& a) {
  const RunConfig cfg = effective_config(a);
  if (cmd == "gen-potential") {
    const Field q = generate_potential(cfg);
    const fs::path dir = out_dir(cfg);
    write_field(q, dir / "potential");
    write_field_csv_row(q, q.grid.n / 2, dir / "potential.csv");
    print({{"max_abs_q", q.sup()}, {"integral_q", integrate(q).real()}});
  } else if (cmd == "classify") {
    const json j = to_json(classify_potential(potential_for(a, cfg), cfg));
    std::ofstream(out_dir(cfg) / "classification.json") << std::setw(2) << j << '\n';
    print(j);
  } else if (cmd == "forward") {
    const Field q = potential_for(a, cfg);
    const ClassificationReport rep = classify_potential(q, cfg);
    const ScatteringData sd = forward_stage(q, rep, cfg);
    const fs::path dir = out_dir(cfg);
    write_scattering(sd, dir / "scattering");
    write_scattering_csv(sd, dir / "scattering.csv");
    print(forward_summary(sd, cfg));
  } else if (cmd == "evolve") {
    if (a.in.empty()) throw ConfigError("evolve needs --in SCATTERING_STEM");
    const ScatteringData sd = read_scattering(a.in);
    for (double tau : cfg.tau_schedule) write_scattering(evolve(sd, tau), out_dir(cfg) / ("scattering_tau_" + tau_name(tau)));
  } else if (cmd == "invert") {
    if (a.in.empty()) throw ConfigError("invert needs --in SCATTERING_STEM");
    const ReconstructedState st = invert_stage(read_scattering(a.in), cfg);
    const fs::path dir = out_dir(cfg);
    const std::string tag = tau_name(st.tau);
    write_field(st.q, dir / ("q_tau_" + tag));
    write_field(st.u, dir / ("u_tau_" + tag));
    write_field(st.a1, dir / ("a1_tau_" + tag));
    write_field(st.a2, dir / ("a2_tau_" + tag));
    print({{"tau", st.tau}, {"reality_defect", st.reality_defect}, {"max_iterations", st.max_iterations}});
  } else if (cmd == "solve") {
    const json m = run_pipeline(cfg);
    print({{"status", m["status"]}, {"output_dir", cfg.output_dir}});
  } else if (cmd == "verify") {
    if (a.in.empty()) throw ConfigError("verify needs --in SCATTERING_STEM (tau = 0 data)");
    const ScatteringData sd0 = read_scattering(a.in);
    const Field q0 = generate_potential(cfg);
    json all = json::array();
    for (double tau : cfg.tau_schedule) all.push_back(verify_stage(sd0, invert_stage(evolve(sd0, tau), cfg), cfg, &q0));
    std::ofstream(out_dir(cfg) / "verify.json") << std::setw(2) << all << '\n';
    print(all);
  } else if (cmd == "export-csv") {
    if (a.in.empty()) throw ConfigError("export-csv needs --in STEM");
    std::ifstream hdr(a.in + ".json");
    if (!hdr) throw ConfigError("cannot read " + a.in + ".json");
    const json h = json::parse(hdr);
    const fs::path dir = out_dir(cfg);
    const std::string name = fs::path(a.in).filename().string() + ".csv";
    if (h.value("kind", "") == "k")
      write_scattering_csv(read_scattering(a.in), dir / name);
    else {
      const Field f = read_field(a.in);
      write_field_csv_row(f, f.grid.n / 2, dir / name);
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Novikov-Veselov inverse scattering solver"};
  app.require_subcommand(1);
  Args args;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen-potential", "Sample the configured potential"},
      {"classify", "Quadratic-form and positive-solution classification"},
      {"forward", "Scattering transform t(k) on the k-grid and small-k ray"},
      {"evolve", "Apply the NV phase flow to scattering data"},
      {"invert", "Reconstruct q and u from (evolved) scattering data"},
      {"solve", "Full pipeline with manifest"},
      {"verify", "Reality, identity, NV-residual and oracle checks"},
      {"export-csv", "CSV slice of a field or scattering bundle"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "Output directory");
    sub->add_option("--in", args.in, "Input bundle stem (path without .json/.bin)");
    sub->add_option("--tau", args.taus, "Evolution time (repeatable)")->take_all();
    sub->add_option("--workers", args.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--subk-model", args.subk_model, "Fill the excluded disk with the small-k asymptote of s");
    sub->add_flag("--allow-supercritical", args.allow_supercritical, "Run forward/invert on supercritical input");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run(cmd, args);
  } catch (const SupercriticalRefusal& e) {
    std::cerr << cmd << ": " << e.what() << '\n';
    return kRefused;
  } catch (const ConfigError& e) {
    std::cerr << "config: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericalError& e) {
    std::cerr << e.stage() << ": " << e.what() << '\n';
    return kNumerical;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << cmd << ": " << e.what() << '\n';
    return kNumerical;
  }
}
