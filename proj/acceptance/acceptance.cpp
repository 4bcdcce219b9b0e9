// Acceptance run at desk defaults: x-grid 128^2 on [-4, 4]^2, k-grid 64^2 with k_max 6.
// Prints one PASS/FAIL line per criterion; --strict turns any FAIL into exit status 1.
#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <sys/wait.h>

#include "nvist/cgo.hpp"
#include "nvist/config.hpp"
#include "nvist/errors.hpp"
#include "nvist/evolve.hpp"
#include "nvist/io.hpp"
#include "nvist/oracle.hpp"
#include "nvist/pipeline.hpp"
#include "nvist/potentials.hpp"
#include "nvist/reconstruct.hpp"

using namespace nvist;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

struct Settings {
  int workers = 1;
  std::string cache;
  std::string cli;
  std::set<int> only;
  bool strict = false;
};

class Run {
 public:
  explicit Run(Settings s) : s_(std::move(s)), x_(make_grid(4.0, 128)) {}

  bool wanted(int id) const { return s_.only.empty() || s_.only.count(id) > 0; }

  void report(int id, bool pass, const std::string& detail, double secs) {
    failures_ += pass ? 0 : 1;
    std::cout << "criterion " << std::setw(2) << id << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << "  ["
              << std::fixed << std::setprecision(1) << secs << " s]" << std::defaultfloat << std::endl;
  }

  void info(const std::string& what) { std::cout << "  info: " << what << std::endl; }

  int failures() const { return failures_; }
  bool cached(const std::string& name) const { return cached_.count(name) > 0; }
  const Settings& settings() const { return s_; }
  const Grid2D& xgrid() const { return x_; }

  Field potential(double epsilon = 0.0, double scale = 1.0) const {
    PotentialSpec spec;
    if (epsilon != 0.0) {
      spec.family = PotentialFamily::perturbed;
      spec.epsilon = epsilon;
    }
    Field q = make_potential(x_, spec);
    q.values *= scale;
    return q;
  }

  ReconstructOptions recon(int recon_n = 64) const {
    ReconstructOptions o;
    o.workers = s_.workers;
    o.recon_n = recon_n;
    o.reality_tol = std::numeric_limits<double>::infinity();  // measured, not enforced
    return o;
  }

  /// Forward transform, read from the cache directory when one is given.
  const ScatteringData& forward(const std::string& name, const Field& q, double k_max, int m,
                                double* secs = nullptr) {
    auto it = data_.find(name);
    if (it != data_.end()) {
      if (secs) *secs = forward_secs_[name];
      return it->second;
    }
    const fs::path stem = s_.cache.empty() ? fs::path{} : fs::path(s_.cache) / name;
    const auto t0 = Clock::now();
    ScatteringData sd;
    if (!stem.empty() && fs::exists(stem.string() + ".json")) {
      sd = read_scattering(stem);
      cached_.insert(name);
    } else {
      ForwardOptions fo;
      fo.workers = s_.workers;
      sd = scattering_transform(q, make_kgrid(k_max, m, 2, RunConfig{}.ray), fo);
      if (!stem.empty()) {
        fs::create_directories(s_.cache);
        write_scattering(sd, stem);
      }
    }
    forward_secs_[name] = seconds_since(t0);
    if (secs) *secs = forward_secs_[name];
    return data_.emplace(name, std::move(sd)).first->second;
  }

  const ScatteringData& critical_data(double* secs = nullptr) {
    return forward("critical_6_64", potential(), 6.0, 64, secs);
  }

  /// Reconstructions of the default critical data, memoized by tau.
  const ReconstructedState& state(double tau, double* secs = nullptr) {
    auto it = states_.find(tau);
    if (it == states_.end()) {
      const auto t0 = Clock::now();
      it = states_.emplace(tau, reconstruct_q(evolve(critical_data(), tau), x_, recon())).first;
      state_secs_[tau] = seconds_since(t0);
    }
    if (secs) *secs = state_secs_[tau];
    return it->second;
  }

 private:
  Settings s_;
  Grid2D x_;
  int failures_ = 0;
  std::map<std::string, ScatteringData> data_;
  std::map<std::string, double> forward_secs_;
  std::set<std::string> cached_;
  std::map<double, ReconstructedState> states_;
  std::map<double, double> state_secs_;
};

void roundtrip(Run& run) {
  const auto t0 = Clock::now();
  const Field q0 = run.potential();
  double fwd = 0.0, inv = 0.0;
  run.critical_data(&fwd);
  const double err6 = relative_sup_error(run.state(0.0, &inv).q, q0);
  const double wall6 = fwd + inv;

  // the k_max 8 band reaches |xi| = 16, past the Nyquist of a 64^2 recon grid on the doubled box
  const ScatteringData& sd8 = run.forward("critical_8_96", q0, 8.0, 96);
  const double err8 = relative_sup_error(reconstruct_q(sd8, run.xgrid(), run.recon(128)).q, q0);
  const bool pass = err6 <= 0.05 && err8 <= 0.025 && err8 < err6 && wall6 <= 600.0;
  run.report(1, pass,
             "roundtrip rel sup error " + sci(err6) + " (<= 5e-2) at k_max 6, m 64; " + sci(err8) +
                 " (<= 2.5e-2) at k_max 8, m 96; forward + inverse " + sci(wall6) + " s (<= 600)" +
                 (run.cached("critical_6_64") ? ", forward read from cache" : ""),
             seconds_since(t0));
}

void symmetry(Run& run) {
  double fwd = 0.0;
  const ScatteringData& crit = run.critical_data();
  const ScatteringData& sub = run.forward("subcritical_6_64", run.potential(0.1), 6.0, 64, &fwd);
  const auto t0 = Clock::now();
  const double sc = symmetry_defect(crit), ss = symmetry_defect(sub);
  const double xc = x_norm(crit, 1, 1.5, 0.1).symmetry_defect, xs = x_norm(sub, 1, 1.5, 0.1).symmetry_defect;
  const double secs = seconds_since(t0);
  const double worst = std::max({sc, ss, xc, xs});
  run.report(2, worst <= 1e-6 && secs <= 120.0,
             "symmetry defect critical " + sci(sc) + ", subcritical " + sci(ss) + "; X-relation defect " + sci(xc) +
                 ", " + sci(xs) + " (all <= 1e-6); checks " + sci(secs) + " s (<= 120)",
             secs);
}

void reality(Run& run) {
  const auto t0 = Clock::now();
  std::string detail = "max|Im q|/max|q|";
  bool pass = true;
  for (double tau : {0.0, 0.05, 0.1}) {
    const double d = run.state(tau).reality_defect;
    pass = pass && d <= 1e-3;
    detail += " tau " + sci(tau) + ": " + sci(d) + ";";
  }
  run.report(3, pass, detail + " (<= 1e-3)", seconds_since(t0));
}

void residual(Run& run) {
  const auto t0 = Clock::now();
  const ScatteringData& sd = run.critical_data();
  const NvResidual a = nv_residual(sd, run.xgrid(), 0.05, 1e-3, run.recon());
  const NvResidual b = nv_residual(sd, run.xgrid(), 0.05, 5e-4, run.recon());
  run.report(4, a.rel_norm <= 5e-2 && b.rel_norm <= a.rel_norm,
             "NV residual rel norm at tau 0.05: " + sci(a.rel_norm) + " with dtau 1e-3 (<= 5e-2), " + sci(b.rel_norm) +
                 " with dtau 5e-4 (not larger)",
             seconds_since(t0));
}

void oracle(Run& run) {
  const auto t0 = Clock::now();
  const double tau = 0.05;
  const Field q0 = run.potential();
  const double full = relative_sup_error(run.state(tau).q, step_nv_padded(q0, tau, 2));

  const Field weak = run.potential(0.0, 1e-3);
  const ScatteringData& sdw = run.forward("weak_6_64", weak, 6.0, 64);
  const ReconstructedState w0 = reconstruct_q(sdw, run.xgrid(), run.recon());
  const ReconstructedState w1 = reconstruct_q(evolve(sdw, tau), run.xgrid(), run.recon());
  const double lin = relative_sup_error(w1.q, linear_solution_padded(weak, tau, 2));
  run.report(5, full <= 0.05 && lin <= 1e-3,
             "tau 0.05 vs direct integrator " + sci(full) + " (<= 5e-2); amplitude 1e-3 vs linear solution " +
                 sci(lin) + " (<= 1e-3)",
             seconds_since(t0));
  run.info("amplitude 1e-3 at tau 0: roundtrip " + sci(relative_sup_error(w0.q, weak)) +
           "; q(tau) vs linear flow of the reconstructed q(0): " +
           sci(relative_sup_error(w1.q, crop(linear_solution(w0.q_wide, tau), run.xgrid()))));
  const NvResidual r = nv_residual(sdw, run.xgrid(), tau, 1e-3, run.recon(), true);
  run.info("amplitude 1e-3 linearized residual at tau 0.05: " + sci(r.rel_norm) + " (5e-2 expected)");
}

void small_k(Run& run) {
  const auto t0 = Clock::now();
  const Field qs = run.potential(0.1);
  const ClassificationReport rep = classify(qs);
  const SmallKFit sub = small_k_fit(run.forward("subcritical_6_64", qs, 6.0, 64), rep.c_inf_est);
  const SmallKFit crit = small_k_fit(run.critical_data(), 1.0);
  const double target = -2.0 / M_PI;
  const double rel = std::abs(sub.slope - target) / std::abs(target);
  const double ratio = crit.first_decade_max > 0.0 ? crit.final_decade_max / crit.first_decade_max : 0.0;
  run.report(6, rel <= 0.15 && ratio < 0.1,
             "subcritical d(1/t)/dlog|k| = " + sci(sub.slope) + " vs -2/pi (off by " + sci(rel) +
                 ", <= 0.15); critical final/first decade max|t| " + sci(ratio) + " (< 0.1)",
             seconds_since(t0));
}

void criticality(Run& run) {
  const auto t0 = Clock::now();
  const Field q = run.potential();
  const Field b = bump(run.xgrid(), 0.0, 1.0);
  bool flip = true, monotone = true;
  double prev = -std::numeric_limits<double>::infinity(), at_zero = 0.0, tol = 0.0;
  std::string lams;
  for (double eps : {-0.2, -0.1, -0.05, 0.0, 0.05, 0.1, 0.2}) {
    const ClassificationReport r = classify_by_form(perturb(q, b, eps));
    const bool super = r.class_guess == PotentialClass::supercritical;
    flip = flip && (super == (eps < 0.0));
    monotone = monotone && r.lambda_min >= prev;
    prev = r.lambda_min;
    if (eps == 0.0) {
      at_zero = r.lambda_min;
      tol = r.tol_eig;
    }
    lams += (lams.empty() ? "" : ", ") + sci(r.lambda_min);
  }
  const bool zero_ok = std::abs(at_zero) <= tol;
  run.report(7, flip && monotone && zero_ok,
             std::string("lambda_min over eps -0.2..0.2: ") + lams + "; flip at 0 " + (flip ? "yes" : "no") +
                 ", |lambda_min(0)| " + sci(std::abs(at_zero)) + " (<= tol_eig " + sci(tol) + "), monotone " +
                 (monotone ? "yes" : "no"),
             seconds_since(t0));
}

void identities(Run& run) {
  const auto t0 = Clock::now();
  const IdentityDefects a = identity_defects(run.state(0.0));
  const IdentityDefects b = identity_defects(run.state(0.05));
  const double worst = std::max({a.d1, a.d2, b.d1, b.d2});
  run.report(8, worst <= 0.05,
             "d1, d2 at tau 0: " + sci(a.d1) + ", " + sci(a.d2) + "; at tau 0.05: " + sci(b.d1) + ", " + sci(b.d2) +
                 " (<= 5e-2)",
             seconds_since(t0));
}

void exceptional(Run& run) {
  const auto t0 = Clock::now();
  const ScatteringData& sd = run.forward("supercritical_6_64", run.potential(-0.5), 6.0, 64);
  int flagged = sd.exceptional_count();
  for (const RaySample& r : sd.ray) flagged += r.exceptional ? 1 : 0;
  const bool found = flagged > 0 || !sd.rings.empty();
  std::string rings;
  for (const ExceptionalRing& r : sd.rings) rings += (rings.empty() ? "" : ", ") + sci(r.radius);

  int code = -1;
  if (!run.settings().cli.empty()) {
    const fs::path dir = fs::temp_directory_path() / "nvist_acceptance";
    fs::create_directories(dir);
    std::ofstream(dir / "super.ini") << "[potential]\nfamily = perturbed\nepsilon = -0.5\n[run]\noutput_dir = "
                                     << (dir / "out").string() << "\n";
    const std::string cmd = run.settings().cli + " solve --config " + (dir / "super.ini").string() + " >" +
                            (dir / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  RunConfig cfg;
  bool refused = false;
  try {
    invert_stage(sd, cfg);
  } catch (const SupercriticalRefusal&) {
    refused = true;
  }
  run.report(9, found && code == 4 && refused,
             "epsilon -0.5: " + std::to_string(flagged) + " flagged samples, rings at |k| = [" + rings +
                 "]; CLI solve exit code " + std::to_string(code) + " (4); inversion of the flagged data " +
                 (refused ? "refused" : "not refused"),
             seconds_since(t0));
}

void infrastructure(Run& run) {
  const auto t0 = Clock::now();
  // dbar(P f) = f on compactly supported random blobs
  const Grid2D g = make_grid(4.0, 256);
  const CauchyOperator P(g);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(-1.2, 1.2), width(0.3, 0.6), amp(-1.0, 1.0);
  double cauchy = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Complex c[3], a[3];
    double w[3];
    for (int j = 0; j < 3; ++j) c[j] = {pos(rng), pos(rng)}, w[j] = width(rng), a[j] = {amp(rng), amp(rng)};
    const Field f = Field::sample(g, [&](Complex x) {
      Complex v = 0.0;
      for (int j = 0; j < 3; ++j) v += a[j] * std::exp(-std::norm(x - c[j]) / (w[j] * w[j]));
      return v;
    });
    const Field back = spectral_derivative(P.apply(f), Derivative::dbar, cauchy_tail(f, 12));
    cauchy = std::max(cauchy, sup_distance(back, f) / f.sup());
  }

  // Faddeev multiplier against dbar (d + ik)
  double faddeev = 0.0;
  const Field h = Field::sample(g, [](Complex x) { return std::exp(-4.0 * std::norm(x)) * (1.0 + x); });
  for (Complex k : {Complex(1.0, 0.5), Complex(-0.3, 2.0), Complex(0.05, -0.02)}) {
    const FaddeevMultiplier m = faddeev_multiplier(g, k);
    faddeev = std::max(faddeev, relative_sup_error(faddeev_operator(apply_multiplier(m, h), m.k), h));
  }

  // phase flow: group law, |t| and the X-norm
  const ScatteringData& sd = run.critical_data();
  const double tmax = sd.t.abs().maxCoeff();
  const ScatteringData ab = evolve(evolve(sd, 0.03), 0.07), c = evolve(sd, 0.1);
  const double group = (ab.t - c.t).abs().maxCoeff() / tmax;
  const double modulus = (c.t.abs() - sd.t.abs()).abs().maxCoeff() / tmax;
  const double xn0 = x_norm(sd, 1, 1.5, 0.1).value;
  const double xnorm = std::abs(x_norm(c, 1, 1.5, 0.1).value - xn0) / xn0;
  const double flow = std::max({group, modulus, xnorm});
  run.report(10, cauchy <= 1e-4 && faddeev <= 1e-8 && flow <= 1e-12,
             "dbar(Pf) = f " + sci(cauchy) + " (<= 1e-4); Faddeev inverse symbol " + sci(faddeev) +
                 " (<= 1e-8); group law " + sci(group) + ", |t| " + sci(modulus) + ", X-norm " + sci(xnorm) +
                 " (<= 1e-12)",
             seconds_since(t0));

  // the d-bar residual with the zero-filled excluded disk, for the record
  const DbarSolver solver(sd);
  double worst = 0.0;
  for (Complex x : {Complex(0.0, 0.0), Complex(0.7, -0.4), Complex(-1.5, 1.1)})
    worst = std::max(worst, dbar_residual(solver, solver.solve_with_mu(x)));
  run.info("d-bar residual on the default data (Gibbs floor at the excluded disk): " + sci(worst));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-10 at desk defaults"};
  Settings s;
  s.workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<int> only;
  app.add_option("--workers", s.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--cache", s.cache, "Directory for forward-transform bundles, reused when present");
  app.add_option("--cli", s.cli, "Path of the nvist executable (criterion 9 exit code)");
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_flag("--strict", s.strict, "Exit 1 when any criterion fails");
  CLI11_PARSE(app, argc, argv);
  s.only.insert(only.begin(), only.end());

  Run run(s);
  const std::vector<std::function<void(Run&)>> criteria = {roundtrip, symmetry, reality,  residual,    oracle,
                                                           small_k,   criticality, identities, exceptional,
                                                           infrastructure};
  const auto t0 = Clock::now();
  for (int id = 1; id <= 10; ++id) {
    if (!run.wanted(id)) continue;
    try {
      criteria[id - 1](run);
    } catch (const std::exception& e) {
      run.report(id, false, std::string("error: ") + e.what(), 0.0);
    }
  }
  std::cout << "total " << std::fixed << std::setprecision(1) << seconds_since(t0) << " s, " << run.failures()
            << " failing" << std::endl;
  return s.strict && run.failures() > 0 ? 1 : 0;
}
