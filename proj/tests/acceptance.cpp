// Acceptance runner: one pass/fail line per criterion.
//
// Experiments run in-process at the default configuration; every verdict is
// recomputed here from the raw records and clouds against thresholds derived
// on this side, not taken from the records' own pass flags.
//
// usage: cgl_acceptance --cli <path to cgl-run> [--work <dir>]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "attractor.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "model.hpp"

using namespace cgl;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// "a=1;b=x" -> {a: 1, b: x}
std::map<std::string, std::string> knobs_of(const std::string& knob) {
  std::map<std::string, std::string> out;
  std::stringstream ss(knob);
  std::string part;
  while (std::getline(ss, part, ';')) {
    const auto eq = part.find('=');
    if (eq != std::string::npos) out[part.substr(0, eq)] = part.substr(eq + 1);
  }
  return out;
}

std::vector<const ResultRecord*> records(const ExperimentResult& r, const std::string& measure) {
  std::vector<const ResultRecord*> out;
  for (const auto& rec : r.records)
    if (rec.measure == measure) out.push_back(&rec);
  return out;
}

const PointCloud* cloud(const ExperimentResult& r, const std::string& name) {
  for (const auto& [n, c] : r.clouds)
    if (n == name) return &c;
  return nullptr;
}

// Ordinary least squares on (log x, log y).
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool trend_ok(const std::vector<double>& d, double slack) {
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d[i] > (1.0 + slack) * d[i - 1]) return false;
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + fmt(x);
  return s;
}

double sum_sq_norm(const LatticeState& u, int from) {
  double s = 0.0;
  for (int j = -u.half_width(); j <= u.half_width(); ++j)
    if (std::abs(j) >= from) s += std::norm(u.at(j));
  return s;
}

double max_norm(const PointCloud& c) {
  double m = 0.0;
  for (const auto& p : c.points) {
    double s = 0.0;
    for (Complex v : p.values()) s += std::norm(v);
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

// Brute-force semi-distance, no early exit, squared distances summed in site order.
double brute_semi(const PointCloud& A, const PointCloud& B) {
  double sup = 0.0;
  for (const auto& a : A.points) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& b : B.points) {
      double s = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a.values()[j] - b.values()[j]);
      if (s < inf) inf = s;
    }
    if (inf > sup) sup = inf;
  }
  return std::sqrt(sup);
}

class Runner {
 public:
  explicit Runner(RunConfig cfg) : cfg_(std::move(cfg)) {}

  const ExperimentResult& get(const std::string& name) {
    auto it = cache_.find(name);
    if (it == cache_.end()) {
      const auto t0 = Clock::now();
      auto result = run_experiment(name, cfg_);
      seconds_[name] = std::chrono::duration<double>(Clock::now() - t0).count();
      it = cache_.emplace(name, std::move(result)).first;
    }
    return it->second;
  }
  double seconds(const std::string& name) const { return seconds_.at(name); }
  const RunConfig& config() const { return cfg_; }

 private:
  RunConfig cfg_;
  std::map<std::string, ExperimentResult> cache_;
  std::map<std::string, double> seconds_;
};

struct Criterion {
  int id;
  std::string title;
  double budget;  // seconds
  std::function<Verdict(double& seconds)> check;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  fs::path work = fs::temp_directory_path() / "cgl_acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) cli = argv[++i];
    else if (a == "--work" && i + 1 < argc) work = argv[++i];
    else {
      std::cerr << "usage: cgl_acceptance --cli <cgl-run> [--work <dir>]\n";
      return 2;
    }
  }

  const RunConfig defaults;
  Runner run(defaults);
  const ModelParams& P = defaults.model;
  const auto C = compute_constants(P);
  const double gap = P.gamma - 4.0 * P.lambda;

  std::vector<Criterion> criteria;

  criteria.push_back({1, "constants", 1.0, [&](double& secs) {
    Verdict v;
    RunConfig cfg;
    cfg.model.eta = 0.0;
    const auto t0 = Clock::now();
    const auto r = run_experiment("constants", cfg);
    secs = std::chrono::duration<double>(Clock::now() - t0).count();
    // g = delta_0: ||g||_q^q = 1, so c1 = c3 = (p+1)/(p+2) [k(p+2)]^{-1/(p+1)}.
    const long double p = cfg.model.p, k = cfg.model.k;
    const long double c1 = (p + 1) / (p + 2) * std::pow(k * (p + 2), -1.0L / (p + 1));
    const double got = records(r, "c1").at(0)->value;
    const double rel = static_cast<double>(std::fabs((got - c1) / c1));
    v.note("c1=" + fmt(got) + " rel_err=" + fmt(rel));
    v.require(rel <= 1e-10, "c1 relative error");
    v.require(std::fabs(got - 0.47247) < 5e-6, "c1 near 0.47247");
    const double eps = records(r, "eps_star").at(0)->value;
    v.note("eps*=" + fmt(eps));
    v.require(eps > 0.0, "eps* > 0");
    return v;
  }});

  criteria.push_back({2, "positive invariance", 60.0, [&](double& secs) {
    Verdict v;
    const auto& r = run.get("attractor");
    secs = run.seconds("attractor");
    const auto out = records(r, "iterates_outside_ball").at(0);
    const auto worst = records(r, "max_norm_over_r_star").at(0);
    auto k = knobs_of(out->knob);
    v.note("samples=" + k["samples"] + " steps=" + k["steps"] + " escapes=" + fmt(out->value) +
           " max|u|/r*=" + fmt(worst->value));
    v.require(k["samples"] == "1000" && k["steps"] == "1000", "1000 x 1000 run");
    v.require(std::abs(std::stod(k["eps"]) - C.eps_star) <= 1e-15 * C.eps_star, "eps = eps*");
    v.require(out->value == 0.0, "no iterate outside r*(1+1e-10)");
    v.require(worst->value <= 1.0 + 1e-10, "max norm ratio");
    return v;
  }});

  criteria.push_back({3, "one-step order", 60.0, [&](double& secs) {
    Verdict v;
    const auto& r = run.get("error-order");
    secs = run.seconds("error-order");
    const double limit = 1.05 * C.bound_l(C.r_star) * C.bound_m(C.r_star) / 2.0;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_sample;
    double worst = 0.0;
    for (const auto* rec : records(r, "one_step_defect")) {
      auto k = knobs_of(rec->knob);
      const double eps = std::stod(k["eps"]);
      by_sample[k["sample"]].first.push_back(eps);
      by_sample[k["sample"]].second.push_back(rec->value);
      worst = std::max(worst, rec->value / (eps * eps));
    }
    v.require(!by_sample.empty(), "defect records present");
    for (auto& [s, xy] : by_sample) {
      v.require(xy.first.size() == 6, "k = 4..9 for sample " + s);
      const double sl = slope(xy.first, xy.second);
      v.note("slope[" + s + "]=" + fmt(sl));
      v.require(std::abs(sl - 2.0) <= 0.2, "slope 2 +- 0.2 for sample " + s);
    }
    v.note("max defect/eps^2=" + fmt(worst) + " vs " + fmt(limit));
    v.require(worst <= limit, "defect/eps^2 <= 1.05 L M / 2");
    return v;
  }});

  criteria.push_back({4, "global order", 120.0, [&](double& secs) {
    Verdict v;
    const auto& r = run.get("error-order");
    secs = run.seconds("error-order");
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_sample;
    int violations = 0;
    for (const auto* rec : records(r, "global_error")) {
      auto k = knobs_of(rec->knob);
      const double eps = std::stod(k["eps"]), T = std::stod(k["T"]);
      v.require(T == 1.0, "T = 1");
      const double bound = 0.5 * C.bound_m(C.r_star) * std::exp(C.bound_l(C.r_star) * T) * eps;
      if (rec->value > bound) ++violations;
      by_sample[k["sample"]].first.push_back(eps);
      by_sample[k["sample"]].second.push_back(rec->value);
    }
    v.require(!by_sample.empty(), "global error records present");
    for (auto& [s, xy] : by_sample) {
      const double sl = slope(xy.first, xy.second);
      v.note("slope[" + s + "]=" + fmt(sl));
      v.require(std::abs(sl - 1.0) <= 0.2, "slope 1 +- 0.2 for sample " + s);
    }
    v.note("bound violations=" + std::to_string(violations));
    v.require(violations == 0, "explicit bound");
    return v;
  }});

  criteria.push_back({5, "attractor bound", 120.0, [&](double& secs) {
    Verdict v;
    const auto& r = run.get("attractor");
    secs = run.seconds("attractor");
    const auto* ies = cloud(r, "ies");
    const auto* zero = cloud(r, "zero_force");
    v.require(ies && zero, "clouds present");
    if (!ies || !zero) return v;
    const double n = max_norm(*ies), z = max_norm(*zero);
    const double bound = C.c1 / gap + 0.01;
    v.note("|A|^2=" + fmt(n * n) + " <= " + fmt(bound) + ", g=0 |A|=" + fmt(z) + " burn_in=" +
           std::to_string(zero->meta.burn_in));
    v.require(ies->points.size() == static_cast<std::size_t>(64 * 16), "64 x 16 cloud");
    v.require(ies->points.front().half_width() == 128, "J = 128");
    v.require(n * n <= bound, "cloud_norm^2 <= c1/gap + 0.01");
    v.require(z <= 1e-6, "zero-force cloud_norm <= 1e-6");
    return v;
  }});

  criteria.push_back({6, "tail estimate", 60.0, [&](double& secs) {
    Verdict v;
    const auto& r = run.get("attractor");
    secs = run.seconds("attractor");
    const auto* ies = cloud(r, "ies");
    v.require(ies != nullptr, "cloud present");
    if (!ies) return v;
    double worst = 0.0;
    for (const auto& u : ies->points) worst = std::max(worst, sum_sq_norm(u, 32));
    v.note("max tail mass (|j|>=32)=" + fmt(worst));
    v.require(worst < 1e-8, "tail mass < 1e-8");
    return v;
  }});

  criteria.push_back({7, "truncation convergence", 300.0, [&](double& secs) {
    Verdict v;
    const auto& r = run.get("sweep-m");
    secs = run.seconds("sweep-m");
    std::vector<double> m, d;
    for (const auto* rec : records(r, "distance_to_full_window")) {
      auto k = knobs_of(rec->knob);
      v.require(k["J"] == "128", "J = 128");
      m.push_back(std::stod(k["m"]));
      d.push_back(rec->value);
    }
    v.note("m=" + join(m) + " d=" + join(d));
    v.require(m == std::vector<double>{4, 8, 16, 32}, "m grid");
    v.require(trend_ok(d, 0.10), "non-increasing within 10%");
    v.require(!d.empty() && d.back() < 1e-3, "final distance < 1e-3");
    return v;
  }});

  criteria.push_back({8, "eps convergence", 300.0, [&](double& secs) {
    Verdict v;
    const auto& r = run.get("sweep-eps");
    secs = run.seconds("sweep-eps");
    std::vector<double> e, d;
    for (const auto* rec : records(r, "distance_to_continuous")) {
      e.push_back(std::stod(knobs_of(rec->knob)["eps"]));
      d.push_back(rec->value);
    }
    v.note("eps/eps*=" + [&] {
      std::vector<double> q;
      for (double x : e) q.push_back(x / C.eps_star);
      return join(q);
    }() + " d=" + join(d));
    v.require(e.size() == 5, "k = 2..6");
    for (std::size_t i = 0; i < e.size(); ++i)
      v.require(std::abs(e[i] - C.eps_star * std::ldexp(1.0, -static_cast<int>(i) - 2)) <= 1e-15, "eps grid");
    v.require(trend_ok(d, 0.10), "non-increasing within 10%");
    return v;
  }});

  criteria.push_back({9, "OU statistics", 60.0, [&](double& secs) {
    Verdict v;
    const auto& r = run.get("ou-stats");
    secs = run.seconds("ou-stats");
    const auto* var = records(r, "stationary_variance").at(0);
    const auto* acf = records(r, "lag1_autocorrelation").at(0);
    v.require(knobs_of(var->knob)["samples"] == "1000000", "1e6 samples");
    v.note("var=" + fmt(var->value) + " acf=" + fmt(acf->value));
    v.require(std::abs(var->value - 0.5) <= 0.02, "variance 0.5 +- 0.02");
    v.require(std::abs(acf->value - std::exp(-1.0)) <= 0.02, "lag-1 acf e^-1 +- 0.02");
    std::vector<double> t, ratio;
    for (const auto* rec : records(r, "max_abs_z_over_t")) {
      t.push_back(std::stod(knobs_of(rec->knob)["t"]));
      ratio.push_back(rec->value);
    }
    v.note("max|z|/t=" + join(ratio));
    v.require(t == std::vector<double>{1e2, 1e3, 1e4}, "horizons");
    for (std::size_t i = 1; i < ratio.size(); ++i) v.require(ratio[i] < ratio[i - 1], "strictly decreasing");
    return v;
  }});

  criteria.push_back({10, "absorbing radius", 120.0, [&](double& secs) {
    Verdict v;
    const auto& r = run.get("radius");
    secs = run.seconds("radius");
    const long double limit = static_cast<long double>(P.eta) + static_cast<long double>(C.c1) / gap;
    const double r0 = records(r, "absorbing_radius").at(0)->value;
    v.note("R(0)=" + fmt(r0) + " err=" + fmt(static_cast<double>(std::fabs(r0 - limit))));
    v.require(std::fabs(r0 - limit) <= 1e-8, "a = 0 exact to 1e-8");
    std::vector<double> a, mean;
    for (const auto* rec : records(r, "mean_absorbing_radius_increasing")) {
      auto k = knobs_of(rec->knob);
      v.require(k["paths"] == "100", "100 paths");
      a.push_back(std::stod(k["a"]));
      mean.push_back(rec->value);
    }
    v.note("means=" + join(mean));
    v.require(a == std::vector<double>{0.01, 0.05, 0.1, 0.2}, "a grid");
    v.require(!mean.empty() && std::fabs(mean.front() - limit) <= 0.05 * limit, "a = 0.01 within 5%");
    for (std::size_t i = 1; i < mean.size(); ++i) v.require(mean[i] > mean[i - 1], "increasing in a");
    return v;
  }});

  criteria.push_back({11, "noise convergence", 600.0, [&](double& secs) {
    Verdict v;
    const auto& r = run.get("sweep-noise");
    secs = run.seconds("sweep-noise");
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto* rec : records(r, "distance_to_deterministic")) {
      auto k = knobs_of(rec->knob);
      groups[k["m"]].first.push_back(std::stod(k["a"]));
      groups[k["m"]].second.push_back(rec->value);
    }
    v.require(groups.size() == 2, "full and truncated sweeps");
    for (auto& [m, ad] : groups) {
      v.note("m=" + m + " d=" + join(ad.second));
      v.require(ad.first == std::vector<double>{0.4, 0.2, 0.1, 0.05}, "a grid (m=" + m + ")");
      v.require(trend_ok(ad.second, 0.10), "decreasing within 10% (m=" + m + ")");
    }
    const auto zero = records(r, "zero_noise_reproduction");
    v.require(zero.size() == 2, "a = 0 reproduction for both sweeps");
    for (const auto* rec : zero) {
      v.note("a=0 gap=" + fmt(rec->value));
      v.require(rec->value < 1e-9, "a = 0 reproduces the deterministic cloud");
    }
    return v;
  }});

  criteria.push_back({12, "Hausdorff oracle", 10.0, [&](double& secs) {
    Verdict v;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240613);
    std::uniform_int_distribution<int> count(1, 32);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto make = [&](int hw) {
      PointCloud c;
      const int n = count(rng);
      for (int i = 0; i < n; ++i) {
        LatticeState u(LatticeKind::FullWindow, hw);
        for (auto& x : u.values()) {
          const double re = normal(rng);
          x = Complex(re, normal(rng));
        }
        c.points.push_back(std::move(u));
      }
      return c;
    };
    int mismatches = 0, axiom_failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const int hw = 1 + trial % 8;
      const auto A = make(hw), B = make(hw), D = make(hw);
      if (hausdorff_semi(A, B) != brute_semi(A, B)) ++mismatches;
      if (hausdorff_semi(B, A) != brute_semi(B, A)) ++mismatches;
      const double ab = hausdorff_full(A, B), ba = hausdorff_full(B, A);
      if (ab != std::max(brute_semi(A, B), brute_semi(B, A))) ++mismatches;
      if (ab != ba || hausdorff_full(A, A) != 0.0 || !(ab > 0.0)) ++axiom_failures;
      if (hausdorff_full(A, D) > ab + hausdorff_full(B, D) + 1e-12) ++axiom_failures;
    }
    secs = std::chrono::duration<double>(Clock::now() - t0).count();
    v.note("200 pairs: mismatches=" + std::to_string(mismatches) + " axiom failures=" +
           std::to_string(axiom_failures));
    v.require(mismatches == 0, "exact agreement");
    v.require(axiom_failures == 0, "metric axioms");
    return v;
  }});

  criteria.push_back({13, "determinism", std::numeric_limits<double>::infinity(), [&](double& secs) {
    Verdict v;
    const auto t0 = Clock::now();
    if (cli.empty()) {
      v.require(false, "--cli not given");
      return v;
    }
    fs::remove_all(work);
    fs::create_directories(work);
    int identical = 0;
    for (const auto& name : experiment_names()) {
      std::string contents[2];
      for (int i = 0; i < 2; ++i) {
        const auto prefix = work / ("run" + std::to_string(i));
        const std::string cmd = shell_quote(cli) + " " + name + " --out " + shell_quote(prefix.string()) + " > " +
                                shell_quote((work / "log.txt").string()) + " 2>&1";
        const int rc = std::system(cmd.c_str());
        if (rc != 0) v.note(name + " exit status " + std::to_string(rc));
        contents[i] = read_file(fs::path(prefix.string() + "_" + name + ".csv"));
      }
      std::ostringstream in_process;
      write_csv(in_process, run.get(name), false);
      const bool same = !contents[0].empty() && contents[0] == contents[1] && contents[0] == in_process.str();
      v.require(same, name + " CSV differs between runs");
      identical += same;
    }
    secs = std::chrono::duration<double>(Clock::now() - t0).count();
    v.note(std::to_string(identical) + "/" + std::to_string(experiment_names().size()) +
           " experiments byte-identical across two CLI runs and the in-process run");
    return v;
  }});

  int failed = 0;
  for (auto& c : criteria) {
    double secs = 0.0;
    Verdict v;
    try {
      v = c.check(secs);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const bool in_budget = secs <= c.budget;
    if (!in_budget) v.require(false, "runtime budget");
    const bool ok = v.pass && in_budget;
    failed += !ok;
    std::printf("criterion %2d %-24s %s  [%.2fs / %s]  %s\n", c.id, c.title.c_str(), ok ? "PASS" : "FAIL", secs,
                std::isinf(c.budget) ? "free" : (fmt(c.budget) + "s").c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
