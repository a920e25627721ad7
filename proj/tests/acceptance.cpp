// Acceptance runner: one PASS/FAIL line per criterion. With no arguments
// every criterion runs; otherwise only the listed ones.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resonance/commands.hpp"
#include "resonance/config.hpp"
#include "resonance/field.hpp"
#include "resonance/hunt.hpp"
#include "resonance/parallel.hpp"
#include "resonance/zeta.hpp"

using namespace resonance;
using J = nlohmann::ordered_json;

namespace {

struct Outcome {
  bool pass = false;
  J report;
  std::string summary;
};

using Job = std::function<Outcome(unsigned threads)>;

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0: no limit
  Job job;
};

ExperimentConfig config(const std::string& cmd, std::vector<std::pair<std::string, std::string>> kv) {
  return ExperimentConfig::resolve(cmd, {}, kv);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome coefficient_oracle(unsigned threads) {
  const std::vector<std::uint64_t> ds{3, 4, 5, 7, 8, 12};
  const std::uint64_t nmax = 5000;
  std::vector<std::size_t> mismatches(ds.size());
  parallel_for(ds.size(), threads, [&](std::size_t i) {
    FieldSpec k(ds[i]);
    const auto a = dedekind_coefficients(k, nmax);
    const auto b = coefficients_via_characters(k, nmax);
    for (std::uint64_t n = 1; n <= nmax; ++n) mismatches[i] += a[n] != b[n];
  });
  Outcome o;
  o.pass = true;
  o.report = {{"nmax", nmax}, {"fields", J::array()}};
  std::size_t total = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    o.report["fields"].push_back({{"d", ds[i]}, {"mismatches", mismatches[i]}});
    total += mismatches[i];
  }
  o.pass = total == 0;
  o.summary = std::to_string(total) + " mismatches, d in {3,4,5,7,8,12}, n <= 5000";
  return o;
}

Outcome dominance(unsigned threads) {
  const std::vector<std::uint64_t> ds{3, 4, 5};
  const std::uint64_t nmax = 100000;
  std::vector<std::size_t> violations(ds.size() * 4);
  parallel_for(ds.size(), threads, [&](std::size_t i) {
    FieldSpec k(ds[i]);
    const auto a = dedekind_coefficients(k, nmax);
    for (int ell = 0; ell <= 3; ++ell)
      for (std::uint64_t n = 1; n <= nmax; ++n)
        violations[i * 4 + std::size_t(ell)] += g_coefficient_from(n, a[n], a[2], ell) < double(a[n]);
  });
  Outcome o;
  o.report = {{"nmax", nmax}, {"cases", J::array()}};
  std::size_t total = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (int ell = 0; ell <= 3; ++ell) {
      const auto v = violations[i * 4 + std::size_t(ell)];
      o.report["cases"].push_back({{"d", ds[i]}, {"ell", ell}, {"violations", v}});
      total += v;
    }
  o.pass = total == 0;
  o.summary = std::to_string(total) + " violations of a(n) >= a_K(n), n <= 1e5, ell 0..3, d in {3,4,5}";
  return o;
}

Outcome kernel(unsigned threads) {
  Outcome o;
  o.report = kernel_suite(KernelSuiteOptions{}, threads, o.pass);
  o.summary = "support, bounds, monotonicity, oracle at 100 points for eta in {1,2,4,8}, eta = 200 asymptotic";
  return o;
}

Outcome convolution(unsigned threads) {
  auto r = run_command(config("verify", {{"kernel_suite", "false"}}), threads);
  Outcome o;
  o.report = r.report;
  const auto& rep = r.report["report"];
  const std::size_t nd = rep["double"].size(), ns = rep["single"].size();
  const double worst = rep["max_abs_error"];
  o.pass = r.exit_code == kExitPass && nd >= 10 && ns >= 10 && worst <= 1e-4;
  o.summary = std::to_string(nd) + " double + " + std::to_string(ns) + " single points, max abs error " +
              fmt("%.2e", worst);
  return o;
}

// Fourth-order central differences of zeta_K along the real axis.
Complex fd_derivative(Complex s, const FieldSpec& k, int ell, double h) {
  auto f = [&](double m) { return dedekind_zeta(s + m * h, k); };
  switch (ell) {
    case 1:
      return (-f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2)) / (12.0 * h);
    case 2:
      return (-f(2) + 16.0 * f(1) - 30.0 * f(0) + 16.0 * f(-1) - f(-2)) / (12.0 * h * h);
    case 3:
      return (-f(3) + 8.0 * f(2) - 13.0 * f(1) + 13.0 * f(-1) - 8.0 * f(-2) + f(-3)) / (8.0 * h * h * h);
  }
  throw InvalidArgument("order out of range");
}

Outcome derivatives(unsigned threads) {
  const int points = 20;
  const double h[] = {0.0, 1e-2, 5e-3, 2e-3};
  struct Point {
    std::uint64_t d;
    int ell;
    Complex s;
    double error = 0.0;
  };
  std::vector<Point> pts;
  std::mt19937_64 rng(20);
  const std::uint64_t ds[] = {3, 4, 5};
  for (int i = 0; i < points; ++i) {
    const double sigma = 1.5 + 1.5 * uniform01(rng());
    const double t = -30.0 + 60.0 * uniform01(rng());
    pts.push_back({ds[i % 3], 1 + i % 3, Complex(sigma, t)});
  }
  parallel_for(pts.size(), threads, [&](std::size_t i) {
    auto& p = pts[i];
    FieldSpec k(p.d);
    const Complex contour = dedekind_zeta_derivative(p.s, k, p.ell).value;
    p.error = std::abs(contour - fd_derivative(p.s, k, p.ell, h[p.ell]));
  });
  Outcome o;
  o.report = {{"tol", 1e-5}, {"points", J::array()}};
  double worst = 0.0;
  for (const auto& p : pts) {
    o.report["points"].push_back(
        {{"d", p.d}, {"ell", p.ell}, {"sigma", p.s.real()}, {"t", p.s.imag()}, {"abs_error", p.error}});
    worst = std::max(worst, p.error);
  }
  o.pass = worst <= 1e-5;
  o.summary = "20 points, sigma in [1.5, 3], ell 1..3, max abs error " + fmt("%.2e", worst);
  return o;
}

Outcome gcd_sums(unsigned threads) {
  const std::vector<std::vector<std::pair<std::string, std::string>>> configs{
      {{"d", "3"}, {"toy_layers", "7,13;31,37"}, {"toy_wk", "2,2"}},
      {{"d", "3"}, {"toy_layers", "7,13,19;31,37,43"}, {"toy_wk", "2,2"}},
      {{"d", "4"}, {"toy_layers", "5,13;17,29,37"}, {"toy_wk", "2,2"}},
      {{"d", "5"}, {"toy_layers", "11,31,41;61,71"}, {"toy_wk", "2,0"}},
  };
  Outcome o;
  o.pass = true;
  o.report = J::array();
  double worst = 0.0;
  std::size_t inequalities = 0;
  for (const auto& kv : configs) {
    auto r = run_command(config("gcdsum", kv), threads);
    const auto& rep = r.report["report"];
    bool ok = r.exit_code == kExitPass && rep["layer_product_identity"]["relative_error"].get<double>() <= 1e-10 &&
              rep["sigma_sweep"]["nonincreasing"] == true && rep["partial"] == false;
    worst = std::max(worst, rep["layer_product_identity"]["relative_error"].get<double>());
    for (const auto& e : rep["appendix"]) {
      ok &= !e["inequality"].is_null() && e["inequality"]["holds"] == true;
      ++inequalities;
    }
    o.pass &= ok;
    o.report.push_back(r.report);
  }
  o.summary = std::to_string(configs.size()) + " toy configs, identity error " + fmt("%.1e", worst) + ", " +
              std::to_string(inequalities) + " layer inequalities, sigma sweep monotone";
  return o;
}

Outcome resonators(unsigned threads) {
  const std::vector<std::vector<std::pair<std::string, std::string>>> configs{
      {{"d", "3"}, {"toy_primes", "7,13"}, {"toy_f", "7:0.3,13:0.2"}, {"toy_layer", "7:1,13:1"}, {"toy_delta", "2"}},
      {{"d", "3"},
       {"toy_primes", "7,13,19,31,37,43"},
       {"toy_f", "7:0.5,13:0.4,19:0.35,31:0.3,37:0.25,43:0.2"},
       {"toy_layer", "7:1,13:1,19:1,31:2,37:2,43:2"},
       {"toy_delta", "2,1.5"}},
      {{"d", "4"},
       {"T", "5000"},
       {"toy_primes", "5,13,17,29,37,41,53,61"},
       {"toy_f", "5:0.6,13:0.5,17:0.45,29:0.4,37:0.35,41:0.3,53:0.25,61:0.2"},
       {"toy_layer", "5:1,13:1,17:1,29:1,37:2,41:2,53:2,61:2"},
       {"toy_delta", "3,2"}},
  };
  Outcome o;
  o.pass = true;
  o.report = J::array();
  double ad = 0.0, gm = 0.0;
  for (const auto& kv : configs) {
    auto r = run_command(config("resonator", kv), threads);
    const auto& rep = r.report["report"];
    const auto& checks = rep["checks"];
    const bool ok = r.exit_code == kExitPass && rep["A_d"]["sum_is_lower_bound"] == false &&
                    rep["A_d"]["relative_deviation"].get<double>() <= 1e-12 && rep["M_d"]["truncated"] == false &&
                    rep["M_d"]["divisor_closed"] == true && checks["abs_R_le_R0"]["holds"] == true &&
                    checks["abs_R_le_R0"]["samples"] == 1000 &&
                    checks["gaussian_moment"]["relative_difference"].get<double>() <= 1e-6;
    ad = std::max(ad, rep["A_d"]["relative_deviation"].get<double>());
    gm = std::max(gm, checks["gaussian_moment"]["relative_difference"].get<double>());
    o.pass &= ok;
    o.report.push_back(r.report);
  }
  o.summary = std::to_string(configs.size()) + " toy supports, A_d deviation " + fmt("%.1e", ad) +
              ", moment difference " + fmt("%.1e", gm) + ", M_d divisor closed, |R| <= R(0)";
  return o;
}

Outcome hunt(unsigned threads) {
  auto r = run_command(ExperimentConfig::resolve("hunt", RESONANCE_PILOT_CONFIG, {}), threads);
  Outcome o;
  o.report = r.report;
  const auto& rep = r.report["report"];
  const double fraction = rep["win_fraction"];
  const std::size_t runs = rep["runs"].size();
  o.pass = r.exit_code == kExitPass && runs == 20 && fraction >= 0.8;
  o.summary = "guided wins " + std::to_string(rep["guided_wins"].get<int>()) + "/" + std::to_string(runs) +
              " at T = 1000, d = 3, ell = 1 (threshold 80%)";
  return o;
}

std::vector<Criterion> criteria() {
  return {
      {1, "coefficient oracle", 10, coefficient_oracle},
      {2, "dominance", 10, dominance},
      {3, "kernel suite", 60, kernel},
      {4, "convolution identities", 900, convolution},
      {5, "derivative cross-check", 60, derivatives},
      {6, "gcd-sum identities", 60, gcd_sums},
      {7, "resonator and A_d suite", 60, resonators},
      {8, "hunt efficacy", 1800, hunt},
  };
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_report(const std::string& dir, const std::string& name, const J& j) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream(std::filesystem::path(dir) / name) << j.dump(2) << "\n";
}

bool run_one(const Criterion& c, unsigned threads, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.job(threads);
  } catch (const std::exception& e) {
    o.pass = false;
    o.summary = std::string("error: ") + e.what();
  }
  const double secs = seconds_since(t0);
  const bool in_time = c.limit_seconds <= 0 || secs < c.limit_seconds;
  const bool pass = o.pass && in_time;
  std::printf("C%d %s %s: %s (%.2f s, limit %.0f s)%s\n", c.id, pass ? "PASS" : "FAIL", c.name, o.summary.c_str(),
              secs, c.limit_seconds, in_time ? "" : " over time limit");
  std::fflush(stdout);
  write_report(out, "c" + std::to_string(c.id) + ".json", o.report);
  return pass;
}

bool determinism(const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  J report = J::array();
  for (const auto& c : criteria()) {
    bool same = false;
    try {
      same = c.job(1).report.dump() == c.job(2).report.dump();
    } catch (const std::exception& e) {
      detail += " C" + std::to_string(c.id) + " error: " + e.what();
    }
    report.push_back({{"criterion", c.id}, {"identical", same}});
    if (!same) detail += " C" + std::to_string(c.id) + " differs";
    pass &= same;
  }
  std::printf("C9 %s determinism: reports of C1-C8 at 1 and 2 threads %s%s (%.2f s)\n", pass ? "PASS" : "FAIL",
              pass ? "byte-identical" : "differ:", detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
  write_report(out, "c9.json", report);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> ids;
  unsigned threads = 1;
  std::string out;
  app.add_option("criteria", ids, "criteria to run (1-9); all when omitted")->check(CLI::Range(1, 9));
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--out", out, "directory for JSON reports");
  CLI11_PARSE(app, argc, argv);
  if (ids.empty())
    for (int i = 1; i <= 9; ++i) ids.push_back(i);

  bool all = true;
  const auto list = criteria();
  for (int id : ids) {
    if (id == 9)
      all &= determinism(out);
    else
      all &= run_one(list[std::size_t(id - 1)], threads, out);
  }
  return all ? 0 : 1;
}
