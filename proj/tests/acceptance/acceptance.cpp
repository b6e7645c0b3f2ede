// Acceptance suite. One PASS/FAIL line per criterion; exit status is nonzero
// when any selected criterion fails.
//
//   cdp_acceptance                 run all twelve
//   cdp_acceptance --criterion 7   run one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "cdp/cd.hpp"
#include "cdp/cli.hpp"
#include "cdp/depth.hpp"
#include "cdp/region.hpp"
#include "cdp/region_nd.hpp"
#include "cdp/simulate.hpp"
#include "cdp/support.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;
using cdp::ExperimentSpec;
using cdp::Method;
using cdp::NullRegion;
using cdp::RegionND;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSeed = 20261016;

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cdp::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() : path_(fs::temp_directory_path() / ("cdp_acceptance_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~Scratch() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

const char* kPairedDifferences =
    "x1,x2\n-0.255,-0.631\n0.201,0.372\n0.008,-0.128\n0.014,0.035\n-0.146,-0.390\n"
    "0.321,0.639\n0.097,0.303\n0.679,1.240\n0.361,0.398\n0.269,0.505\n0.153,0.207\n"
    "0.329,0.465\n0.283,0.438\n0.657,0.905\n-0.314,-0.458\n";

ExperimentSpec univariate(const char* region, std::size_t reps, std::uint64_t experiment) {
  ExperimentSpec spec;
  spec.region = NullRegion::parse(region);
  spec.n = 200;
  spec.reps = reps;
  spec.seed = kSeed;
  spec.experiment = experiment;
  return spec;
}

ExperimentSpec bivariate(RegionND region, Method method, std::uint64_t experiment) {
  ExperimentSpec spec;
  spec.model = cdp::Model::bivariate_normal;
  spec.true_mean = {0.0, 0.0};
  spec.covariance.assign(cdp::kBivariatePresetCovariance.begin(), cdp::kBivariatePresetCovariance.end());
  spec.region_nd = std::move(region);
  spec.method = method;
  spec.depth = cdp::DepthKind::simplicial;
  spec.n = 200;
  spec.boot_reps = 500;
  spec.reps = 200;
  spec.seed = kSeed;
  spec.experiment = experiment;
  return spec;
}

RegionND case_a() { return RegionND::rectangle({-1.0, -1.0}, {1.0, 1.0}); }
RegionND case_b() { return RegionND::rectangle({-1.0, -4.0}, {0.0, 4.0}); }
RegionND case_c() {
  return RegionND::quadrant_complement({0.0, 0.0}, {1, 1}, std::vector<cdp::Point>{{0.0, 0.0}});
}
RegionND case_d() { return RegionND::rectangle({-1.0, -4.0}, {0.0, 0.0}); }
RegionND case_e() { return RegionND::rectangle({-0.1, -0.1}, {0.1, 0.1}); }

Outcome criterion_1() {
  const Stopwatch clock;
  const auto r = cli({"bioeq", "--n1", "12", "--n2", "12", "--mean-test", "80.272", "--mean-ref", "82.559",
                      "--var-d", "83.623", "--lower", "-16.51", "--upper", "16.51"});
  const double secs = clock.seconds();
  if (r.code != 0) return {false, "bioeq exited " + std::to_string(r.code) + ": " + r.err};
  const double p = Json::parse(r.out)["p"].get<double>();
  const bool ok = std::fabs(p - 0.000479) <= 5e-5 && secs < 1.0;
  return {ok, fmt("p=%.7f (target 0.000479 +/- 5e-5), %.3f s (limit 1 s)", p, secs)};
}

Outcome criterion_2() {
  const Scratch dir;
  const auto input = dir.write("pairs.csv", kPairedDifferences);
  const auto cfg = dir.write("region.cfg", "shape = rectangle\nlower = -0.154, -0.28\nupper = 0.154, 0.28\n");
  const Stopwatch clock;
  bool ok = true;
  std::string values;
  for (int seed = 1; seed <= 5; ++seed) {
    const auto r = cli({"pval2d", "--input", input, "--config", cfg, "--depth", "mahalanobis", "--boot-reps", "2000",
                        "--seed", std::to_string(seed)});
    if (r.code != 0) return {false, "pval2d exited " + std::to_string(r.code) + ": " + r.err};
    const double p = Json::parse(r.out)["p_multi"].get<double>();
    ok = ok && std::fabs(p - 0.486) <= 0.07;
    values += fmt("%s%.4f", values.empty() ? "" : ",", p);
  }
  const double secs = clock.seconds();
  ok = ok && secs < 10.0;
  return {ok, fmt("p_multi seeds 1-5 = {%s} (target 0.486 +/- 0.07), %.2f s (limit 10 s)", values.c_str(), secs)};
}

Outcome criterion_3() {
  std::mt19937_64 gen(3003);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> s(0.1, 5.0);
  std::uniform_int_distribution<int> nn(2, 5000);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double a = u(gen), b = u(gen);
    if (a > b) std::swap(a, b);
    const double mean = u(gen), sd = s(gen);
    const int n = nn(gen);
    const auto cd = cdp::ConfidenceDistribution::asymptotic_normal(n, mean, sd);
    const double ours = cdp::p_value(cd, NullRegion({{a, b}})).p;
    worst = std::max(worst, std::fabs(ours - oracle::interval_full_support_normal(a, b, mean, sd, n)));
  }
  return {worst <= 1e-10, fmt("max |error| over 1000 instances = %.3g (limit 1e-10)", worst)};
}

Outcome criterion_4() {
  std::mt19937_64 gen(4004);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> s(0.2, 4.0);
  std::uniform_int_distribution<int> nn(2, 1000);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = nn(gen);
    const double mean = u(gen), sd = s(gen), theta0 = u(gen);
    const auto cd = cdp::ConfidenceDistribution::student_t(n, mean, sd);
    const double tobs = std::sqrt(static_cast<double>(n)) * (mean - theta0) / sd;
    const double ours = cdp::direct_support(cd, NullRegion({{-kInf, theta0}}));
    worst = std::max(worst, std::fabs(ours - oracle::t_sf(tobs, n - 1)));
  }
  return {worst <= 1e-12, fmt("max |error| over 1000 instances = %.3g (limit 1e-12)", worst)};
}

Outcome criterion_5() {
  const std::vector<std::pair<const char*, const char*>> cases{
      {"1a", "0"},
      {"1b", "[-0.01,0.01]"},
      {"1d", "[0,0.1]"},
      {"1e", "[0,1]"},
      {"1f", "[0,inf)"},
      {"2a", "(-inf,0];[0.5,inf)"},
      {"2b", "[-0.04,-0.03];[-0.01,0.01];[0.02,0.03]"},
      {"2c", "[0,0.1];[0.5,0.6];[1,1.1]"},
      {"2d", "0;1"},
  };
  const Stopwatch clock;
  bool ok = true;
  std::string detail;
  std::uint64_t experiment = 50;
  for (const auto& [name, region] : cases) {
    const auto rep = cdp::run_experiment(univariate(region, 2000, experiment++), workers());
    const double rej = rep.rejection_rate(0.05);
    const bool case_ok = rep.ks < 0.06 && rej <= 0.06;
    ok = ok && case_ok;
    detail += fmt("(%s) ks=%.4f rej=%.4f%s; ", name, rep.ks, rej, case_ok ? "" : " [fail]");
  }
  const double secs = clock.seconds();
  ok = ok && secs < 120.0;
  return {ok, detail + fmt("limits ks<0.06 rej<=0.06, %.1f s (limit 120 s)", secs)};
}

Outcome criterion_6() {
  const auto rep = cdp::run_experiment(univariate("[-0.5,0.5]", 2000, 60), workers());
  bool ok = rep.median() > 0.9;
  std::string detail;
  for (const auto& [alpha, rate] : rep.rejection) {
    ok = ok && rate < alpha;
    detail += fmt("rej@%.2f=%.4f ", alpha, rate);
  }
  return {ok, detail + fmt("median=%.4f (limits rej<alpha, median>0.9)", rep.median())};
}

Outcome criterion_7() {
  auto spec = univariate("[-0.01,0.01]", 2000, 70);
  spec.method = Method::direct;
  const double direct = cdp::run_experiment(spec, workers()).rejection_rate(0.05);
  spec.method = Method::full;
  const double full = cdp::run_experiment(spec, workers()).rejection_rate(0.05);
  return {direct > 0.5 && full <= 0.06,
          fmt("direct rej=%.4f (limit >0.5), full rej=%.4f (limit <=0.06)", direct, full)};
}

Outcome criterion_8() {
  const auto rep = cdp::run_experiment(univariate("[1,2]", 1000, 80), workers());
  std::size_t below = 0;
  for (double p : rep.sorted_p) below += p < 0.05;
  const double rate = static_cast<double>(below) / static_cast<double>(rep.sorted_p.size());
  return {rate >= 0.99, fmt("fraction p<0.05 = %.4f (limit >=0.99)", rate)};
}

Outcome criterion_9() {
  const Stopwatch clock;
  const auto b = cdp::run_experiment(bivariate(case_b(), Method::multi, 90), workers());
  const auto a = cdp::run_experiment(bivariate(case_a(), Method::multi, 91), workers());
  const auto c = cdp::run_experiment(bivariate(case_c(), Method::multi, 92), workers());
  const double secs = clock.seconds();
  const bool ok = b.ks < 0.10 && a.median() > 0.9 && c.rejection_rate(0.05) <= 0.06 && secs < 300.0;
  return {ok, fmt("(b) ks=%.4f (limit <0.10); (a) median=%.4f (limit >0.9); (c) rej=%.4f (limit <=0.06); "
                  "%.1f s (limit 300 s)",
                  b.ks, a.median(), c.rejection_rate(0.05), secs)};
}

Outcome criterion_10() {
  const double d_max = cdp::run_experiment(bivariate(case_d(), Method::multi_max, 100), workers()).rejection_rate(0.05);
  const double e_max = cdp::run_experiment(bivariate(case_e(), Method::multi_max, 101), workers()).rejection_rate(0.05);
  const double e_plain = cdp::run_experiment(bivariate(case_e(), Method::multi, 101), workers()).rejection_rate(0.05);
  const bool ok = d_max <= 0.06 && e_max <= 0.06 && e_plain > 0.06;
  return {ok, fmt("(d) multi-max rej=%.4f, (e) multi-max rej=%.4f (limits <=0.06); (e) plain rej=%.4f (limit >0.06)",
                  d_max, e_max, e_plain)};
}

Outcome criterion_11() {
  std::mt19937_64 gen(1111);
  std::uniform_int_distribution<int> size(3, 60);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_int_distribution<int> lattice_coord(-3, 3);
  std::uniform_int_distribution<int> pick(0, 59);
  std::size_t queries = 0;
  std::size_t mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const bool lattice = t % 2 == 1;
    const int m = size(gen);
    cdp::Matrix cloud(m, 2);
    for (int i = 0; i < m; ++i) {
      cloud(i, 0) = lattice ? lattice_coord(gen) : z(gen);
      cloud(i, 1) = lattice ? lattice_coord(gen) : 0.5 * cloud(i, 0) + z(gen);
    }
    const cdp::SimplicialDepth depth(cloud);
    const std::span<const double> xy(cloud.data(), static_cast<std::size_t>(cloud.size()));
    for (int q = 0; q < 5; ++q) {
      double w[2];
      if (q == 0) {
        const int i = pick(gen) % m;
        w[0] = cloud(i, 0);
        w[1] = cloud(i, 1);
      } else if (lattice) {
        w[0] = lattice_coord(gen);
        w[1] = lattice_coord(gen);
      } else {
        w[0] = 1.5 * z(gen);
        w[1] = 1.5 * z(gen);
      }
      ++queries;
      mismatches += depth.containing_triangles(w) != oracle::containing_triangles(xy, w);
    }
  }
  return {mismatches == 0, fmt("%zu mismatches over %zu queries on 200 clouds", mismatches, queries)};
}

Outcome criterion_12() {
  const Scratch dir;
  const auto input = dir.write("pairs.csv", kPairedDifferences);
  const auto region = dir.write("region.cfg", "shape = rectangle\nlower = -0.154, -0.28\nupper = 0.154, 0.28\n");
  const auto bivariate_cfg = dir.write("sim2.cfg",
                                       "model = bivariate-normal\nmethod = multi-max\nshape = rectangle\n"
                                       "lower = -1, -4\nupper = 0, 0\nn = 60\nreps = 60\nboot_reps = 200\n");
  const std::vector<std::vector<std::string>> runs{
      {"simulate", "--region", "[-0.04,-0.03];[-0.01,0.01];[0.02,0.03]", "--reps", "500", "--seed", "12"},
      {"simulate", "--region", "0", "--cd", "bootstrap", "--boot-reps", "200", "--reps", "100", "--seed", "12"},
      {"simulate", "--config", bivariate_cfg, "--seed", "12"},
      {"pval2d", "--input", input, "--config", region, "--depth", "simplicial", "--seed", "12"},
      {"pval2d", "--input", input, "--config", region, "--depth", "mahalanobis", "--seed", "12"},
  };
  std::size_t differing = 0;
  for (const auto& base : runs) {
    std::vector<std::string> reports;
    for (const char* threads : {"1", "4", "8"}) {
      auto args = base;
      args.insert(args.end(), {"--threads", threads});
      const auto r = cli(args);
      if (r.code != 0) return {false, base[0] + " exited " + std::to_string(r.code) + ": " + r.err};
      reports.push_back(r.out);
    }
    differing += !(reports[0] == reports[1] && reports[1] == reports[2]);
  }
  return {differing == 0, fmt("%zu of %zu runs differ across 1/4/8 threads", differing, runs.size())};
}

const std::vector<std::function<Outcome()>> kCriteria{
    criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,  criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::stoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: cdp_acceptance [--criterion N]...\n");
      return 2;
    }
  }
  if (selected.empty()) {
    for (int k = 1; k <= static_cast<int>(kCriteria.size()); ++k) selected.push_back(k);
  }
  bool all = true;
  for (int k : selected) {
    if (k < 1 || k > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", k);
      return 2;
    }
    Outcome outcome;
    try {
      outcome = kCriteria[k - 1]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s %s\n", k, outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str());
    std::fflush(stdout);
    all = all && outcome.pass;
  }
  return all ? 0 : 1;
}
