#include "cdp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cdp/config.hpp"
#include "cdp/error.hpp"
#include "cdp/support.hpp"

namespace cdp {

using Json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> read_field(std::string_view field) {
  field = trim(field);
  double value = 0.0;
  const char* first = field.data();
  if (!field.empty() && field.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

// finite numbers stay numbers; infinities become "inf"/"-inf"
Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

Json point_json(std::span<const double> p) {
  Json a = Json::array();
  for (double v : p) a.push_back(number(v));
  return a;
}

Json points_json(const std::vector<Point>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

unsigned resolve_threads(unsigned threads) {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

Matrix read_csv(std::istream& in, std::size_t columns) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    std::vector<double> row;
    bool numeric = true;
    for (auto f : fields) {
      const auto v = read_field(f);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    const bool header = first_content && !numeric;
    first_content = false;
    if (header) {
      if (fields.size() != columns) {
        fail(ErrorKind::parse, "header has " + std::to_string(fields.size()) + " columns, expected " +
                                   std::to_string(columns));
      }
      continue;
    }
    const std::string where = "CSV line " + std::to_string(line_no);
    if (fields.size() != columns) {
      fail(ErrorKind::parse, where + ": expected " + std::to_string(columns) + " columns, got " +
                                 std::to_string(fields.size()));
    }
    if (!numeric) fail(ErrorKind::parse, where + ": non-numeric field");
    for (double v : row) {
      if (std::isnan(v)) fail(ErrorKind::parse, where + ": NaN value");
      if (!std::isfinite(v)) fail(ErrorKind::parse, where + ": infinite value");
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) fail(ErrorKind::invalid_argument, "CSV input has no data rows");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns));
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

Matrix read_csv_file(const std::string& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read input file '" + path + "'");
  return read_csv(in, columns);
}

Json to_json(const RegionND& region) {
  Json j;
  j["shape"] = std::string(region.shape_name());
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Rectangle>) {
          j["lower"] = point_json(s.lower);
          j["upper"] = point_json(s.upper);
        } else if constexpr (std::is_same_v<S, HalfSpace>) {
          j["normal"] = point_json(s.normal);
          j["offset"] = number(s.offset);
        } else if constexpr (std::is_same_v<S, QuadrantComplement>) {
          j["apex"] = point_json(s.apex);
          j["orientation"] = s.orientation;
        } else {
          j["points"] = points_json(s.points);
        }
      },
      region.shape());
  j["corners"] = points_json(region.corners());
  return j;
}

Json to_json(const ExperimentSpec& spec) {
  Json j;
  j["model"] = std::string(to_string(spec.model));
  j["mean"] = point_json(spec.true_mean);
  j["covariance"] = point_json(spec.covariance);
  if (spec.region) j["region"] = spec.region->format();
  if (spec.region_nd) j["region_nd"] = to_json(*spec.region_nd);
  j["n"] = spec.n;
  j["reps"] = spec.reps;
  j["method"] = std::string(to_string(spec.method));
  if (spec.model == Model::univariate_normal) {
    j["cd"] = std::string(to_string(spec.cd));
  } else {
    j["depth"] = std::string(to_string(spec.depth));
  }
  j["boot_reps"] = spec.boot_reps;
  j["seed"] = spec.seed;
  j["experiment"] = spec.experiment;
  return j;
}

Json to_json(const UniformityReport& report) {
  Json j;
  const double n = static_cast<double>(report.sorted_p.size());
  j["replications"] = report.sorted_p.size();
  j["ks"] = report.ks;
  j["ks_critical_95"] = 1.36 / std::sqrt(n);
  Json rates = Json::array();
  for (const auto& [alpha, rate] : report.rejection) rates.push_back({{"alpha", alpha}, {"rate", rate}});
  j["rejection"] = rates;
  j["median_p"] = report.median();
  j["min_p"] = report.sorted_p.front();
  j["max_p"] = report.sorted_p.back();
  return j;
}

namespace {

// Options shared by the subcommands. Flags given on the command line are
// copied over the config file's keys before resolution.
struct Flags {
  std::string config;
  std::string out;
  std::string qq;
  unsigned threads = 0;
  std::vector<std::pair<CLI::Option*, std::string>> keyed;  // option -> config key
  std::map<std::string, std::string> values;
};

void add_keyed(CLI::App& cmd, Flags& f, const std::string& flag, const std::string& key,
               const std::string& help) {
  auto* opt = cmd.add_option(flag, f.values[key], help);
  f.keyed.emplace_back(opt, key);
}

KeyValues resolve(const Flags& f) {
  KeyValues kv = f.config.empty() ? KeyValues{} : KeyValues::load(f.config);
  for (const auto& [opt, key] : f.keyed) {
    if (opt->count() > 0) kv.set(key, f.values.at(key));
  }
  return kv;
}

std::vector<std::string> cautions_for_direct(const ConfidenceDistribution& cd, const NullRegion& region) {
  std::vector<std::string> cautions;
  for (const auto& piece : region.pieces()) {
    if (piece.is_bounded() && piece.hi - piece.lo < 2.0 * cd.scale()) {
      cautions.push_back("direct support is unreliable on " +
                         NullRegion({piece}).format() + ": narrower than 2 x CD scale (" +
                         format_number(2.0 * cd.scale()) + ")");
    }
  }
  return cautions;
}

Json cmd_pval(const KeyValues& kv) {
  const std::string input = kv.require("input");
  const NullRegion region = NullRegion::parse(kv.require("region"));
  const std::string method_text = kv.get("method").value_or("full");
  const CdKind cd_kind = parse_cd_kind(kv.get("cd").value_or("t"));
  const std::size_t boot_reps = parse_count(kv.get("boot_reps").value_or("2000"));
  const std::uint64_t seed = parse_seed(kv.get("seed").value_or("1"));

  CombineRule rule;
  bool direct_only = false;
  if (method_text == "full") {
    rule = CombineRule::max_full;
  } else if (method_text == "direct") {
    rule = CombineRule::max_full;
    direct_only = true;
  } else if (method_text == "max-direct") {
    rule = CombineRule::max_direct;
  } else if (method_text == "pstar") {
    rule = CombineRule::p_star;
  } else if (method_text == "pmax") {
    rule = CombineRule::p_max;
  } else {
    fail(ErrorKind::invalid_argument,
         "unknown method '" + method_text + "' (expected full, direct, max-direct, pstar or pmax)");
  }

  const Matrix data = read_csv_file(input, 1);
  const std::size_t n = static_cast<std::size_t>(data.rows());
  if (n < 2) fail(ErrorKind::invalid_argument, "pval needs at least 2 observations");
  std::span<const double> sample(data.data(), n);
  const double mean = data.col(0).mean();
  double ss = 0.0;
  for (double y : sample) ss += (y - mean) * (y - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) fail(ErrorKind::degenerate, "sample is constant (sd = 0)");

  const ConfidenceDistribution cd = [&] {
    switch (cd_kind) {
      case CdKind::normal:
        return ConfidenceDistribution::asymptotic_normal(n, mean, sd);
      case CdKind::bootstrap:
        return ConfidenceDistribution::bootstrap(sample, boot_reps, seed);
      case CdKind::student_t:
        break;
    }
    return ConfidenceDistribution::student_t(n, mean, sd);
  }();

  const SupportReport report = evaluate(cd, region, rule);
  const double p = direct_only ? direct_support(cd, region) : report.p;

  Json config;
  config["command"] = "pval";
  config["input"] = input;
  config["region"] = region.format();
  config["method"] = method_text;
  config["cd"] = std::string(to_string(cd_kind));
  if (cd_kind == CdKind::bootstrap) {
    config["boot_reps"] = boot_reps;
    config["seed"] = seed;
  }

  Json j;
  j["schema"] = 1;
  j["config"] = config;
  j["n"] = n;
  j["mean"] = mean;
  j["sd"] = sd;
  Json cdj;
  cdj["kind"] = std::string(to_string(cd.kind()));
  cdj["center"] = cd.center();
  cdj["scale"] = cd.scale();
  if (cd.df()) cdj["df"] = *cd.df();
  j["cd"] = cdj;
  Json pieces = Json::array();
  for (const auto& ps : report.pieces) {
    pieces.push_back({{"lo", number(ps.piece.lo)},
                      {"hi", number(ps.piece.hi)},
                      {"direct", ps.direct},
                      {"indirect", ps.indirect},
                      {"full", ps.full}});
  }
  j["pieces"] = pieces;
  j["method"] = method_text;
  j["p"] = p;
  j["cautions"] = direct_only ? cautions_for_direct(cd, region) : std::vector<std::string>{};
  return j;
}

Json cmd_pval2d(const KeyValues& kv, unsigned threads) {
  const std::string input = kv.require("input");
  const RegionND region = region_nd_from(kv);
  if (region.dimension() != 2) fail(ErrorKind::invalid_argument, "pval2d needs a 2-D region");
  const DepthKind depth_kind = parse_depth_kind(kv.get("depth").value_or("simplicial"));
  const std::size_t boot_reps = parse_count(kv.get("boot_reps").value_or("2000"));
  const std::uint64_t seed = parse_seed(kv.get("seed").value_or("1"));

  const Matrix data = read_csv_file(input, 2);
  const BootstrapCloud cloud = bootstrap_cloud(data, boot_reps, seed);
  const auto depth = make_depth(depth_kind, cloud.points);
  const std::vector<double> depths = replicate_depths(cloud, *depth, threads);
  const MultiPValue pm = p_multi(cloud, depths, *depth, region);

  Json config;
  config["command"] = "pval2d";
  config["input"] = input;
  config["region_nd"] = to_json(region);
  config["depth"] = std::string(to_string(depth_kind));
  config["boot_reps"] = boot_reps;
  config["seed"] = seed;

  Json j;
  j["schema"] = 1;
  j["config"] = config;
  j["n"] = data.rows();
  j["mean"] = {data.col(0).mean(), data.col(1).mean()};
  j["m"] = cloud.size();
  j["depth"] = std::string(to_string(depth_kind));
  j["inside_count"] = pm.inside_count;
  j["esp"] = pm.inside_fraction;
  j["outer_fraction"] = pm.outer_fraction;
  j["depth_floor"] = pm.depth_floor;
  j["floor_from_boundary"] = pm.floor_from_boundary;
  j["p_multi"] = pm.p;
  if (!region.corners().empty()) {
    Json corners = Json::array();
    double best = pm.p;
    for (const auto& c : region.corners()) {
      const double pc = p_singleton(depths, *depth, c);
      best = std::max(best, pc);
      corners.push_back({{"point", point_json(c)}, {"p", pc}});
    }
    j["corners"] = corners;
    j["p_multi_max"] = best;
  }
  return j;
}

Json cmd_bioeq(const KeyValues& kv) {
  if (kv.has("input")) fail(ErrorKind::invalid_argument, "bioeq takes an inline summary, not --input");
  EquivalenceSummary s;
  const auto as_int = [&](const char* key) {
    const std::size_t v = parse_count(kv.require(key));
    if (v > 1'000'000'000) fail(ErrorKind::invalid_argument, std::string(key) + " is too large");
    return static_cast<int>(v);
  };
  s.n1 = as_int("n1");
  s.n2 = as_int("n2");
  s.mean_test = parse_number(kv.require("mean_test"));
  s.mean_reference = parse_number(kv.require("mean_reference"));
  s.var_d = parse_number(kv.require("var_d"));
  s.lower = parse_number(kv.require("lower"));
  s.upper = parse_number(kv.require("upper"));
  std::vector<double> alphas{0.01, 0.05, 0.10};
  if (const auto a = kv.get("alpha")) alphas = parse_numbers(*a);
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) fail(ErrorKind::invalid_argument, "alpha must lie in (0,1)");
  }

  const EquivalenceResult r = bioeq_p(s);

  Json config;
  config["command"] = "bioeq";
  config["n1"] = s.n1;
  config["n2"] = s.n2;
  config["mean_test"] = s.mean_test;
  config["mean_reference"] = s.mean_reference;
  config["var_d"] = s.var_d;
  config["lower"] = s.lower;
  config["upper"] = s.upper;
  config["alpha"] = alphas;

  Json j;
  j["schema"] = 1;
  j["config"] = config;
  j["df"] = r.df;
  j["lower_tail"] = r.lower_tail;
  j["upper_tail"] = r.upper_tail;
  j["p"] = r.p;
  Json decisions = Json::array();
  for (double a : alphas) decisions.push_back({{"alpha", a}, {"equivalence_supported", r.p <= a}});
  j["decisions"] = decisions;
  return j;
}

Json cmd_simulate(const KeyValues& kv, unsigned threads, const std::string& qq_path) {
  const ExperimentSpec spec = experiment_from(kv);
  const UniformityReport report = run_experiment(spec, threads);
  if (!qq_path.empty()) {
    std::ofstream qq(qq_path);
    if (!qq) fail(ErrorKind::io, "cannot write QQ file '" + qq_path + "'");
    write_qq_csv(qq, report);
    if (!qq) fail(ErrorKind::io, "failed writing QQ file '" + qq_path + "'");
  }
  Json config = to_json(spec);
  Json j;
  j["schema"] = 1;
  j["config"] = Json{{"command", "simulate"}};
  j["config"].update(config);
  j["uniformity"] = to_json(report);
  return j;
}

std::string_view category(ErrorKind kind) { return to_string(kind); }

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
      return exit_invalid_argument;
    case ErrorKind::parse:
      return exit_parse;
    case ErrorKind::io:
      return exit_io;
    case ErrorKind::degenerate:
      return exit_degenerate;
  }
  return exit_internal;
}

void report_error(std::ostream& err, std::string_view cat, const std::string& message) {
  err << Json{{"error", cat}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confidence-distribution p-values for interval and region nulls", "cdpval"};
  app.require_subcommand(1);

  Flags pval_f, pval2d_f, bioeq_f, sim_f;

  auto* pval = app.add_subcommand("pval", "p-value for a univariate null region from a one-column CSV");
  add_keyed(*pval, pval_f, "--input", "input", "CSV with one numeric column");
  add_keyed(*pval, pval_f, "--region", "region", "null region, e.g. \"[0,0.1];[0.5,0.6]\"");
  add_keyed(*pval, pval_f, "--method", "method", "full | direct | max-direct | pstar | pmax");
  add_keyed(*pval, pval_f, "--cd", "cd", "t | z | bootstrap");
  add_keyed(*pval, pval_f, "--boot-reps", "boot_reps", "bootstrap replicates (cd=bootstrap)");
  add_keyed(*pval, pval_f, "--seed", "seed", "master seed");

  auto* pval2d = app.add_subcommand("pval2d", "depth-based p-value for a 2-D null region");
  add_keyed(*pval2d, pval2d_f, "--input", "input", "CSV with two numeric columns");
  add_keyed(*pval2d, pval2d_f, "--depth", "depth", "mahalanobis | simplicial");
  add_keyed(*pval2d, pval2d_f, "--boot-reps", "boot_reps", "bootstrap cloud size m");
  add_keyed(*pval2d, pval2d_f, "--seed", "seed", "master seed");

  auto* bioeq = app.add_subcommand("bioeq", "equivalence p-value from summary statistics");
  add_keyed(*bioeq, bioeq_f, "--n1", "n1", "sequence 1 size");
  add_keyed(*bioeq, bioeq_f, "--n2", "n2", "sequence 2 size");
  add_keyed(*bioeq, bioeq_f, "--mean-test", "mean_test", "test formulation mean");
  add_keyed(*bioeq, bioeq_f, "--mean-ref", "mean_reference", "reference formulation mean");
  add_keyed(*bioeq, bioeq_f, "--var-d", "var_d", "variance of the period differences");
  add_keyed(*bioeq, bioeq_f, "--lower", "lower", "lower equivalence limit");
  add_keyed(*bioeq, bioeq_f, "--upper", "upper", "upper equivalence limit");
  add_keyed(*bioeq, bioeq_f, "--alpha", "alpha", "comma-separated alpha grid");
  add_keyed(*bioeq, bioeq_f, "--input", "input", "not accepted; bioeq reads summaries only");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo uniformity experiment");
  add_keyed(*sim, sim_f, "--model", "model", "univariate-normal | bivariate-normal");
  add_keyed(*sim, sim_f, "--mean", "mean", "true mean, comma-separated");
  add_keyed(*sim, sim_f, "--region", "region", "univariate null region");
  add_keyed(*sim, sim_f, "--method", "method",
            "full | direct | max-direct | pstar | pmax | multi | multi-max");
  add_keyed(*sim, sim_f, "--cd", "cd", "t | z | bootstrap");
  add_keyed(*sim, sim_f, "--depth", "depth", "mahalanobis | simplicial");
  add_keyed(*sim, sim_f, "--boot-reps", "boot_reps", "bootstrap replicates per dataset");
  add_keyed(*sim, sim_f, "--reps", "reps", "replications");
  add_keyed(*sim, sim_f, "--n", "n", "sample size");
  add_keyed(*sim, sim_f, "--seed", "seed", "master seed");
  add_keyed(*sim, sim_f, "--experiment", "experiment", "experiment index");
  sim->add_option("--qq", sim_f.qq, "QQ CSV path (default: <out>.qq.csv)");

  for (auto [cmd, f] : {std::pair{pval, &pval_f}, std::pair{pval2d, &pval2d_f},
                        std::pair{bioeq, &bioeq_f}, std::pair{sim, &sim_f}}) {
    cmd->add_option("--config", f->config, "key = value config file");
    cmd->add_option("--out", f->out, "also write the JSON report here");
    if (cmd == pval2d || cmd == sim) {
      cmd->add_option("--threads", f->threads, "worker threads (0 = all cores)");
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return exit_usage;
  }

  try {
    Json report;
    const Flags* used = nullptr;
    if (pval->parsed()) {
      used = &pval_f;
      report = cmd_pval(resolve(pval_f));
      for (const auto& c : report["cautions"]) err << "caution: " << c.get<std::string>() << '\n';
    } else if (pval2d->parsed()) {
      used = &pval2d_f;
      report = cmd_pval2d(resolve(pval2d_f), resolve_threads(pval2d_f.threads));
    } else if (bioeq->parsed()) {
      used = &bioeq_f;
      report = cmd_bioeq(resolve(bioeq_f));
    } else {
      used = &sim_f;
      std::string qq = sim_f.qq;
      if (qq.empty() && !sim_f.out.empty()) qq = sim_f.out + ".qq.csv";
      report = cmd_simulate(resolve(sim_f), resolve_threads(sim_f.threads), qq);
    }
    const std::string text = report.dump(2) + "\n";
    if (!used->out.empty()) {
      std::ofstream file(used->out, std::ios::binary);
      if (!file) fail(ErrorKind::io, "cannot write report '" + used->out + "'");
      file << text;
      if (!file) fail(ErrorKind::io, "failed writing report '" + used->out + "'");
    }
    out << text;
    return exit_ok;
  } catch (const Error& e) {
    report_error(err, category(e.kind()), e.what());
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return exit_internal;
  }
}

}  // namespace cdp
