#include "ppde/cli_config.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace ppde {

namespace {

const std::set<std::string> kCommands = {"deriv", "maximize", "jets",  "check",
                                         "compare", "solve",  "oracle"};

const std::set<std::string> kNumericKeys = {
    "seed",        "tol",    "alpha_schedule", "delta_bar", "rho",
    "a_bar",       "tube_radius", "bump",      "steps",     "k_max",
    "n_paths",     "sigma",  "cap",            "modulus_samples"};

void check_keys(const ojson& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) throw Error(Err::ConfigError, where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw Error(Err::ConfigError, "unknown key '" + where + "." + key + "'");
}

void require(const ojson& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw Error(Err::ConfigError, where + "." + key + " is required");
}

double positive(const ojson& obj, const std::string& key, const std::string& where) {
  const double v = obj.at(key).get<double>();
  if (!(v > 0.0)) throw Error(Err::ConfigError, where + "." + key + " must be > 0");
  return v;
}

Vec vec_field(const ojson& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw Error(Err::ConfigError, where + " must be a non-empty array");
  Vec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

std::function<double(double)> rho_from_json(const ojson& j) {
  check_keys(j, {"kind", "scale", "exponent"}, "numeric.rho");
  const std::string kind = j.value("kind", "sqrt");
  const double scale = j.value("scale", 1.0);
  if (kind == "sqrt") return [scale](double r) { return scale * std::sqrt(r); };
  if (kind == "linear") return [scale](double r) { return scale * r; };
  if (kind == "power") {
    const double e = j.value("exponent", 1.0);
    return [scale, e](double r) { return scale * std::pow(r, e); };
  }
  throw Error(Err::ConfigError, "numeric.rho.kind must be sqrt, linear, or power");
}

PathFunctional make_functional(const ojson& desc, const std::string& where,
                               const TimeGrid& tg, const SpatialGrid& q) {
  check_keys(desc, {"name", "params"}, where);
  require(desc, "name", where);
  return builtin(desc.at("name").get<std::string>(),
                 desc.value("params", ojson::object()), tg, q);
}

Generator make_generator(const ojson& desc, const std::string& where) {
  check_keys(desc, {"name", "params"}, where);
  require(desc, "name", where);
  return builtin_generator(desc.at("name").get<std::string>(),
                           desc.value("params", ojson::object()));
}

DoublingConfig doubling_from(const ojson& numeric) {
  DoublingConfig d;
  d.seed = numeric.at("seed").get<std::uint64_t>();
  if (numeric.contains("alpha_schedule"))
    d.alpha_schedule = numeric.at("alpha_schedule").get<std::vector<double>>();
  if (numeric.contains("delta_bar")) d.delta_bar = numeric.at("delta_bar").get<double>();
  if (numeric.contains("tol")) d.tol = numeric.at("tol").get<double>();
  if (numeric.contains("a_bar")) d.a_bar = numeric.at("a_bar").get<double>();
  if (numeric.contains("tube_radius"))
    d.tube_radius = numeric.at("tube_radius").get<double>();
  if (numeric.contains("cap")) d.cap = numeric.at("cap").get<std::size_t>();
  if (numeric.contains("modulus_samples"))
    d.modulus_samples = numeric.at("modulus_samples").get<int>();
  if (numeric.contains("rho")) d.rho = rho_from_json(numeric.at("rho"));
  else d.rho = [](double r) { return std::sqrt(r); };
  return d;
}

ojson derivatives_json(double dt, const Vec& dx, const Mat& dxx) {
  ojson jdx = ojson::array(), jdxx = ojson::array();
  for (int i = 0; i < dx.size(); ++i) jdx.push_back(dx[i]);
  for (int i = 0; i < dxx.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < dxx.cols(); ++j) row.push_back(dxx(i, j));
    jdxx.push_back(row);
  }
  return ojson{{"dt", dt}, {"dx", jdx}, {"dxx", jdxx}};
}

struct Artifacts {
  std::string ledger_csv;
  std::string plotdata_csv;
  std::string solution_jsonl;
};

bool run_deriv(const ExperimentConfig& cfg, ojson& result, Artifacts&) {
  check_keys(cfg.objects, {"functional", "stub"}, "objects");
  require(cfg.objects, "functional", "objects");
  require(cfg.objects, "stub", "objects");
  const PathFunctional u =
      make_functional(cfg.objects.at("functional"), "objects.functional", cfg.tg, cfg.q);
  const PathStub w = stub_from_json(cfg.objects.at("stub"), cfg.tg);
  const double h = cfg.numeric.value("bump", default_bump(cfg.q));

  const double dt = d_t(u, w);
  const Vec dx = d_x(u, w, cfg.q, h);
  const Mat dxx = d_xx(u, w, cfg.q, h);
  result["numeric"] = derivatives_json(dt, dx, dxx);
  result["bump"] = h;
  if (!u.has_exact()) return true;

  const double edt = u.exact_dt(w);
  const Vec edx = u.exact_dx(w);
  const Mat edxx = u.exact_dxx(w);
  result["exact"] = derivatives_json(edt, edx, edxx);
  const double err = std::max({std::abs(dt - edt), (dx - edx).cwiseAbs().maxCoeff(),
                               (dxx - edxx).cwiseAbs().maxCoeff()});
  result["max_abs_error"] = err;
  return err <= cfg.numeric.value("tol", 1e-3);
}

bool run_maximize(const ExperimentConfig& cfg, ojson& result, Artifacts& art) {
  check_keys(cfg.objects, {"functional", "stub"}, "objects");
  require(cfg.objects, "functional", "objects");
  require(cfg.objects, "stub", "objects");
  const PathFunctional u =
      make_functional(cfg.objects.at("functional"), "objects.functional", cfg.tg, cfg.q);
  const PathStub w0 = stub_from_json(cfg.objects.at("stub"), cfg.tg);
  EnumOptions opt;
  opt.k_max = cfg.numeric.value("k_max", cfg.tg.steps);
  opt.cap = cfg.numeric.value("cap", std::size_t{1'000'000});

  const MaximizationResult r = left_frozen_maximize(u, w0, cfg.q, opt);
  const RmaxReport rm = verify_rmax(u, r, cfg.q, opt);
  result = certificate_to_json(r);
  result["rmax_ok"] = rm.ok;
  result["rmax_worst_violation"] = rm.worst_violation;
  art.plotdata_csv = certificate_to_csv(r);
  return rm.ok;
}

bool run_jets(const ExperimentConfig& cfg, ojson& result, Artifacts&) {
  check_keys(cfg.objects, {"functional", "stub", "jet", "ishii"}, "objects");
  if (!cfg.objects.contains("jet") && !cfg.objects.contains("ishii"))
    throw Error(Err::ConfigError, "objects needs a jet or an ishii block");
  bool pass = true;
  if (cfg.objects.contains("jet")) {
    require(cfg.objects, "functional", "objects");
    require(cfg.objects, "stub", "objects");
    const PathFunctional u = make_functional(cfg.objects.at("functional"),
                                             "objects.functional", cfg.tg, cfg.q);
    const PathStub w = stub_from_json(cfg.objects.at("stub"), cfg.tg);
    const Jet jet = jet_from_json(cfg.objects.at("jet"));
    JetProbeOptions opt;
    opt.tol = cfg.numeric.value("tol", opt.tol);
    const JetTestReport sup = superjet_test(u, w, jet, cfg.q, opt);
    const JetTestReport sub = subjet_test(u, w, jet, cfg.q, opt);
    result["superjet"] = ojson{{"pass", sup.pass}, {"margin", sup.margin},
                               {"skipped", sup.skipped}};
    result["subjet"] = ojson{{"pass", sub.pass}, {"margin", sub.margin},
                             {"skipped", sub.skipped}};
    pass = pass && (sup.pass || sub.pass);
  }
  if (cfg.objects.contains("ishii")) {
    const IshiiCertificate cert = ishii_from_json(cfg.objects.at("ishii"));
    const IshiiReport rep = verify_ishii(cert);
    ojson viol = ojson::array();
    for (int i = 0; i < rep.violating.size(); ++i) viol.push_back(rep.violating[i]);
    result["ishii"] = ojson{{"ok", rep.ok()},
                            {"lower_ok", rep.lower_ok},
                            {"upper_ok", rep.upper_ok},
                            {"scalar_ok", rep.scalar_ok},
                            {"lower_margin", rep.lower_margin},
                            {"upper_margin", rep.upper_margin},
                            {"scalar_margin", rep.scalar_margin},
                            {"violating", viol}};
    pass = pass && rep.ok();
  }
  return pass;
}

ojson viscosity_json(const ViscosityReport& rep) {
  return ojson{{"pass", rep.pass},       {"worst_margin", rep.worst_margin},
               {"checked", rep.checked}, {"skipped", rep.skipped},
               {"witness_index", rep.witness_index}, {"jet_source", rep.jet_source}};
}

bool run_check(const ExperimentConfig& cfg, ojson& result, Artifacts&) {
  check_keys(cfg.objects, {"functional", "generator", "jet_source", "side"}, "objects");
  require(cfg.objects, "functional", "objects");
  require(cfg.objects, "generator", "objects");
  const PathFunctional u =
      make_functional(cfg.objects.at("functional"), "objects.functional", cfg.tg, cfg.q);
  const Generator g = make_generator(cfg.objects.at("generator"), "objects.generator");
  const std::string src_name = cfg.objects.value("jet_source", "exact");
  JetSource src;
  if (src_name == "exact") src = JetSource::Exact;
  else if (src_name == "numeric") src = JetSource::Numeric;
  else throw Error(Err::ConfigError, "objects.jet_source must be exact or numeric");
  const std::string side = cfg.objects.value("side", "both");
  if (side != "both" && side != "sub" && side != "super")
    throw Error(Err::ConfigError, "objects.side must be both, sub, or super");
  const double tol = cfg.numeric.value("tol", default_viscosity_tol(src));
  const std::vector<PathStub> stubs =
      lattice_stubs(cfg.tg, cfg.q, cfg.numeric.value("cap", std::size_t{1'000'000}));

  bool pass = true;
  if (side != "super") {
    const ViscosityReport rep = is_subsolution(u, g, stubs, cfg.q, src, tol);
    result["subsolution"] = viscosity_json(rep);
    pass = pass && rep.pass;
  }
  if (side != "sub") {
    const ViscosityReport rep = is_supersolution(u, g, stubs, cfg.q, src, tol);
    result["supersolution"] = viscosity_json(rep);
    pass = pass && rep.pass;
  }
  return pass;
}

bool run_compare(const ExperimentConfig& cfg, ojson& result, Artifacts& art) {
  check_keys(cfg.objects, {"u", "v", "generator", "mode"}, "objects");
  require(cfg.objects, "u", "objects");
  require(cfg.objects, "v", "objects");
  require(cfg.objects, "generator", "objects");
  const PathFunctional u = make_functional(cfg.objects.at("u"), "objects.u", cfg.tg, cfg.q);
  const PathFunctional v = make_functional(cfg.objects.at("v"), "objects.v", cfg.tg, cfg.q);
  const Generator g = make_generator(cfg.objects.at("generator"), "objects.generator");
  const std::string mode = cfg.objects.value("mode", "viscosity2");
  const DoublingConfig dcfg = doubling_from(cfg.numeric);

  ComparisonReport rep;
  if (mode == "smooth")
    rep = compare_smooth(u, v, g, dcfg.delta_bar, cfg.tg, cfg.q, dcfg.tol);
  else if (mode == "viscosity2")
    rep = compare_viscosity_2nd(u, v, g, dcfg, cfg.tg, cfg.q);
  else if (mode == "viscosity1")
    rep = compare_viscosity_1st(u, v, g, dcfg, cfg.tg, cfg.q);
  else
    throw Error(Err::ConfigError, "objects.mode must be smooth, viscosity2, or viscosity1");

  result = comparison_to_json(rep);
  art.ledger_csv = ledger_to_csv(rep.ledger);
  if (rep.has_certificate) art.plotdata_csv = certificate_to_csv(rep.certificate);
  return rep.verdict == Verdict::Ordered && rep.all_required_pass();
}

bool run_solve(const ExperimentConfig& cfg, ojson& result, Artifacts& art) {
  check_keys(cfg.objects, {"generator", "phi", "root"}, "objects");
  require(cfg.objects, "generator", "objects");
  require(cfg.objects, "phi", "objects");
  require(cfg.objects, "root", "objects");
  const Generator g = make_generator(cfg.objects.at("generator"), "objects.generator");
  const PathFunctional phi =
      make_functional(cfg.objects.at("phi"), "objects.phi", cfg.tg, cfg.q);
  const PathStub root = stub_from_json(cfg.objects.at("root"), cfg.tg);
  SchemeParams params;
  params.cap = cfg.numeric.value("cap", params.cap);

  const LatticeSolution sol = solve_lattice(g, phi, cfg.tg, cfg.q, root, params);
  result["cfl_ratio"] = sol.cfl_ratio;
  result["nodes"] = sol.values.size();
  result["root_value"] = sol.value_at(root);
  art.solution_jsonl = solution_to_jsonl(sol);
  return true;
}

bool run_oracle(const ExperimentConfig& cfg, ojson& result, Artifacts&) {
  check_keys(cfg.objects, {"phi", "stub"}, "objects");
  require(cfg.objects, "phi", "objects");
  require(cfg.objects, "stub", "objects");
  const PathFunctional phi =
      make_functional(cfg.objects.at("phi"), "objects.phi", cfg.tg, cfg.q);
  const PathStub w = stub_from_json(cfg.objects.at("stub"), cfg.tg);
  const double sigma = cfg.numeric.value("sigma", 1.0);
  const int n_paths = cfg.numeric.value("n_paths", 10000);
  const std::uint64_t seed = cfg.numeric.at("seed").get<std::uint64_t>();

  const McEstimate est = mc_feynman_kac(phi, w, cfg.q, sigma, n_paths, seed);
  result["mean"] = est.mean;
  result["stderr"] = est.stderr_;
  result["n"] = est.n;
  return true;
}

bool dispatch(const ExperimentConfig& cfg, ojson& result, Artifacts& art) {
  if (cfg.command == "deriv") return run_deriv(cfg, result, art);
  if (cfg.command == "maximize") return run_maximize(cfg, result, art);
  if (cfg.command == "jets") return run_jets(cfg, result, art);
  if (cfg.command == "check") return run_check(cfg, result, art);
  if (cfg.command == "compare") return run_compare(cfg, result, art);
  if (cfg.command == "solve") return run_solve(cfg, result, art);
  return run_oracle(cfg, result, art);
}

void write_file(const std::filesystem::path& p, const std::string& contents) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(Err::ConfigError, "cannot write " + p.string());
  out << contents;
}

}  // namespace

ExperimentConfig parse_config(const ojson& j) {
  check_keys(j, {"schema_version", "command", "grid", "objects", "numeric"}, "config");
  for (const char* key : {"schema_version", "command", "grid", "objects", "numeric"})
    require(j, key, "config");

  ExperimentConfig cfg;
  cfg.schema_version = j.at("schema_version").get<int>();
  if (cfg.schema_version != 1)
    throw Error(Err::ConfigError, "config.schema_version must be 1");
  cfg.command = j.at("command").get<std::string>();
  if (!kCommands.count(cfg.command))
    throw Error(Err::ConfigError, "config.command '" + cfg.command + "' is not recognized");

  const ojson& grid = j.at("grid");
  check_keys(grid, {"horizon", "steps", "lower", "upper", "points"}, "grid");
  for (const char* key : {"horizon", "steps", "lower", "upper", "points"})
    require(grid, key, "grid");
  const double T = positive(grid, "horizon", "grid");
  const int N = grid.at("steps").get<int>();
  if (N < 1) throw Error(Err::ConfigError, "grid.steps must be >= 1");
  cfg.tg = TimeGrid(T, N);
  const Vec lo = vec_field(grid.at("lower"), "grid.lower");
  const Vec hi = vec_field(grid.at("upper"), "grid.upper");
  if (lo.size() != hi.size())
    throw Error(Err::ConfigError, "grid.lower and grid.upper disagree in dimension");
  for (int i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i]))
      throw Error(Err::ConfigError, "grid.lower must be below grid.upper on every axis");
  const int M = grid.at("points").get<int>();
  if (M < 3) throw Error(Err::ConfigError, "grid.points must be >= 3");
  cfg.q = SpatialGrid(lo, hi, M);

  const ojson& numeric = j.at("numeric");
  check_keys(numeric, kNumericKeys, "numeric");
  require(numeric, "seed", "numeric");
  if (!numeric.at("seed").is_number_integer() ||
      (numeric.at("seed").is_number_integer() && !numeric.at("seed").is_number_unsigned() &&
       numeric.at("seed").get<long long>() < 0))
    throw Error(Err::ConfigError, "numeric.seed must be a non-negative integer");
  for (const char* key : {"tol", "delta_bar", "a_bar", "tube_radius", "bump", "sigma"})
    if (numeric.contains(key)) positive(numeric, key, "numeric");
  if (numeric.contains("alpha_schedule")) {
    const ojson& sched = numeric.at("alpha_schedule");
    if (!sched.is_array() || sched.empty())
      throw Error(Err::ConfigError, "numeric.alpha_schedule must be a non-empty array");
    for (const auto& a : sched)
      if (!(a.get<double>() > 0.0))
        throw Error(Err::ConfigError, "numeric.alpha_schedule entries must be > 0");
  }
  if (numeric.contains("rho")) rho_from_json(numeric.at("rho"));
  if (numeric.contains("n_paths") && numeric.at("n_paths").get<int>() < 100)
    throw Error(Err::ConfigError, "numeric.n_paths must be >= 100");

  if (!j.at("objects").is_object())
    throw Error(Err::ConfigError, "config.objects must be an object");
  cfg.objects = j.at("objects");
  cfg.numeric = numeric;
  cfg.resolved = j;
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Err::ConfigError, "cannot open config '" + path + "'");
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Err::ConfigError, std::string("config parse failure: ") + e.what());
  }
  return parse_config(j);
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path out(out_dir);

  ojson report;
  report["schema_version"] = cfg.schema_version;
  report["command"] = cfg.command;
  report["config"] = cfg.resolved;
  int code;
  try {
    ojson result = ojson::object();
    Artifacts art;
    const bool pass = dispatch(cfg, result, art);
    report["result"] = result;
    report["pass"] = pass;
    code = pass ? 0 : 1;
    if (!art.ledger_csv.empty()) write_file(out / "ledger.csv", art.ledger_csv);
    if (!art.plotdata_csv.empty()) write_file(out / "plotdata.csv", art.plotdata_csv);
    if (!art.solution_jsonl.empty())
      write_file(out / "solution.jsonl", art.solution_jsonl);
  } catch (const Error& e) {
    report["error"] = ojson{{"code", err_name(e.code())}, {"message", e.what()}};
    report["pass"] = false;
    code = 2;
  }
  write_file(out / "report.json", report.dump(2) + "\n");
  return code;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"path-dependent PDE experiment driver"};
  std::string command, config_path, out_dir = ".";
  int threads = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("command", command, "one of deriv|maximize|jets|check|compare|solve|oracle")
      ->required();
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker cap")->check(CLI::Range(1, 64));
  auto* seed_opt = app.add_option("--seed", seed, "override numeric.seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  seed_set = seed_opt->count() > 0;

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (cfg.command != command)
      throw Error(Err::ConfigError, "config.command '" + cfg.command +
                                        "' does not match the '" + command + "' subcommand");
    if (seed_set) {
      cfg.numeric["seed"] = seed;
      cfg.resolved["numeric"]["seed"] = seed;
    }
    (void)threads;  // computation is deterministic and single-threaded
    return run_experiment(cfg, out_dir);
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
}

}  // namespace ppde
