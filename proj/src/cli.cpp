#include "hessiasol/cli.hpp"

#include <CLI11.hpp>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#include "hessiasol/barriers.hpp"
#include "hessiasol/common.hpp"
#include "hessiasol/report.hpp"

namespace hessiasol::cli {

namespace {

namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const Json& need(const Json& j, const std::string& key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

double need_num(const Json& j, const std::string& key, const char* where) {
  const Json& v = need(j, key, where);
  if (!v.is_number())
    throw ConfigError(std::string(where) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

int need_int(const Json& j, const std::string& key, const char* where) {
  const Json& v = need(j, key, where);
  if (!v.is_number_integer())
    throw ConfigError(std::string(where) + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

std::string need_str(const Json& j, const std::string& key, const char* where) {
  const Json& v = need(j, key, where);
  if (!v.is_string())
    throw ConfigError(std::string(where) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::array<double, 6> opt_point(const Json& j, const std::string& key, int d) {
  std::array<double, 6> p{};
  auto it = j.find(key);
  if (it == j.end()) return p;
  if (!it->is_array() || static_cast<int>(it->size()) != d)
    throw ConfigError("field '" + key + "' must be an array of length " + std::to_string(d));
  for (int a = 0; a < d; ++a) p[static_cast<size_t>(a)] = (*it)[static_cast<size_t>(a)].get<double>();
  return p;
}

DomainSpec parse_domain(const Json& j) {
  const std::string shape = need_str(j, "shape", "domain");
  const int n = need_int(j, "n", "domain");
  if (shape == "ball") {
    return DomainSpec::ball(n, need_num(j, "radius", "domain"),
                            opt_point(j, "center", 2 * n));
  }
  if (shape == "box") {
    const Json& hw = need(j, "half_width", "domain");
    if (!hw.is_array() || static_cast<int>(hw.size()) != 2 * n)
      throw ConfigError("domain: half_width must have 2n entries");
    std::array<double, 6> w{};
    for (int a = 0; a < 2 * n; ++a) w[static_cast<size_t>(a)] = hw[static_cast<size_t>(a)].get<double>();
    return DomainSpec::box(n, w, opt_point(j, "center", 2 * n));
  }
  throw ConfigError("domain: unknown shape '" + shape + "'");
}

ScalarFn parse_scalar(const Json& j, int d) {
  const std::string kind = need_str(j, "kind", "scalar function");
  if (kind == "constant") {
    const double c = need_num(j, "value", "scalar function");
    return [c](std::span<const double>) { return c; };
  }
  if (kind == "power_dist") {
    // scale * |z - xi|^exponent + offset
    const double scale = j.value("scale", 1.0);
    const double expo = need_num(j, "exponent", "power_dist");
    const double offset = j.value("offset", 0.0);
    const std::array<double, 6> xi = opt_point(j, "xi", d);
    return [scale, expo, offset, xi, d](std::span<const double> z) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) {
        const double t = z[static_cast<size_t>(a)] - xi[static_cast<size_t>(a)];
        s += t * t;
      }
      return scale * std::pow(s, 0.5 * expo) + offset;
    };
  }
  if (kind == "linear") {
    const std::array<double, 6> c = opt_point(j, "coeffs", d);
    const double offset = j.value("offset", 0.0);
    return [c, offset, d](std::span<const double> z) {
      double s = offset;
      for (int a = 0; a < d; ++a) s += c[static_cast<size_t>(a)] * z[static_cast<size_t>(a)];
      return s;
    };
  }
  throw ConfigError("scalar function: unknown kind '" + kind + "'");
}

struct ParsedRhs {
  RhsFn fn;
  bool monotone = false;
  bool depends_on_s = false;
};

ParsedRhs parse_rhs(const Json& j, int d) {
  const std::string kind = need_str(j, "kind", "rhs");
  if (kind == "exp_s") {
    // scale * exp(rate * s), weakly increasing for rate >= 0
    const double scale = need_num(j, "scale", "rhs exp_s");
    const double rate = j.value("rate", 1.0);
    if (rate < 0.0) throw ConfigError("rhs exp_s: rate must be >= 0");
    return {[scale, rate](std::span<const double>, double s) {
              return scale * std::exp(rate * s);
            },
            true, true};
  }
  Json jz = j;
  ScalarFn f = parse_scalar(jz, d);
  return {[f](std::span<const double> z, double) { return f(z); }, true, false};
}

OperatorSpec parse_op(const Json& j) {
  const std::string kind = need_str(j, "kind", "op");
  const int n = need_int(j, "n", "op");
  const int d = 2 * n;
  if (kind == "lagrangian") {
    const double delta = need_num(j, "delta", "op lagrangian");
    ScalarFn h = parse_scalar(need(j, "h", "op lagrangian"), d);
    return OperatorSpec::lagrangian(n, std::move(h), delta);
  }
  ParsedRhs rhs = parse_rhs(need(j, "psi", "op"), d);
  if (kind == "monge_ampere")
    return OperatorSpec::monge_ampere(n, std::move(rhs.fn), rhs.monotone, rhs.depends_on_s);
  if (kind == "hessian")
    return OperatorSpec::hessian(need_int(j, "k", "op"), n, std::move(rhs.fn),
                                 rhs.monotone, rhs.depends_on_s);
  if (kind == "quotient")
    return OperatorSpec::quotient(need_int(j, "k", "op"), need_int(j, "l", "op"),
                                  n, std::move(rhs.fn), rhs.monotone,
                                  rhs.depends_on_s);
  throw ConfigError("op: unknown kind '" + kind + "'");
}

GridField parse_field(const Json& j) {
  const DomainSpec dom = parse_domain(need(j, "domain", "field"));
  const double h = need_num(j, "h", "field");
  auto grid = make_grid(dom, h);
  if (j.contains("csv")) return read_field_csv(need_str(j, "csv", "field"), grid);
  if (j.contains("fn"))
    return sample_field_valid(grid, parse_scalar(need(j, "fn", "field"), dom.dim()));
  throw ConfigError("field: needs either 'csv' or 'fn'");
}

SolveConfig parse_solve(const Json& j) {
  SolveConfig cfg;
  cfg.op = parse_op(need(j, "op", "solve"));
  cfg.domain = parse_domain(need(j, "domain", "solve"));
  cfg.h = need_num(j, "h", "solve");
  cfg.phi = parse_scalar(need(j, "phi", "solve"), cfg.domain.dim());
  if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
  if (j.contains("residual_tol")) cfg.residual_tol = j["residual_tol"].get<double>();
  if (j.contains("max_iters")) cfg.max_iters = j["max_iters"].get<std::int64_t>();
  const std::string init = j.value("init", std::string("harmonic"));
  if (init == "harmonic")
    cfg.init = SolveConfig::Init::HarmonicExtension;
  else if (init == "subsolution")
    cfg.init = SolveConfig::Init::Subsolution;
  else
    throw ConfigError("solve: unknown init '" + init + "'");
  return cfg;
}

struct RunContext {
  Json config;
  fs::path out;
  std::uint64_t seed = 0;
  Json payload;
  int exit_code = 0;
};

void cmd_solve(RunContext& ctx) {
  SolveConfig cfg = parse_solve(ctx.config);
  if (ctx.config.value("residual_trace", false))
    cfg.residual_trace_path = (ctx.out / "residual.csv").string();
  auto [field, report] = solve(cfg);
  write_field_csv(field, (ctx.out / "field.csv").string());
  ctx.payload = to_json(report);
  // Optional sup-error against a known exact solution.
  if (ctx.config.contains("exact")) {
    ScalarFn exact = parse_scalar(ctx.config["exact"], cfg.domain.dim());
    double err = 0.0;
    const Grid& g = *field.grid;
    double pos[6];
    for (std::int64_t idx : g.interior()) {
      g.position(idx, pos);
      err = std::max(err, std::abs(field[idx] -
                                   exact(std::span<const double>(pos, static_cast<size_t>(g.dim())))));
    }
    ctx.payload["sup_error"] = err;
  }
  if (!report.sub_cert.pass || !report.super_cert.pass)
    throw CheckFailure("solve: final field failed re-certification");
}

void cmd_certify(RunContext& ctx) {
  const GridField field = parse_field(need(ctx.config, "field", "certify"));
  OperatorSpec op = parse_op(need(ctx.config, "op", "certify"));
  const double tol = ctx.config.value("tol", 10.0 * field.grid->h());
  const std::string which = ctx.config.value("check", std::string("both"));
  Json j;
  bool ok = true;
  if (which == "sub" || which == "both") {
    const Certificate c = certify_subsolution(field, op, tol);
    j["subsolution"] = to_json(c);
    ok = ok && c.pass;
  }
  if (which == "super" || which == "both") {
    SupersolutionOptions opts;
    const std::string def = ctx.config.value("definition", std::string("inf_over_n"));
    opts.definition = def == "cone_restricted" ? SuperDefinition::ConeRestricted
                                               : SuperDefinition::InfOverN;
    const Certificate c = certify_supersolution(field, op, tol, opts);
    j["supersolution"] = to_json(c);
    if (which == "super") ok = ok && c.pass;
  }
  ctx.payload = j;
  if (!ok) throw CheckFailure("certify: requested certification failed");
}

void cmd_compare(RunContext& ctx) {
  const GridField u = parse_field(need(ctx.config, "u", "compare"));
  const GridField v = parse_field(need(ctx.config, "v", "compare"));
  OperatorSpec op = parse_op(need(ctx.config, "op", "compare"));
  GridField v_on_u = u;  // fields must share geometry; rebuild on u's grid
  if (u.grid->size() != v.grid->size())
    throw ConfigError("compare: field grids do not match");
  v_on_u.values = v.values;
  const CompareReport rep = compare(u, v_on_u, op, ctx.config.value("tol_c", 10.0));
  ctx.payload = to_json(rep);
  if (!rep.principle_ok) throw CheckFailure("compare: comparison principle violated");
}

void cmd_convolve(RunContext& ctx) {
  const GridField u = parse_field(need(ctx.config, "field", "convolve"));
  ConvolutionParams params;
  params.epsilon = need_num(ctx.config, "epsilon", "convolve");
  params.c0 = ctx.config.value("c0", u.oscillation());
  const GridField up = sup_convolution(u, params);
  const GridField down = inf_convolution(u, params);
  write_field_csv(up, (ctx.out / "sup_convolution.csv").string());
  write_field_csv(down, (ctx.out / "inf_convolution.csv").string());
  ctx.payload["epsilon"] = params.epsilon;
  ctx.payload["c0"] = params.c0;
  double max_gain = 0.0;
  for (std::int64_t idx : u.grid->interior())
    max_gain = std::max(max_gain, up[idx] - u[idx]);
  ctx.payload["max_gain"] = max_gain;
}

void cmd_abp(RunContext& ctx) {
  const GridField u = parse_field(need(ctx.config, "field", "abp"));
  const double k = need_num(ctx.config, "k", "abp");
  const AbpReport rep = abp_check(u, k);
  ctx.payload = to_json(rep);
  if (!rep.bound_ok) throw CheckFailure("abp: scaling trend check failed");
}

void cmd_barriers(RunContext& ctx) {
  const std::string mode = ctx.config.value("mode", std::string("bundle"));
  const DomainSpec dom = parse_domain(need(ctx.config, "domain", "barriers"));
  const double h = need_num(ctx.config, "h", "barriers");
  auto grid = make_grid(dom, h);
  OperatorSpec op = parse_op(need(ctx.config, "op", "barriers"));
  ScalarFn phi = parse_scalar(need(ctx.config, "phi", "barriers"), dom.dim());
  if (mode == "bundle") {
    const BarrierBundle b = build_bundle(op, grid, phi);
    write_field_csv(b.subsolution, (ctx.out / "subsolution.csv").string());
    write_field_csv(b.supersolution, (ctx.out / "supersolution.csv").string());
    ctx.payload["a1"] = b.a1;
    ctx.payload["a2"] = b.a2;
    ctx.payload["sub_certificate"] = to_json(b.sub_cert);
    ctx.payload["super_certificate"] = to_json(b.super_cert);
    if (!b.sub_cert.pass || !b.super_cert.pass)
      throw CheckFailure("barriers: bundle certification failed");
    return;
  }
  const double alpha = need_num(ctx.config, "alpha", "barriers");
  if (mode == "holder") {
    const Json& xij = need(ctx.config, "xi", "barriers");
    std::vector<double> xi = xij.get<std::vector<double>>();
    const HolderBarrier hb = holder_barrier(xi, alpha, op, grid, phi);
    write_field_csv(hb.field, (ctx.out / "holder_barrier.csv").string());
    ctx.payload["c"] = hb.c;
    ctx.payload["c_tilde"] = hb.c_tilde;
    ctx.payload["worst_cone_margin"] = hb.worst_cone_margin;
    return;
  }
  if (mode == "global") {
    const double a_bound = need_num(ctx.config, "a_bound", "barriers");
    const GlobalBarrierResult res = global_barrier(op, grid, phi, alpha, a_bound);
    write_field_csv(res.envelope, (ctx.out / "global_barrier.csv").string());
    ctx.payload["a"] = res.a;
    ctx.payload["c"] = res.c;
    ctx.payload["c_tilde"] = res.c_tilde;
    ctx.payload["net_size"] = res.net_size;
    return;
  }
  throw ConfigError("barriers: unknown mode '" + mode + "'");
}

void cmd_matrix_lemma(RunContext& ctx, const Invocation& inv) {
  std::vector<int> ns;
  if (inv.n_flag > 0)
    ns.push_back(inv.n_flag);
  else if (ctx.config.contains("n"))
    ns.push_back(ctx.config["n"].get<int>());
  else if (ctx.config.contains("n_list"))
    ns = ctx.config["n_list"].get<std::vector<int>>();
  else
    ns = {2, 3, 4, 5};
  std::int64_t samples = inv.samples_flag > 0 ? inv.samples_flag
                          : ctx.config.value("samples", static_cast<std::int64_t>(10000));

  Rng rng(ctx.seed == 0 ? 7 : ctx.seed);
  double min_gap = std::numeric_limits<double>::infinity();
  for (int n : ns) {
    for (std::int64_t s = 0; s < samples; ++s) {
      ComplexMatrix A(n), B(n);
      for (auto& c : A.a) c = Complex(rng.normal(), rng.normal());
      for (auto& c : B.a) c = Complex(rng.normal(), rng.normal());
      for (int k = 1; k <= n; ++k) {
        const double gap = matrix_lemma_gap(k, A, B);
        const double skAA = s_k_general(k, multiply(A, adjoint(A))).real();
        const double skBB = s_k_general(k, multiply(B, adjoint(B))).real();
        const double scale = std::max(1e-300, skAA * skBB);
        min_gap = std::min(min_gap, gap / scale);
      }
    }
  }
  ctx.payload["min_gap"] = min_gap;
  ctx.payload["samples"] = samples;
  ctx.payload["n_list"] = ns;
  if (min_gap < -1e-10) throw CheckFailure("matrix-lemma: negative normalized gap");
}

void cmd_crosscheck(RunContext& ctx) {
  GridField field;
  if (ctx.config.contains("solve")) {
    auto [f, rep] = solve(parse_solve(ctx.config["solve"]));
    field = std::move(f);
    ctx.payload["solve_report"] = to_json(rep);
  } else {
    field = parse_field(need(ctx.config, "field", "crosscheck"));
  }
  ParsedRhs psi = parse_rhs(need(ctx.config, "psi", "crosscheck"), field.grid->dim());
  const int k = need_int(ctx.config, "k", "crosscheck");
  const CrosscheckReport rep = pluripotential_crosscheck(
      field, psi.fn, k, ctx.config.value("tol_c", 10.0),
      ctx.config.value("b_samples", 10), ctx.seed == 0 ? 11 : ctx.seed);
  ctx.payload["crosscheck"] = to_json(rep);
  if (!rep.all_ok) throw CheckFailure("crosscheck: pointwise inequality failed");
}

void cmd_holder(RunContext& ctx) {
  GridField field;
  if (ctx.config.contains("solve")) {
    auto [f, rep] = solve(parse_solve(ctx.config["solve"]));
    field = std::move(f);
    ctx.payload["solve_report"] = to_json(rep);
  } else {
    field = parse_field(need(ctx.config, "field", "holder"));
  }
  const double alpha = need_num(ctx.config, "alpha", "holder");
  const HolderReport rep = measure_holder(
      field, alpha, ctx.config.value("pairs", static_cast<std::int64_t>(100000)),
      ctx.seed == 0 ? 7 : ctx.seed);
  ctx.payload["holder"] = to_json(rep);
}

}  // namespace

int run(const Invocation& inv) {
  RunContext ctx;
  try {
    if (inv.threads > 0) set_max_threads(inv.threads);
    else if (const char* env = std::getenv("HESSIASOL_THREADS"))
      set_max_threads(std::atoi(env));

    if (!inv.config_path.empty()) {
      std::ifstream in(inv.config_path);
      if (!in) throw ConfigError("cannot open config file " + inv.config_path);
      try {
        in >> ctx.config;
      } catch (const Json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
      }
    } else if (inv.command != "matrix-lemma") {
      throw ConfigError("--config is required for command '" + inv.command + "'");
    } else {
      ctx.config = Json::object();
    }
    ctx.seed = inv.seed_set ? inv.seed : ctx.config.value("seed", 0ull);
    ctx.out = inv.out_dir;
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) throw ConfigError("cannot create output directory " + ctx.out.string());
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  std::string failure;
  try {
    if (inv.command == "solve")
      cmd_solve(ctx);
    else if (inv.command == "certify")
      cmd_certify(ctx);
    else if (inv.command == "compare")
      cmd_compare(ctx);
    else if (inv.command == "convolve")
      cmd_convolve(ctx);
    else if (inv.command == "abp")
      cmd_abp(ctx);
    else if (inv.command == "barriers")
      cmd_barriers(ctx);
    else if (inv.command == "matrix-lemma")
      cmd_matrix_lemma(ctx, inv);
    else if (inv.command == "crosscheck")
      cmd_crosscheck(ctx);
    else if (inv.command == "holder")
      cmd_holder(ctx);
    else {
      std::fprintf(stderr, "config error: unknown command '%s'\n", inv.command.c_str());
      return 1;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const CheckFailure& e) {
    failure = e.what();
    code = 2;
  } catch (const NumericError& e) {
    failure = e.what();
    code = 3;
  } catch (const std::domain_error& e) {
    failure = e.what();
    code = 2;
  }

  Json report;
  report["version"] = kVersion;
  report["command"] = inv.command;
  report["config_hash"] = config_hash(ctx.config);
  report["seed"] = ctx.seed;
  report["exit_code"] = code;
  if (!failure.empty()) report["failure"] = failure;
  report["payload"] = ctx.payload;
  report["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ofstream out(ctx.out / "report.json");
  out << report.dump(2) << "\n";

  if (code != 0) std::fprintf(stderr, "%s\n", failure.c_str());
  return code;
}

int run_main(int argc, char** argv) {
  CLI::App app{"Viscosity solutions of degenerate complex Hessian-type Dirichlet problems"};
  app.require_subcommand(1);

  Invocation inv;
  const std::vector<std::string> commands = {"solve",    "certify",      "compare",
                                             "convolve", "abp",          "barriers",
                                             "matrix-lemma", "crosscheck", "holder"};
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", inv.config_path, "JSON config file");
    sub->add_option("--out", inv.out_dir, "output directory");
    sub->add_option("--seed", inv.seed, "seed for all fuzz sampling")
        ->each([&inv](const std::string&) { inv.seed_set = true; });
    sub->add_option("--threads", inv.threads, "worker thread cap");
    if (name == "matrix-lemma") {
      sub->add_option("--n", inv.n_flag, "matrix size");
      sub->add_option("--samples", inv.samples_flag, "sample count");
    }
    sub->callback([&inv, name] { inv.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  return run(inv);
}

}  // namespace hessiasol::cli
