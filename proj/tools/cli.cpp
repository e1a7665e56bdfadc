#include "cli.hpp"

#include "fextq/bandwidth.hpp"
#include "fextq/estimator.hpp"
#include "fextq/experiments.hpp"
#include "fextq/extrapolation.hpp"
#include "fextq/functional_data.hpp"
#include "fextq/parallel.hpp"
#include "fextq/semimetrics.hpp"
#include "fextq/tail_index.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fextq::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Options
{
  std::string command;

  std::string curves;
  std::string responses;
  std::string transform = "identity";
  std::string semimetric = "l2";
  std::string kernel = "linear";
  std::string qkernel = "triangular";
  std::optional<double> h;
  double lambda = 0.1;
  std::string grid = "0.01:0.1:20";
  bool auto_grid = false;

  std::optional<long> x_row;
  std::string x_file;

  std::optional<double> y;
  std::optional<double> alpha;
  double alpha_c = 20.0;
  std::optional<double> beta;

  std::string gamma_estimator = "hill";
  std::vector<double> taus;
  double p = 1.0;
  double q = 1.0;
  double r = 1.0;
  double s = 2.0;
  std::size_t J = 5;

  std::string output;
  std::string report;

  bool table2 = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> N;
  std::size_t n = 500;
  std::vector<double> c_list{ 5, 10, 15, 20 };
  std::vector<double> s_list{ 1, 2, 3, 10 };
  std::vector<std::size_t> J_list{ 5 };
  std::vector<std::string> semimetrics{ "l2", "normdiff" };

  std::size_t xi_steps = 11;
  std::optional<long> i0;
  std::optional<long> i1;
};

struct Context
{
  const Options& opt;
  std::ostream& out;
  std::ostream& err;
  json report;
};

void add_data_options(CLI::App* cmd, Options& o)
{
  cmd->add_option("--curves", o.curves, "curves file (one curve per row, optional t= header)")->required();
  cmd->add_option("--responses", o.responses, "responses file (one value per row)")->required();
  cmd->add_option("--transform", o.transform, "response transform: identity | reciprocal-percent");
  cmd->add_option("--semimetric", o.semimetric, "l2 | normdiff | d2");
  cmd->add_option("--kernel", o.kernel, "covariate kernel: linear | uniform");
  cmd->add_option("--qkernel", o.qkernel, "response kernel: triangular");
  cmd->add_option("--h", o.h, "covariate bandwidth; chosen by cross-validation when absent");
  cmd->add_option("--lambda", o.lambda, "response bandwidth");
  cmd->add_option("--grid", o.grid, "cross-validation grid lo:hi:M");
  cmd->add_flag("--auto-grid", o.auto_grid, "grid between the 1% and 25% pairwise-distance quantiles");
  cmd->add_option("--report", o.report, "write a JSON run summary here");
}

void add_point_options(CLI::App* cmd, Options& o)
{
  auto* row = cmd->add_option("--x-row", o.x_row, "evaluate at the curve in this row (0-based)");
  auto* file = cmd->add_option("--x-file", o.x_file, "evaluate at the single curve in this file");
  row->excludes(file);
  file->excludes(row);
}

void add_tail_options(CLI::App* cmd, Options& o)
{
  cmd->add_option("--gamma-estimator", o.gamma_estimator, "hill | pickands | phi-p | phi-pqr");
  cmd->add_option("--taus", o.taus, "explicit weights 1 = tau_1 > ... > tau_J > 0")->delimiter(',');
  cmd->add_option("--s", o.s, "tau_j = (1/j)^s");
  cmd->add_option("--J", o.J, "number of weights");
  cmd->add_option("--p", o.p, "exponent p");
  cmd->add_option("--q", o.q, "exponent q (phi-pqr)");
  cmd->add_option("--r", o.r, "exponent r (phi-pqr)");
}

void add_anchor_options(CLI::App* cmd, Options& o)
{
  cmd->add_option("--alpha", o.alpha, "anchor order; defaults to c log(n)/n");
  cmd->add_option("--alpha-c", o.alpha_c, "constant c of the default anchor order");
}

void write_table(Context& ctx, const std::string& text)
{
  if (ctx.opt.output.empty()) {
    ctx.out << text;
    return;
  }
  std::ofstream f(ctx.opt.output, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open output file " + ctx.opt.output);
  f << text;
  if (!f)
    throw std::runtime_error("failed writing output file " + ctx.opt.output);
}

void warn(Context& ctx, const std::string& message)
{
  ctx.err << "warning: " << message << "\n";
  ctx.report["warnings"].push_back(message);
}

Dataset load(Context& ctx)
{
  const auto transform = parse_response_transform(ctx.opt.transform);
  auto data = load_dataset(ctx.opt.curves, ctx.opt.responses);
  data = transform_response(data, transform);
  ctx.report["dataset"] = { { "n", data.size() }, { "m", data.curve_length() } };
  return data;
}

BandwidthGrid parse_grid(const std::string& spec)
{
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':'))
    parts.push_back(item);
  if (parts.size() != 3)
    throw UsageError("--grid expects lo:hi:M, got '" + spec + "'");
  double lo = 0.0;
  double hi = 0.0;
  long M = 0;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    M = std::stol(parts[2]);
  } catch (const std::logic_error&) {
    throw UsageError("--grid expects numbers lo:hi:M, got '" + spec + "'");
  }
  if (M < 1)
    throw UsageError("--grid needs M >= 1");
  return BandwidthGrid::regular(lo, hi, static_cast<std::size_t>(M));
}

EstimatorConfig base_config(const Options& o)
{
  EstimatorConfig cfg;
  cfg.semimetric = parse_semimetric(o.semimetric);
  cfg.kernel = parse_covariate_kernel(o.kernel == "paper" ? "linear" : o.kernel);
  cfg.response_kernel = parse_response_kernel(o.qkernel);
  cfg.lambda = o.lambda;
  if (o.h)
    cfg.h = *o.h;
  cfg.validate();
  return cfg;
}

//! Fills cfg.h by cross-validation when --h was not given.
CvResult resolve_bandwidth(Context& ctx, const Dataset& data, EstimatorConfig& cfg, const DistanceMatrix& distances)
{
  const BandwidthGrid grid = ctx.opt.auto_grid ? BandwidthGrid::from_distance_quantiles(distances)
                                               : parse_grid(ctx.opt.grid);
  auto cv = cv_bandwidth(distances, data.responses(), grid, cfg, default_thread_count());
  cfg.h = cv.h_opt;
  ctx.report["bandwidth"] = { { "source", "cross-validation" },
                              { "h", cv.h_opt },
                              { "grid", cv.grid },
                              { "scores", cv.scores } };
  return cv;
}

void ensure_bandwidth(Context& ctx, const Dataset& data, EstimatorConfig& cfg)
{
  if (ctx.opt.h) {
    ctx.report["bandwidth"] = { { "source", "fixed" }, { "h", cfg.h } };
    return;
  }
  const DistanceMatrix distances(data, cfg.semimetric);
  resolve_bandwidth(ctx, data, cfg, distances);
}

std::vector<double> target_curve(const Options& o, const Dataset& data)
{
  if (o.x_row) {
    if (*o.x_row < 0 || static_cast<std::size_t>(*o.x_row) >= data.size())
      throw UsageError("--x-row " + std::to_string(*o.x_row) + " is outside 0.." +
                       std::to_string(data.size() - 1));
    const auto c = data.curve(static_cast<std::size_t>(*o.x_row));
    return { c.begin(), c.end() };
  }
  if (!o.x_file.empty()) {
    std::ifstream in(o.x_file);
    if (!in)
      throw DatasetError("cannot open curve file " + o.x_file);
    auto table = read_curve_table(in);
    if (table.rows != 1)
      throw DatasetError("curve file " + o.x_file + " must hold exactly one curve");
    if (table.columns != data.curve_length())
      throw DatasetError("curve file has " + std::to_string(table.columns) + " points, dataset grid has " +
                         std::to_string(data.curve_length()));
    return table.values;
  }
  throw UsageError("one of --x-row or --x-file is required");
}

TailIndexSpec make_spec(const Options& o)
{
  if (o.gamma_estimator == "pickands")
    return TailIndexSpec::pickands();
  std::vector<double> taus = o.taus.empty() ? power_taus(o.s, o.J) : o.taus;
  if (o.gamma_estimator == "hill")
    return TailIndexSpec::hill(std::move(taus));
  if (o.gamma_estimator == "phi-p")
    return TailIndexSpec::phi_p(std::move(taus), o.p);
  if (o.gamma_estimator == "phi-pqr")
    return TailIndexSpec::phi_pqr(std::move(taus), o.p, o.q, o.r);
  throw UsageError("unknown --gamma-estimator '" + o.gamma_estimator +
                   "' (expected hill, pickands, phi-p or phi-pqr)");
}

double resolve_alpha(Context& ctx, std::size_t n)
{
  const double alpha = ctx.opt.alpha ? *ctx.opt.alpha : default_anchor_order(n, ctx.opt.alpha_c);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("anchor order alpha=" + format_double(alpha) + " must lie in (0, 1)");
  ctx.report["parameters"]["alpha"] = alpha;
  return alpha;
}

void presence_warning(Context& ctx,
                      const Dataset& data,
                      std::span<const double> x,
                      const EstimatorConfig& cfg,
                      double order)
{
  const auto d = distances_to(data, x, cfg.semimetric);
  const auto st = standardization(d, cfg.h, cfg.kernel, QuantileOrder{ order });
  const double expected = static_cast<double>(data.size()) * st.phi_hat * order;
  ctx.report["expected_local_exceedances"] = expected;
  if (expected < 1.0) {
    warn(ctx, "n*phi*alpha = " + format_double(expected) + " < 1 at order " + format_double(order) +
                "; the quantile is unlikely to lie inside the local sample");
  }
}

void record_config(Context& ctx, const EstimatorConfig& cfg)
{
  auto& p = ctx.report["parameters"];
  p["semimetric"] = std::string(to_string(cfg.semimetric));
  p["kernel"] = std::string(cfg.kernel.name());
  p["qkernel"] = std::string(cfg.response_kernel.name());
  p["lambda"] = cfg.lambda;
  p["h"] = cfg.h;
}

void print_value(Context& ctx, double value)
{
  ctx.out << format_double(value) << "\n";
  ctx.report["results"]["value"] = value;
}

int cmd_csf(Context& ctx)
{
  if (!ctx.opt.y)
    throw UsageError("csf needs --y");
  auto cfg = base_config(ctx.opt);
  const auto data = load(ctx);
  const auto x = target_curve(ctx.opt, data);
  ensure_bandwidth(ctx, data, cfg);
  record_config(ctx, cfg);
  ctx.report["parameters"]["y"] = *ctx.opt.y;
  print_value(ctx, csf(data, x, *ctx.opt.y, cfg));
  return 0;
}

int cmd_quantile(Context& ctx)
{
  if (!ctx.opt.alpha)
    throw UsageError("quantile needs --alpha");
  const double alpha = *ctx.opt.alpha;
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("--alpha must lie in (0, 1), got " + format_double(alpha));
  auto cfg = base_config(ctx.opt);
  const auto data = load(ctx);
  const auto x = target_curve(ctx.opt, data);
  ctx.report["parameters"]["alpha"] = alpha;
  ensure_bandwidth(ctx, data, cfg);
  record_config(ctx, cfg);
  const auto surv = conditional_survival(data, x, cfg);
  presence_warning(ctx, data, x, cfg, alpha);
  print_value(ctx, surv.quantile(alpha));
  return 0;
}

int cmd_gamma(Context& ctx)
{
  auto cfg = base_config(ctx.opt);
  const auto spec = make_spec(ctx.opt);
  const auto data = load(ctx);
  const auto x = target_curve(ctx.opt, data);
  const double alpha = resolve_alpha(ctx, data.size());
  ensure_bandwidth(ctx, data, cfg);
  record_config(ctx, cfg);
  ctx.report["parameters"]["gamma_estimator"] = spec.name();
  ctx.report["parameters"]["taus"] = std::vector<double>(spec.taus().begin(), spec.taus().end());
  const auto surv = conditional_survival(data, x, cfg);
  presence_warning(ctx, data, x, cfg, alpha * spec.taus().back());
  print_value(ctx, estimate_gamma(surv, alpha, spec));
  return 0;
}

int cmd_weissman(Context& ctx)
{
  auto cfg = base_config(ctx.opt);
  const auto spec = make_spec(ctx.opt);
  const auto data = load(ctx);
  const auto x = target_curve(ctx.opt, data);
  const double alpha = resolve_alpha(ctx, data.size());
  const double beta = ctx.opt.beta ? *ctx.opt.beta : 5.0 / static_cast<double>(data.size());
  const WeissmanQuery query{ alpha, beta, std::nullopt };
  query.validate();
  ctx.report["parameters"]["beta"] = beta;
  ensure_bandwidth(ctx, data, cfg);
  record_config(ctx, cfg);
  ctx.report["parameters"]["gamma_estimator"] = spec.name();
  ctx.report["parameters"]["taus"] = std::vector<double>(spec.taus().begin(), spec.taus().end());
  const auto surv = conditional_survival(data, x, cfg);
  presence_warning(ctx, data, x, cfg, alpha * spec.taus().back());
  const auto est = weissman_quantile(surv, query, spec);
  ctx.report["results"]["anchor_quantile"] = est.anchor_quantile;
  ctx.report["results"]["gamma"] = est.gamma;
  const auto st = standardization(distances_to(data, x, cfg.semimetric), cfg.h, cfg.kernel, QuantileOrder{ alpha });
  if (est.gamma > 0.0) {
    ctx.report["results"]["asymptotic_log_sd"] = weissman_log_sd(spec, est.gamma, st.sigma_n, alpha, beta);
  }
  print_value(ctx, est.quantile);
  return 0;
}

int cmd_cv(Context& ctx)
{
  auto cfg = base_config(ctx.opt);
  const auto data = load(ctx);
  if (data.size() < 2)
    throw std::invalid_argument("cross-validation needs at least two observations");
  const DistanceMatrix distances(data, cfg.semimetric);
  const auto cv = resolve_bandwidth(ctx, data, cfg, distances);
  record_config(ctx, cfg);
  std::string csv = "h,score\n";
  for (std::size_t k = 0; k < cv.grid.size(); ++k)
    csv += format_double(cv.grid[k]) + "," + format_double(cv.scores[k]) + "\n";
  write_table(ctx, csv);
  ctx.report["results"]["h_opt"] = cv.h_opt;
  return 0;
}

int cmd_simulate(Context& ctx)
{
  const auto& o = ctx.opt;
  if (!o.seed)
    throw UsageError("simulate needs --seed");
  ExperimentPlan plan;
  plan.N = o.N ? *o.N : (o.table2 ? 200 : 50);
  plan.n = o.n;
  plan.beta = o.beta;
  plan.c_grid = o.c_list;
  plan.s_grid = o.s_list;
  plan.J_grid = o.J_list;
  plan.semimetrics.clear();
  for (const auto& name : o.semimetrics)
    plan.semimetrics.push_back(parse_semimetric(name));
  plan.seed = *o.seed;
  plan.lambda = o.lambda;
  const auto grid = parse_grid(o.grid);
  plan.h_lo = grid.values().front();
  plan.h_hi = grid.values().back();
  plan.h_count = grid.size();
  plan.threads = default_thread_count();
  plan.validate();

  auto& p = ctx.report["parameters"];
  p["N"] = plan.N;
  p["n"] = plan.n;
  p["beta"] = plan.resolved_beta();
  p["c"] = plan.c_grid;
  p["s"] = plan.s_grid;
  p["J"] = plan.J_grid;
  p["semimetrics"] = o.semimetrics;
  p["seed"] = plan.seed;
  p["lambda"] = plan.lambda;
  p["grid"] = { plan.h_lo, plan.h_hi, plan.h_count };

  const auto result = burr_experiment(plan);
  std::string csv = "s,J,semimetric,c,median,q10,q90,failures\n";
  std::size_t failures = 0;
  json cells = json::array();
  for (const auto& cell : result.cells) {
    csv += format_double(cell.s) + "," + std::to_string(cell.J) + "," + std::string(to_string(cell.semimetric)) +
           "," + format_double(cell.c) + "," + format_double(cell.median) + "," + format_double(cell.q10) + "," +
           format_double(cell.q90) + "," + std::to_string(cell.failures) + "\n";
    failures += cell.failures;
    cells.push_back({ { "s", cell.s },
                      { "J", cell.J },
                      { "semimetric", std::string(to_string(cell.semimetric)) },
                      { "c", cell.c },
                      { "median", cell.median },
                      { "q10", cell.q10 },
                      { "q90", cell.q90 },
                      { "failures", cell.failures } });
  }
  write_table(ctx, csv);
  ctx.report["results"]["cells"] = cells;
  ctx.report["results"]["failed_cell_replications"] = failures;
  if (failures > 0)
    warn(ctx, std::to_string(failures) + " cell replications failed; see the failures column");
  return 0;
}

int cmd_scan(Context& ctx)
{
  const auto& o = ctx.opt;
  if (o.xi_steps < 2)
    throw UsageError("--xi-steps must be at least 2");
  auto cfg = base_config(o);
  const auto spec = make_spec(o);
  const auto data = load(ctx);
  const double alpha = resolve_alpha(ctx, data.size());
  const double beta = o.beta ? *o.beta : 5.0 / static_cast<double>(data.size());
  const WeissmanQuery query{ alpha, beta, std::nullopt };
  query.validate();
  ctx.report["parameters"]["beta"] = beta;

  const DistanceMatrix distances(data, cfg.semimetric);
  if (o.h)
    ctx.report["bandwidth"] = { { "source", "fixed" }, { "h", cfg.h } };
  else
    resolve_bandwidth(ctx, data, cfg, distances);
  record_config(ctx, cfg);

  std::size_t i0 = 0;
  std::size_t i1 = 0;
  if (o.i0 || o.i1) {
    if (!o.i0 || !o.i1)
      throw UsageError("--i0 and --i1 must be given together");
    for (long idx : { *o.i0, *o.i1 }) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= data.size())
        throw UsageError("row index " + std::to_string(idx) + " is outside the dataset");
    }
    i0 = static_cast<std::size_t>(*o.i0);
    i1 = static_cast<std::size_t>(*o.i1);
  } else {
    if (data.size() < 2)
      throw std::invalid_argument("scan needs at least two curves");
    std::tie(i0, i1) = distances.argmax_pair();
  }
  ctx.report["parameters"]["i0"] = i0;
  ctx.report["parameters"]["i1"] = i1;

  const auto a = data.curve(i0);
  const auto b = data.curve(i1);
  std::vector<double> t(a.size());
  std::string csv = "xi,quantile,gamma\n";
  std::size_t failed = 0;
  std::string first_failure;
  for (std::size_t k = 0; k < o.xi_steps; ++k) {
    const double xi = static_cast<double>(k) / static_cast<double>(o.xi_steps - 1);
    for (std::size_t l = 0; l < t.size(); ++l)
      t[l] = xi * b[l] + (1.0 - xi) * a[l];
    try {
      const auto est = weissman_quantile(data, t, query, cfg, spec);
      csv += format_double(xi) + "," + format_double(est.quantile) + "," + format_double(est.gamma) + "\n";
    } catch (const std::exception& e) {
      ++failed;
      if (first_failure.empty())
        first_failure = e.what();
      csv += format_double(xi) + ",nan,nan\n";
    }
  }
  write_table(ctx, csv);
  ctx.report["results"]["rows"] = o.xi_steps;
  ctx.report["results"]["failed_rows"] = failed;
  if (failed > 0)
    throw std::runtime_error(std::to_string(failed) + " of " + std::to_string(o.xi_steps) +
                             " scan points failed; first: " + first_failure);
  return 0;
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& message, json extra = json::object())
{
  json rec = { { "error", kind }, { "message", message } };
  for (auto it = extra.begin(); it != extra.end(); ++it)
    rec[it.key()] = it.value();
  err << rec.dump() << "\n";
}

void write_report(const Context& ctx, int status)
{
  if (ctx.opt.report.empty())
    return;
  json rep = ctx.report;
  rep["exit_code"] = status;
  std::ofstream f(ctx.opt.report);
  if (!f)
    throw std::runtime_error("cannot open report file " + ctx.opt.report);
  f << rep.dump(2) << "\n";
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  Options o;
  CLI::App app{ "Extreme conditional quantiles with functional covariates", "fextq" };
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "fextq 0.1.0");

  auto* csf_cmd = app.add_subcommand("csf", "kernel estimate of P(Y > y | X = x)");
  add_data_options(csf_cmd, o);
  add_point_options(csf_cmd, o);
  csf_cmd->add_option("--y", o.y, "response level")->required();

  auto* q_cmd = app.add_subcommand("quantile", "conditional quantile of order alpha");
  add_data_options(q_cmd, o);
  add_point_options(q_cmd, o);
  q_cmd->add_option("--alpha", o.alpha, "order in (0, 1)")->required();

  auto* g_cmd = app.add_subcommand("gamma", "conditional tail index");
  add_data_options(g_cmd, o);
  add_point_options(g_cmd, o);
  add_anchor_options(g_cmd, o);
  add_tail_options(g_cmd, o);

  auto* w_cmd = app.add_subcommand("weissman", "extrapolated conditional quantile of order beta");
  add_data_options(w_cmd, o);
  add_point_options(w_cmd, o);
  add_anchor_options(w_cmd, o);
  add_tail_options(w_cmd, o);
  w_cmd->add_option("--beta", o.beta, "target order; defaults to 5/n");

  auto* cv_cmd = app.add_subcommand("cv", "cross-validation scores over the bandwidth grid (CSV h,score)");
  add_data_options(cv_cmd, o);
  cv_cmd->add_option("--output", o.output, "CSV destination (default stdout)");

  auto* sim_cmd = app.add_subcommand("simulate", "replicated Burr study (CSV, one row per cell)");
  sim_cmd->add_flag("--table2", o.table2, "full-size study: N defaults to 200");
  sim_cmd->add_option("--seed", o.seed, "root seed");
  sim_cmd->add_option("--N", o.N, "replications (default 50, or 200 with --table2)");
  sim_cmd->add_option("--n", o.n, "sample size");
  sim_cmd->add_option("--beta", o.beta, "target order; defaults to 5/n");
  sim_cmd->add_option("--c", o.c_list, "anchor constants c in alpha = c log(n)/n")->delimiter(',');
  sim_cmd->add_option("--s", o.s_list, "exponents s in tau_j = (1/j)^s")->delimiter(',');
  sim_cmd->add_option("--J", o.J_list, "numbers of weights J")->delimiter(',');
  sim_cmd->add_option("--semimetrics", o.semimetrics, "semi-metrics, e.g. l2,normdiff")->delimiter(',');
  sim_cmd->add_option("--lambda", o.lambda, "response bandwidth");
  sim_cmd->add_option("--grid", o.grid, "cross-validation grid lo:hi:M");
  sim_cmd->add_option("--output", o.output, "CSV destination (default stdout)");
  sim_cmd->add_option("--report", o.report, "write a JSON run summary here");

  auto* scan_cmd = app.add_subcommand("scan", "extrapolated quantile and tail index along a segment of curves");
  add_data_options(scan_cmd, o);
  add_anchor_options(scan_cmd, o);
  add_tail_options(scan_cmd, o);
  scan_cmd->add_option("--beta", o.beta, "target order; defaults to 5/n");
  scan_cmd->add_option("--xi-steps", o.xi_steps, "number of points on [0, 1]");
  scan_cmd->add_option("--i0", o.i0, "row of the segment start");
  scan_cmd->add_option("--i1", o.i1, "row of the segment end");
  scan_cmd->add_option("--output", o.output, "CSV destination (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty())
    reversed.pop_back(); // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", e.what());
    return 2;
  }

  for (auto* sub : app.get_subcommands())
    o.command = sub->get_name();

  Context ctx{ o, out, err, json::object() };
  ctx.report["schema"] = "fextq-report/1";
  ctx.report["command"] = o.command;
  ctx.report["parameters"] = json::object();
  ctx.report["results"] = json::object();
  ctx.report["warnings"] = json::array();

  int status = 0;
  try {
    if (o.command == "csf")
      status = cmd_csf(ctx);
    else if (o.command == "quantile")
      status = cmd_quantile(ctx);
    else if (o.command == "gamma")
      status = cmd_gamma(ctx);
    else if (o.command == "weissman")
      status = cmd_weissman(ctx);
    else if (o.command == "cv")
      status = cmd_cv(ctx);
    else if (o.command == "simulate")
      status = cmd_simulate(ctx);
    else if (o.command == "scan")
      status = cmd_scan(ctx);
  } catch (const UsageError& e) {
    emit_error(err, "usage", e.what());
    status = 2;
  } catch (const DatasetError& e) {
    json extra = json::object();
    if (e.row() >= 0)
      extra["row"] = e.row();
    if (e.column() >= 0)
      extra["column"] = e.column();
    emit_error(err, "dataset", e.what(), extra);
    status = 1;
  } catch (const EmptyNeighborhood& e) {
    emit_error(err, "empty_neighborhood", e.what(),
               { { "h", e.bandwidth() }, { "nearest_distance", e.nearest_distance() } });
    status = 1;
  } catch (const TailIndexError& e) {
    emit_error(err, "tail_index", e.what());
    status = 1;
  } catch (const std::invalid_argument& e) {
    emit_error(err, "precondition", e.what());
    status = 2;
  } catch (const std::exception& e) {
    emit_error(err, "failure", e.what());
    status = 1;
  }

  try {
    write_report(ctx, status);
  } catch (const std::exception& e) {
    emit_error(err, "io", e.what());
    if (status == 0)
      status = 1;
  }
  return status;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  std::vector<std::string> args(argv, argv + argc);
  return run(args, out, err);
}

} // namespace fextq::cli
