// Acceptance runner: one line per criterion, nonzero exit if any fails.
//
//   fextq_acceptance [--only K] [--cli PATH] [--workdir DIR]

#include "fextq/bandwidth.hpp"
#include "fextq/estimator.hpp"
#include "fextq/experiments.hpp"
#include "fextq/extrapolation.hpp"
#include "fextq/models.hpp"
#include "fextq/parallel.hpp"
#include "fextq/semimetrics.hpp"
#include "fextq/tail_index.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fextq;

namespace {

struct Outcome
{
  bool pass = false;
  std::string detail;
};

struct Options
{
  int only = 0;
  std::string cli;
  std::filesystem::path workdir = std::filesystem::temp_directory_path();
};

std::string fmt(double v, int precision = 4)
{
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

double rel_err(double a, double b)
{
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// 1. Exact power-law quantiles recover gamma; Weissman recovers q(beta).
Outcome ac1(const Options&)
{
  const auto taus5 = power_taus(1.0, 5);
  const auto taus4 = power_taus(2.0, 4);
  std::vector<TailIndexSpec> specs{ TailIndexSpec::hill(taus5), TailIndexSpec::pickands() };
  for (double p : { 1.0, 2.0, 3.0 })
    specs.push_back(TailIndexSpec::phi_p(taus4, p));
  specs.push_back(TailIndexSpec::phi_pqr(taus5, 0.5, 1.0, 2.0));
  specs.push_back(TailIndexSpec::phi_pqr(taus4, 2.0, 1.0, 3.0));

  double worst_gamma = 0.0;
  double worst_weissman = 0.0;
  for (double gamma : { 0.1, 0.5, 1.0, 2.0 }) {
    for (const auto& spec : specs) {
      for (double alpha : { 0.2, 0.05, 1e-3 }) {
        // q(a) = C a^(-gamma) with an arbitrary scale C
        const double C = 3.7;
        std::vector<double> q;
        for (double t : spec.taus())
          q.push_back(C * std::pow(t * alpha, -gamma));
        const double g = gamma_from_quantiles(spec, q);
        worst_gamma = std::max(worst_gamma, std::abs(g - gamma));
        const double beta = alpha / 1000.0;
        const double qw = weissman_extrapolate(q[0], alpha, beta, g);
        worst_weissman = std::max(worst_weissman, rel_err(qw, C * std::pow(beta, -gamma)));
      }
    }
  }
  return { worst_gamma <= 1e-12 && worst_weissman <= 1e-10,
           "max |gamma err|=" + fmt(worst_gamma) + " max weissman rel err=" + fmt(worst_weissman) };
}

// 2. Generic quadratic form against the closed-form variances.
Outcome ac2(const Options&)
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double worst_hill = 0.0;
  for (std::size_t J = 2; J <= 6; ++J) {
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> taus{ 1.0 };
      for (std::size_t j = 1; j < J; ++j)
        taus.push_back(taus.back() * u(rng));
      const double gamma = 0.1 + 2.0 * u(rng);
      const double generic = asymptotic_variance(TailIndexSpec::hill(taus), gamma);
      worst_hill = std::max(worst_hill, rel_err(generic, oracle::hill_variance(taus, gamma)));
    }
  }
  double worst_fp = 0.0;
  for (double gamma : { 0.5, 1.0, 2.0 }) {
    const double a = std::pow(2.0, gamma);
    const double closed = gamma * gamma * (std::pow(2.0, 2.0 * gamma + 1.0) + 1.0) /
                          (4.0 * std::log(2.0) * std::log(2.0) * (a - 1.0) * (a - 1.0));
    const double generic = asymptotic_variance(TailIndexSpec::pickands(), gamma, VarianceScale::smallest_order);
    worst_fp = std::max(worst_fp, rel_err(generic, closed));
  }
  return { worst_hill <= 1e-10 && worst_fp <= 1e-10,
           "max rel err hill=" + fmt(worst_hill) + " pickands=" + fmt(worst_fp) };
}

// 3. Randomized property suite for the conditional survival estimator.
Outcome ac3(const Options&)
{
  constexpr int cases = 1000;
  std::vector<std::string> failures;
  auto fail = [&](int c, const std::string& what) {
    if (failures.size() < 5)
      failures.push_back("case " + std::to_string(c) + ": " + what);
    else
      failures.emplace_back();
  };

  for (int c = 0; c < cases; ++c) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(c));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 20 + static_cast<std::size_t>(60 * u(rng));
    const auto data = fixtures::random_dataset(n, 15, 5000 + static_cast<std::uint64_t>(c));
    const auto x = data.curve(static_cast<std::size_t>(u(rng) * static_cast<double>(n)) % n);
    const auto kind = c % 2 == 0 ? SemiMetricKind::l2 : SemiMetricKind::norm_diff;
    auto d = distances_to(data, x, kind);
    auto sorted = d;
    std::sort(sorted.begin(), sorted.end());

    EstimatorConfig cfg;
    cfg.semimetric = kind;
    cfg.kernel = c % 3 == 0 ? CovariateKernel::uniform() : CovariateKernel::linear();
    cfg.h = sorted[std::max<std::size_t>(2, n / 3)] * (1.0 + 0.5 * u(rng)) + 1e-12;
    cfg.lambda = 0.01 + 0.5 * u(rng);
    const std::vector<double> y(data.responses().begin(), data.responses().end());
    const auto F = conditional_survival(y, d, cfg);

    // monotone and bounded on a fine y grid
    const double lo = F.min_response() - 2.0 * cfg.lambda;
    const double hi = F.max_response() + 2.0 * cfg.lambda;
    double prev = 1.0;
    for (int k = 0; k <= 400; ++k) {
      const double v = F(lo + (hi - lo) * k / 400.0);
      if (!(v >= 0.0 && v <= 1.0))
        fail(c, "unbounded value " + fmt(v));
      if (v > prev)
        fail(c, "not monotone");
      prev = v;
    }
    if (F(lo) != 1.0 || F(hi) != 0.0)
      fail(c, "wrong limits");

    // locality: responses outside the ball do not matter
    auto y_far = y;
    for (std::size_t i = 0; i < n; ++i)
      if (d[i] > cfg.h)
        y_far[i] = 1e6 * u(rng);
    const auto F_far = conditional_survival(y_far, d, cfg);
    for (double t : { F.min_response(), 0.5 * (F.min_response() + F.max_response()), F.max_response() })
      if (std::abs(F(t) - F_far(t)) > 1e-12)
        fail(c, "not local");

    // invariance to a common rescaling of the covariate weights
    const auto w = local_weights(d, cfg.h, cfg.kernel).weights;
    auto w_scaled = w;
    const double scale = std::exp(8.0 * u(rng) - 4.0);
    for (double& v : w_scaled)
      v *= scale;
    const ConditionalSurvival Fw(y, w, cfg.lambda);
    const ConditionalSurvival Fs(y, w_scaled, cfg.lambda);
    for (int k = 0; k <= 20; ++k) {
      const double t = lo + (hi - lo) * k / 20.0;
      if (std::abs(Fw(t) - Fs(t)) > 1e-12)
        fail(c, "weight scaling changes F");
    }

    // quantile is the generalized inverse
    for (double alpha : { 0.9, 0.5, 0.1, 0.01 }) {
      const double q = F.quantile(alpha);
      const double tol = 1e-10 * (1.0 + (F.max_response() - F.min_response() + 2.0 * cfg.lambda));
      if (!(F(q) <= alpha) || !(F(q - 1.01 * tol) > alpha))
        fail(c, "inverse inconsistent at alpha=" + fmt(alpha));
    }

    // kernel moments sandwiched by the small-ball frequency
    double phi_hat = 0.0;
    for (double v : d)
      phi_hat += v <= cfg.h ? 1.0 : 0.0;
    phi_hat /= static_cast<double>(n);
    for (double tau : { 1.0, 2.0, 3.0 }) {
      const double mu = kernel_moment(d, cfg.h, cfg.kernel, tau);
      const double c1 = std::pow(cfg.kernel.lower_bound(), tau);
      const double c2 = std::pow(cfg.kernel.upper_bound(), tau);
      if (!(c1 * phi_hat <= mu * (1.0 + 1e-12) && mu <= c2 * phi_hat * (1.0 + 1e-12)))
        fail(c, "moment bound at tau=" + fmt(tau));
    }

    // lambda -> 0 gives the weighted empirical survival away from the data
    EstimatorConfig tiny = cfg;
    tiny.lambda = 1e-8;
    const auto F0 = conditional_survival(y, d, tiny);
    auto ys = y;
    std::sort(ys.begin(), ys.end());
    for (std::size_t k = 0; k + 1 < ys.size(); k += 3) {
      if (ys[k + 1] - ys[k] < 1e-6)
        continue;
      const double t = 0.5 * (ys[k] + ys[k + 1]);
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double wi = oracle::kernel_linear(d[i] / cfg.h);
        const double wk = cfg.kernel.shape() == CovariateKernel::Shape::uniform ? (d[i] <= cfg.h ? 1.0 : 0.0) : wi;
        num += wk * (y[i] > t ? 1.0 : 0.0);
        den += wk;
      }
      if (std::abs(F0(t) - num / den) > 1e-12)
        fail(c, "lambda->0 mismatch");
    }
  }
  std::string detail = std::to_string(cases) + " cases, " + std::to_string(failures.size()) + " violations";
  for (const auto& f : failures)
    if (!f.empty())
      detail += "; " + f;
  return { failures.empty(), detail };
}

// 4. Optimized CV score against the quadruple loop.
Outcome ac4(const Options&)
{
  double worst = 0.0;
  int argmin_mismatch = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto data = fixtures::random_dataset(30, 21, 700 + rep);
    const DistanceMatrix D(data, SemiMetricKind::l2);
    const auto grid = BandwidthGrid::from_distance_quantiles(D, 0.02, 0.4, 8);
    EstimatorConfig cfg;
    cfg.lambda = 0.25;
    const auto cv = cv_bandwidth(D, data.responses(), grid, cfg);

    std::vector<double> values;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto row = data.curve(i);
      values.insert(values.end(), row.begin(), row.end());
    }
    const std::vector<double> t(data.grid().points().begin(), data.grid().points().end());
    const std::vector<double> y(data.responses().begin(), data.responses().end());
    double best = std::numeric_limits<double>::infinity();
    double best_h = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double h = grid.values()[k];
      const double ref = oracle::cv_score(values, t, y, h, cfg.lambda);
      worst = std::max(worst, std::abs(cv.scores[k] - ref));
      if (ref < best) {
        best = ref;
        best_h = h;
      }
    }
    argmin_mismatch += best_h != cv.h_opt;
  }
  return { worst <= 1e-10 && argmin_mismatch == 0,
           "max |score diff|=" + fmt(worst) + " argmin mismatches=" + std::to_string(argmin_mismatch) };
}

// 5. Limit laws in the constant-gamma smoke configuration.
Outcome ac5(const Options&)
{
  NormalityPlan plan;
  plan.seed = 55;
  plan.threads = default_thread_count();
  const auto model = HeavyTailModel::pareto(1.0);
  const std::vector<double> x{ 0.0, 0.0 };
  const auto g = normality_check(model, x, NormalityTarget::gamma, plan);
  const auto q = normality_check(model, x, NormalityTarget::quantile, plan);
  const auto w = normality_check(model, x, NormalityTarget::weissman, plan);
  const double ratio = g.sd_ratio[0];
  const double corr = q.correlation[0][1];
  const double target = 1.0 / std::numbers::sqrt2;
  const bool pass = ratio >= 0.7 && ratio <= 1.3 && std::abs(corr - target) <= 0.15;
  return { pass, "hill sd ratio=" + fmt(ratio) + " quantile corr=" + fmt(corr) + " (target " + fmt(target) +
                   "); info: weissman sd ratio=" + fmt(w.sd_ratio[0]) + " hill ks=" + fmt(g.ks[0]) };
}

// 6. Burr study against the reference medians.
Outcome ac6(const Options&)
{
  ExperimentPlan plan;
  plan.N = 200;
  plan.n = 500;
  plan.c_grid = { 20 };
  plan.s_grid = { 2, 3 };
  plan.J_grid = { 3, 5, 9 };
  plan.seed = 2026;
  plan.threads = default_thread_count();
  const auto res = burr_experiment(plan);

  struct Ref
  {
    double s;
    SemiMetricKind metric;
    double median;
  };
  const std::vector<Ref> refs{ { 2, SemiMetricKind::l2, 341 },
                               { 2, SemiMetricKind::norm_diff, 329 },
                               { 3, SemiMetricKind::l2, 231 },
                               { 3, SemiMetricKind::norm_diff, 228 } };
  bool pass = true;
  std::string detail;
  for (const auto& r : refs) {
    for (const auto& cell : res.cells) {
      if (cell.s != r.s || cell.semimetric != r.metric || cell.J != 5)
        continue;
      const bool ok = cell.median >= r.median / 2.0 && cell.median <= r.median * 2.0;
      pass = pass && ok;
      detail += "s=" + fmt(r.s) + " " + std::string(to_string(r.metric)) + " median=" + fmt(cell.median) + " ref=" +
                fmt(r.median) + (ok ? " ok" : " OUT") + "; ";
    }
  }
  for (double s : plan.s_grid) {
    double best_l2 = std::numeric_limits<double>::infinity();
    double best_nd = std::numeric_limits<double>::infinity();
    for (const auto& cell : res.cells) {
      if (cell.s != s || cell.J != 5)
        continue;
      (cell.semimetric == SemiMetricKind::l2 ? best_l2 : best_nd) =
        std::min(cell.semimetric == SemiMetricKind::l2 ? best_l2 : best_nd, cell.median);
    }
    detail += "info s=" + fmt(s) + " ordering norm_diff<=l2: " + (best_nd <= best_l2 ? "yes" : "no") + "; ";
  }
  // which J is closest to the references on the log scale, over all four cells
  std::size_t best_J = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t J : plan.J_grid) {
    double dist = 0.0;
    for (const auto& r : refs)
      for (const auto& cell : res.cells)
        if (cell.s == r.s && cell.semimetric == r.metric && cell.J == J)
          dist += std::abs(std::log(cell.median / r.median));
    if (dist < best_dist) {
      best_dist = dist;
      best_J = J;
    }
  }
  detail += "info best-matching J=" + std::to_string(best_J) + " (sum |log ratio|=" + fmt(best_dist) + "); ";
  detail += "info J sweep:";
  for (const auto& cell : res.cells)
    detail += " (s=" + fmt(cell.s) + ",J=" + std::to_string(cell.J) + "," + std::string(to_string(cell.semimetric)) +
              ")=" + fmt(cell.median);
  return { pass, detail };
}

// 7. Presence probability along an n-doubling schedule.
Outcome ac7(const Options&)
{
  const CosineCovariateProcess process(100);
  const auto model = HeavyTailModel::pareto(1.0);
  const auto x = process.curve(0.6);
  PresencePlan plan;
  plan.seed = 77;
  plan.threads = default_thread_count();

  std::vector<PresencePoint> doubling;
  for (std::size_t n = 25; n <= 800; n *= 2)
    doubling.push_back({ n, 0.02, 20.0 });
  std::vector<PresencePoint> small;
  for (std::size_t n = 25; n <= 800; n *= 2)
    small.push_back({ n, 0.02, 400.0 });

  const auto a = presence_curve(process, model, x, doubling, plan);
  plan.seed = 78;
  const auto b = presence_curve(process, model, x, small, plan);

  bool monotone = true;
  for (std::size_t k = 0; k + 1 < a.size(); ++k) {
    const double sd = std::hypot(a[k].binomial_sd, a[k + 1].binomial_sd);
    monotone = monotone && a[k + 1].presence >= a[k].presence - 2.0 * sd;
  }
  bool agree = true;
  std::size_t checked = 0;
  std::string detail = "presence:";
  for (const auto& r : a)
    detail += " " + fmt(r.presence, 3);
  detail += "; small regime (estimate/approx):";
  for (const auto& r : b) {
    detail += " " + fmt(r.presence, 3) + "/" + fmt(r.approximation, 3);
    if (r.approximation > 0.1)
      continue;
    ++checked;
    const double p = r.approximation;
    const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(plan.reps));
    agree = agree && std::abs(r.presence - p) <= 3.0 * std::max(sd, r.binomial_sd);
  }
  detail += "; phi=" + fmt(a[0].phi) + " checked=" + std::to_string(checked);
  return { monotone && agree && checked > 0, detail };
}

// 8. Second-order quantile expansion.
Outcome ac8(const Options&)
{
  std::vector<double> alphas;
  std::vector<double> betas;
  for (double e = 1.0; e <= 5.0 + 1e-9; e += 0.25) {
    alphas.push_back(std::pow(10.0, -e));
    betas.push_back(std::pow(10.0, -e) / 10.0);
  }
  double pareto_max = 0.0;
  for (const auto& r : quantile_expansion_check(HeavyTailModel::pareto(0.5).at({}), alphas, betas))
    pareto_max = std::max(pareto_max, r.lhs);
  double burr_max = 0.0;
  bool finite = true;
  for (const auto& r : quantile_expansion_check(HeavyTailModel::burr(2.0, 1.0).at({}), alphas, betas)) {
    finite = finite && std::isfinite(r.ratio);
    burr_max = std::max(burr_max, r.ratio);
  }
  return { pareto_max <= 1e-12 && finite && burr_max <= 1.0,
           "pareto max lhs=" + fmt(pareto_max) + " burr max ratio=" + fmt(burr_max) };
}

// 9. CLI simulate output independent of the worker count.
Outcome ac9(const Options& opt)
{
  if (opt.cli.empty())
    return { false, "no --cli path given" };
  const auto dir = opt.workdir;
  std::filesystem::create_directories(dir);
  std::vector<std::string> contents;
  for (const char* threads : { "1", "4" }) {
    const auto out = dir / (std::string("ac9-threads-") + threads + ".csv");
    const std::string cmd = "FEXTQ_THREADS=" + std::string(threads) + " \"" + opt.cli +
                            "\" simulate --seed 99 --N 8 --n 150 --s 2,3 --J 3 --c 10,20 --output \"" +
                            out.string() + "\"";
    if (std::system(cmd.c_str()) != 0)
      return { false, "command failed: " + cmd };
    std::ifstream f(out, std::ios::binary);
    contents.emplace_back(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  const bool same = !contents[0].empty() && contents[0] == contents[1];
  return { same, std::to_string(contents[0].size()) + " bytes, " + (same ? "identical" : "different") };
}

} // namespace

int main(int argc, char** argv)
{
  Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc)
      opt.only = std::atoi(argv[++i]);
    else if (a == "--cli" && i + 1 < argc)
      opt.cli = argv[++i];
    else if (a == "--workdir" && i + 1 < argc)
      opt.workdir = argv[++i];
    else {
      std::cerr << "usage: fextq_acceptance [--only K] [--cli PATH] [--workdir DIR]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome(const Options&)>>> criteria{
    { "exact Pareto oracle", ac1 },
    { "closed-form variances", ac2 },
    { "estimator properties", ac3 },
    { "CV oracle equivalence", ac4 },
    { "limit-law Monte Carlo", ac5 },
    { "Burr study medians", ac6 },
    { "presence curve", ac7 },
    { "quantile expansion", ac8 },
    { "determinism", ac9 },
  };

  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (opt.only != 0 && opt.only != id)
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[k].second(opt);
    } catch (const std::exception& e) {
      out = { false, std::string("exception: ") + e.what() };
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "AC" << id << ' ' << (out.pass ? "PASS" : "FAIL") << ' ' << criteria[k].first << " ["
              << fmt(secs, 3) << " s] " << out.detail << std::endl;
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
