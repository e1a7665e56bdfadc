#include "fextq/experiments.hpp"

#include "fextq/bandwidth.hpp"
#include "fextq/extrapolation.hpp"
#include "fextq/parallel.hpp"
#include "fextq/stats.hpp"
#include "fextq/tail_index.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fextq {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::vector<std::vector<double>> sample_covariance(const std::vector<std::vector<double>>& comps)
{
  const std::size_t J = comps.size();
  std::vector<std::vector<double>> cov(J, std::vector<double>(J));
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = 0; k < J; ++k)
      cov[j][k] = stats::covariance(comps[j], comps[k]);
  return cov;
}

std::vector<std::vector<double>> to_correlation(const std::vector<std::vector<double>>& cov)
{
  auto corr = cov;
  for (std::size_t j = 0; j < cov.size(); ++j)
    for (std::size_t k = 0; k < cov.size(); ++k)
      corr[j][k] = cov[j][k] / std::sqrt(cov[j][j] * cov[k][k]);
  return corr;
}

} // namespace

double ExperimentPlan::resolved_beta() const
{
  return beta ? *beta : 5.0 / static_cast<double>(n);
}

void ExperimentPlan::validate() const
{
  if (N < 1)
    throw std::invalid_argument("plan needs N >= 1 replications");
  if (n < 2)
    throw std::invalid_argument("plan needs sample size n >= 2");
  if (c_grid.empty() || s_grid.empty() || J_grid.empty() || semimetrics.empty())
    throw std::invalid_argument("plan grids must be nonempty");
  for (std::size_t J : J_grid) {
    if (J < 2)
      throw std::invalid_argument("plan needs J >= 2");
  }
  for (double s : s_grid) {
    if (!(s > 0.0))
      throw std::invalid_argument("plan needs s > 0");
  }
  const double b = resolved_beta();
  for (double c : c_grid) {
    const double alpha = default_anchor_order(n, c);
    WeissmanQuery{ alpha, b, std::nullopt }.validate();
  }
  if (!(lambda > 0.0))
    throw std::invalid_argument("plan needs lambda > 0");
  BandwidthGrid::regular(h_lo, h_hi, h_count);
}

ExperimentResult burr_experiment(const ExperimentPlan& plan)
{
  plan.validate();
  const CosineCovariateProcess process(plan.curve_points);
  const HeavyTailModel model = burr_cosine_model(process);
  const BandwidthGrid grid = BandwidthGrid::regular(plan.h_lo, plan.h_hi, plan.h_count);
  const double beta = plan.resolved_beta();

  std::vector<TailIndexSpec> specs;
  for (double s : plan.s_grid)
    for (std::size_t J : plan.J_grid)
      specs.push_back(TailIndexSpec::hill(power_taus(s, J)));
  std::vector<double> alphas;
  for (double c : plan.c_grid)
    alphas.push_back(default_anchor_order(plan.n, c));

  const std::size_t n_spec = specs.size();
  const std::size_t n_metric = plan.semimetrics.size();
  const std::size_t n_c = alphas.size();
  auto cell_index = [&](std::size_t spec, std::size_t metric, std::size_t c) {
    return (spec * n_metric + metric) * n_c + c;
  };
  const std::size_t n_cells = n_spec * n_metric * n_c;

  struct Replication
  {
    std::vector<double> delta; // NaN marks a failed cell
    std::vector<double> h;
  };
  std::vector<Replication> reps(plan.N);

  parallel_for(plan.N, plan.threads, [&](std::size_t r) {
    auto rng = make_stream(plan.seed, r);
    const auto sample = simulate(process, model, plan.n, rng);
    const Dataset& data = sample.data;

    std::vector<double> truth(plan.n);
    for (std::size_t i = 0; i < plan.n; ++i)
      truth[i] = model.at(data.curve(i)).quantile(beta);

    Replication out;
    out.delta.assign(n_cells, 0.0);
    out.h.assign(n_metric, nan);
    for (std::size_t k = 0; k < n_metric; ++k) {
      EstimatorConfig cfg;
      cfg.lambda = plan.lambda;
      cfg.semimetric = plan.semimetrics[k];
      const DistanceMatrix distances(data, cfg.semimetric);
      try {
        cfg.h = cv_bandwidth(distances, data.responses(), grid, cfg, 1).h_opt;
      } catch (const std::exception&) {
        for (std::size_t sp = 0; sp < n_spec; ++sp)
          for (std::size_t c = 0; c < n_c; ++c)
            out.delta[cell_index(sp, k, c)] = nan;
        continue;
      }
      out.h[k] = cfg.h;

      for (std::size_t i = 0; i < plan.n; ++i) {
        std::optional<ConditionalSurvival> surv;
        try {
          surv.emplace(conditional_survival(data.responses(), distances.row(i), cfg));
        } catch (const std::exception&) {
        }
        for (std::size_t sp = 0; sp < n_spec; ++sp) {
          for (std::size_t c = 0; c < n_c; ++c) {
            double& slot = out.delta[cell_index(sp, k, c)];
            if (std::isnan(slot))
              continue;
            if (!surv) {
              slot = nan;
              continue;
            }
            try {
              const auto est = weissman_quantile(*surv, WeissmanQuery{ alphas[c], beta, std::nullopt }, specs[sp]);
              const double err = est.quantile - truth[i];
              slot += err * err;
              if (!std::isfinite(slot))
                slot = nan;
            } catch (const std::exception&) {
              slot = nan;
            }
          }
        }
      }
    }
    reps[r] = std::move(out);
  });

  ExperimentResult result;
  result.h_selected.assign(n_metric, std::vector<double>(plan.N));
  for (std::size_t r = 0; r < plan.N; ++r)
    for (std::size_t k = 0; k < n_metric; ++k)
      result.h_selected[k][r] = reps[r].h[k];

  std::size_t sp = 0;
  for (double s : plan.s_grid) {
    for (std::size_t J : plan.J_grid) {
      for (std::size_t k = 0; k < n_metric; ++k) {
        for (std::size_t c = 0; c < n_c; ++c) {
          ExperimentCell cell;
          cell.s = s;
          cell.J = J;
          cell.semimetric = plan.semimetrics[k];
          cell.c = plan.c_grid[c];
          for (std::size_t r = 0; r < plan.N; ++r) {
            const double d = reps[r].delta[cell_index(sp, k, c)];
            if (std::isnan(d))
              ++cell.failures;
            else
              cell.deltas.push_back(d);
          }
          if (cell.deltas.empty()) {
            cell.median = cell.q10 = cell.q90 = nan;
          } else {
            cell.median = stats::quantile(cell.deltas, 0.5);
            cell.q10 = stats::quantile(cell.deltas, 0.1);
            cell.q90 = stats::quantile(cell.deltas, 0.9);
          }
          result.cells.push_back(std::move(cell));
        }
      }
      ++sp;
    }
  }
  return result;
}

NormalityReport normality_check(const HeavyTailModel& model,
                                std::span<const double> x,
                                NormalityTarget target,
                                const NormalityPlan& plan)
{
  if (plan.N < 2 || plan.n < 2)
    throw std::invalid_argument("normality check needs N >= 2 and n >= 2");
  const TailLaw law = model.at(x);
  const double gamma = law.gamma();
  const std::vector<double> distances(plan.n, 0.0);

  std::optional<TailIndexSpec> hill;
  if (target == NormalityTarget::gamma || target == NormalityTarget::weissman)
    hill.emplace(TailIndexSpec::hill(plan.taus));
  if (target == NormalityTarget::weissman)
    WeissmanQuery{ plan.alpha, plan.beta, std::nullopt }.validate();

  NormalityReport report;
  report.target = target;
  std::vector<std::vector<double>> theory_cov;
  switch (target) {
    case NormalityTarget::csf: {
      const auto J = plan.a.size();
      theory_cov.assign(J, std::vector<double>(J));
      for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < J; ++k)
          theory_cov[j][k] = std::pow(plan.a[std::min(j, k)], 1.0 / gamma);
      break;
    }
    case NormalityTarget::quantile: {
      validate_taus(plan.taus);
      const auto J = plan.taus.size();
      theory_cov.assign(J, std::vector<double>(J));
      for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < J; ++k)
          theory_cov[j][k] = gamma * gamma / plan.taus[std::min(j, k)];
      break;
    }
    case NormalityTarget::gamma:
    case NormalityTarget::weissman:
      theory_cov = { { asymptotic_variance(*hill, gamma) } };
      break;
  }
  const std::size_t J = theory_cov.size();

  const double y_n = law.quantile(plan.alpha);
  std::vector<std::vector<double>> by_rep(plan.N, std::vector<double>(J));
  parallel_for(plan.N, plan.threads, [&](std::size_t r) {
    auto rng = make_stream(plan.seed, r);
    std::vector<double> y(plan.n);
    for (auto& v : y)
      v = law.sample(open_uniform(rng));
    const auto lw = local_weights(distances, plan.h, plan.kernel);
    const ConditionalSurvival surv(y, lw.weights, plan.lambda);
    auto& out = by_rep[r];
    switch (target) {
      case NormalityTarget::csf: {
        const auto st = standardization(distances, plan.h, plan.kernel, SurvivalLevel{ law.survival(y_n) });
        for (std::size_t j = 0; j < J; ++j) {
          const double yj = plan.a[j] * y_n;
          out[j] = (surv(yj) / law.survival(yj) - 1.0) / st.lambda_n;
        }
        break;
      }
      case NormalityTarget::quantile: {
        const auto st = standardization(distances, plan.h, plan.kernel, QuantileOrder{ plan.alpha });
        for (std::size_t j = 0; j < J; ++j) {
          const double order = plan.taus[j] * plan.alpha;
          out[j] = (surv.quantile(order) / law.quantile(order) - 1.0) / st.sigma_n;
        }
        break;
      }
      case NormalityTarget::gamma: {
        const auto st = standardization(distances, plan.h, plan.kernel, QuantileOrder{ plan.alpha });
        out[0] = (estimate_gamma(surv, plan.alpha, *hill) - gamma) / st.sigma_n;
        break;
      }
      case NormalityTarget::weissman: {
        const auto st = standardization(distances, plan.h, plan.kernel, QuantileOrder{ plan.alpha });
        const auto est = weissman_quantile(surv, WeissmanQuery{ plan.alpha, plan.beta, std::nullopt }, *hill);
        out[0] = (est.quantile / law.quantile(plan.beta) - 1.0) / (st.sigma_n * std::log(plan.alpha / plan.beta));
        break;
      }
    }
  });

  report.samples.assign(J, std::vector<double>(plan.N));
  for (std::size_t r = 0; r < plan.N; ++r)
    for (std::size_t j = 0; j < J; ++j)
      report.samples[j][r] = by_rep[r][j];

  report.covariance = sample_covariance(report.samples);
  report.correlation = to_correlation(report.covariance);
  report.theoretical_correlation = to_correlation(theory_cov);
  for (std::size_t j = 0; j < J; ++j) {
    const double sd = std::sqrt(theory_cov[j][j]);
    report.theoretical_sd.push_back(sd);
    report.sd_ratio.push_back(stats::sd(report.samples[j]) / sd);
    std::vector<double> z(report.samples[j]);
    for (double& v : z)
      v /= sd;
    report.ks.push_back(stats::ks_distance_normal(std::move(z)));
  }
  return report;
}

std::vector<PresenceResult> presence_curve(const CosineCovariateProcess& process,
                                                  const HeavyTailModel& model,
                                                  std::span<const double> x,
                                                  std::span<const PresencePoint> points,
                                                  const PresencePlan& plan)
{
  if (plan.reps < 2 || plan.phi_draws < 1)
    throw std::invalid_argument("presence curve needs reps >= 2 and phi_draws >= 1");
  const Grid& grid = process.grid();
  const TailLaw law_x = model.at(x);

  // Distances of an independent batch of covariates, reused for every h.
  std::vector<double> phi_distances(plan.phi_draws);
  {
    auto rng = make_stream(plan.seed, ~std::uint64_t{ 0 });
    for (auto& d : phi_distances)
      d = distance(plan.semimetric, x, process.curve(process.draw_z(rng)), grid);
  }

  std::vector<PresenceResult> results;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const PresencePoint pt = points[p];
    if (!(pt.h > 0.0) || pt.n < 1)
      throw std::invalid_argument("presence point needs n >= 1 and h > 0");
    std::vector<char> hit(plan.reps, 0);
    parallel_for(plan.reps, plan.threads, [&](std::size_t r) {
      auto rng = make_stream(plan.seed, (static_cast<std::uint64_t>(p) << 32) | r);
      for (std::size_t i = 0; i < pt.n; ++i) {
        const auto xi = process.curve(process.draw_z(rng));
        const double u = open_uniform(rng);
        if (distance(plan.semimetric, x, xi, grid) <= pt.h && model.at(xi).sample(u) > pt.y) {
          hit[r] = 1;
          return;
        }
      }
    });

    PresenceResult res;
    res.point = pt;
    std::size_t count = 0;
    for (char h : hit)
      count += h ? 1 : 0;
    const auto reps = static_cast<double>(plan.reps);
    res.presence = static_cast<double>(count) / reps;
    res.binomial_sd = std::sqrt(res.presence * (1.0 - res.presence) / reps);
    std::size_t inside = 0;
    for (double d : phi_distances)
      inside += d <= pt.h ? 1 : 0;
    res.phi = static_cast<double>(inside) / static_cast<double>(phi_distances.size());
    res.survival = std::isfinite(pt.y) ? law_x.survival(pt.y) : 0.0;
    res.approximation = -std::expm1(-static_cast<double>(pt.n) * res.phi * res.survival);
    results.push_back(res);
  }
  return results;
}

std::vector<ExpansionRow> quantile_expansion_check(const TailLaw& law,
                                                 std::span<const double> alphas,
                                                 std::span<const double> betas)
{
  if (alphas.size() != betas.size())
    throw std::invalid_argument("alpha and beta grids differ in length");
  std::vector<ExpansionRow> rows;
  const double gamma = law.gamma();
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    ExpansionRow row;
    row.alpha = alphas[k];
    row.beta = betas[k];
    if (!(row.beta > 0.0 && row.beta <= row.alpha && row.alpha < 1.0))
      throw std::invalid_argument("expansion check needs 0 < beta <= alpha < 1");
    row.lhs = std::abs(law.log_quantile(row.beta) - law.log_quantile(row.alpha) +
                       gamma * std::log(row.beta / row.alpha));
    row.driver = std::log(row.alpha / row.beta) * std::abs(law.epsilon(law.quantile(row.alpha)));
    if (row.driver > 0.0)
      row.ratio = row.lhs / row.driver;
    else
      row.ratio = row.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    rows.push_back(row);
  }
  return rows;
}

} // namespace fextq
