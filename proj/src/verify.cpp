// SPDX-License-Identifier: Apache-2.0
#include "scf/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "scf/bench.hpp"
#include "scf/kscf.hpp"
#include "scf/mscf.hpp"
#include "scf/oracle.hpp"
#include "scf/spectral.hpp"
#include "scf/synthetic.hpp"

namespace scf::verify {

namespace {

using clock = std::chrono::steady_clock;

double seconds_since(clock::time_point start) {
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

/// Accumulates a worst-case quantity over instances and keeps the first failure.
struct Worst {
  Check check;
  std::size_t failures = 0;
  std::size_t count = 0;

  Worst(std::string name, double bound) {
    check.name = std::move(name);
    check.bound = bound;
  }
  void add(double value, const std::string& replay) {
    ++count;
    check.worst = std::max(check.worst, value);
    if (!(value <= check.bound)) {
      ++failures;
      if (check.replay.empty()) check.replay = replay;
    }
  }
  Check finish() {
    check.passed = failures == 0 && count > 0;
    check.detail = std::to_string(count - failures) + "/" + std::to_string(count) + " within bound";
    return check;
  }
};

double relative_gap(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

SolverConfig tight(double C) {
  SolverConfig cfg;
  cfg.C = C;
  cfg.eps = 1e-8;
  cfg.max_iter = 1000000;
  return cfg;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t k) { return seed * 1000003ULL + k; }

}  // namespace

bool SuiteReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

SuiteReport solver_suite(std::uint64_t seed, std::size_t instances) {
  const auto start = clock::now();
  Worst dw("solver: |dw|_inf / (1 + |w|_inf)", 1e-4);
  Worst gap("solver: relative objective gap", 1e-6);
  for (std::size_t k = 0; k < instances; ++k) {
    const double C = k % 2 == 0 ? 1.0 : 1e4;
    const auto inst = synthetic::random_instance(8, 8, 1, 0.3, 0.7, C, mix(seed, k));
    const SupportFilter fast = solve_scf(inst.x[0], inst.y, tight(C));
    const auto dense = oracle::solve_dense_qp(oracle::make_problem(inst.x, inst.y, C));
    const RealGrid w = spectral::idft2(fast.w_hat);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      diff = std::max(diff, std::abs(w[i] - dense.w(static_cast<Eigen::Index>(i))));
      scale = std::max(scale, std::abs(dense.w(static_cast<Eigen::Index>(i))));
    }
    const double objective = scf_objective(spectral::dft2(inst.x[0]), fast, inst.y, C);
    const std::string replay = synthetic::describe(inst);
    dw.add(diff / (1.0 + scale), replay);
    gap.add(relative_gap(objective, dense.objective), replay);
  }
  SuiteReport report{"solver", {dw.finish(), gap.finish()}, 0.0};
  report.seconds = seconds_since(start);
  Check runtime{"solver: suite runtime (s)", report.seconds < 30.0, report.seconds, 30.0,
                std::to_string(instances) + " instances", ""};
  report.checks.push_back(runtime);
  return report;
}

SuiteReport multichannel_suite(std::uint64_t seed, std::size_t instances) {
  const auto start = clock::now();
  Worst dw("multichannel: |dw|_inf / (1 + |w|_inf)", 1e-4);
  Worst gap("multichannel: relative objective gap", 1e-6);
  Worst sm("multichannel: Sherman-Morrison residual", 1e-10);
  for (std::size_t k = 0; k < instances; ++k) {
    const double C = k % 2 == 0 ? 1.0 : 1e4;
    const std::size_t L = 2 + k % 2;
    const auto inst = synthetic::random_instance(6, 6, L, 0.3, 0.7, C, mix(seed, k));
    const MultiFilter fast = solve_mscf(inst.x, inst.y, tight(C));
    const auto dense = oracle::solve_dense_qp(oracle::make_problem(inst.x, inst.y, C));
    const std::size_t n = inst.x.rows() * inst.x.cols();
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      const RealGrid w = spectral::idft2(fast.w_hat[l]);
      for (std::size_t i = 0; i < n; ++i) {
        const double ref = dense.w(static_cast<Eigen::Index>(l * n + i));
        diff = std::max(diff, std::abs(w[i] - ref));
        scale = std::max(scale, std::abs(ref));
      }
    }
    const auto x_hat = dft2_stack(inst.x);
    const double objective = mscf_objective(x_hat, fast, inst.y, C);

    // Closed-form update at the converged point against its defining system.
    const RealGrid f = multichannel_response(x_hat, fast);
    RealGrid d(f.rows(), f.cols());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = inst.y[i] != 0.0 ? inst.y[i] * f[i] - 1.0 : 0.0;
    const RealGrid e = update_slack(d);
    const RealGrid q = imputed_target(inst.y, e, f);
    const double b = update_bias(q);
    RealGrid p(q.rows(), q.cols());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = q[i] - b;
    const ComplexGrid p_hat = spectral::dft2(p);
    const auto w_next = update_filter_mc(x_hat, p_hat, C);

    const std::string replay = synthetic::describe(inst);
    dw.add(diff / (1.0 + scale), replay);
    gap.add(relative_gap(objective, dense.objective), replay);
    sm.add(sherman_morrison_residual(x_hat, p_hat, w_next, C), replay);
  }
  SuiteReport report{"multichannel", {dw.finish(), gap.finish(), sm.finish()}, 0.0};
  report.seconds = seconds_since(start);
  return report;
}

SuiteReport kernel_suite(std::uint64_t seed, std::size_t instances) {
  const auto start = clock::now();
  Worst circulant("kernel: circulant structure", 1e-10);
  Worst first_row("kernel: first row vs kernel_correlation", 1e-10);
  Worst gap("kernel: relative dual objective gap", 1e-6);
  for (std::size_t k = 0; k < instances; ++k) {
    const double C = (k / 2) % 2 == 0 ? 1.0 : 1e4;
    const KernelSpec spec = k % 2 == 0 ? KernelSpec::gaussian(0.2) : KernelSpec::polynomial(2);
    auto inst = synthetic::random_instance(5, 5, 1, 0.3, 0.7, C, mix(seed, k));
    if (spec.kind == KernelSpec::Kind::gaussian) {
      // Unit-variance data puts every off-diagonal entry below 1e-20 at this width.
      for (auto& channel : inst.x) {
        for (auto& v : channel) v *= 0.1;
      }
    }
    const auto K = oracle::explicit_kernel_matrix(inst.x, spec);
    const std::size_t rows = inst.x.rows();
    const std::size_t cols = inst.x.cols();
    const std::size_t n = rows * cols;
    double circ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t dr = (j / cols + rows - i / cols) % rows;
        const std::size_t dc = (j % cols + cols - i % cols) % cols;
        circ = std::max(circ, std::abs(K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                       K(0, static_cast<Eigen::Index>(dr * cols + dc))));
      }
    }
    const RealGrid corr = kernel_correlation(inst.x, inst.x, spec);
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row = std::max(row, std::abs(K(0, static_cast<Eigen::Index>(j)) - corr[j]));

    const DualFilter fast = solve_kscf(inst.x, inst.y, spec, tight(C));
    const auto dense = oracle::solve_dense_kernel_qp(oracle::make_kernel_problem(inst.x, inst.y, spec, C));
    const double objective = kscf_objective(spectral::dft2(corr), fast.alpha_hat, fast.bias, inst.y, C);

    const std::string replay = "kernel=" + to_string(spec.kind) + "\n" + synthetic::describe(inst);
    circulant.add(circ, replay);
    first_row.add(row, replay);
    gap.add(relative_gap(objective, dense.objective), replay);
  }
  SuiteReport report{"kernel", {circulant.finish(), first_row.finish(), gap.finish()}, 0.0};
  report.seconds = seconds_since(start);
  return report;
}

SuiteReport convergence_suite(std::uint64_t seed, std::size_t instances) {
  const auto start = clock::now();
  double rho_worst = 0.0;
  std::string rho_replay;
  Worst cond1("convergence: slack contraction excess", 0.0);
  Worst cond3("convergence: M-norm iterate contraction excess", 0.0);
  Worst terminal("convergence: stopping residual / eps at exit", 1.0);
  Worst fixed("convergence: fixed point of the slack map", 1e-8);
  for (std::size_t k = 0; k < instances; ++k) {
    const auto inst = synthetic::full_label_instance(6, 6, 1.0, mix(seed, k));
    SolverConfig cfg = tight(1.0);
    cfg.anderson = 0;
    SolveTrace trace;
    const SupportFilter fast = solve_scf(inst.x[0], inst.y, cfg, nullptr, &trace);

    const auto problem = oracle::make_problem(inst.x, inst.y, 1.0);
    const auto dense = oracle::solve_dense_qp(problem);
    const auto q = oracle::rate_quantities(problem);
    const Eigen::Index n = static_cast<Eigen::Index>(inst.y.size());
    oracle::Vector w_star(n + 1);
    w_star << dense.w, dense.b;
    const oracle::Vector e_star = oracle::slack_from_iterate(q, w_star);

    std::vector<oracle::Vector> slack_trace;
    for (const auto& e : trace.slack) slack_trace.push_back(Eigen::Map<const oracle::Vector>(e.data(), n));
    std::vector<oracle::Vector> iterate_trace;
    for (const auto& w : trace.iterates) iterate_trace.push_back(Eigen::Map<const oracle::Vector>(w.data(), n + 1));
    const auto rate = oracle::verify_qlinear(slack_trace, e_star, iterate_trace, w_star, q, 1e-8);

    const ComplexGrid x_hat = spectral::dft2(inst.x[0]);
    const RealGrid e = update_slack(margin_deficit(x_hat, fast, inst.y));
    const double exit_residual = residuals(x_hat, fast, inst.y, e, cfg.C).max();
    const oracle::Vector round_trip = oracle::slack_from_iterate(q, oracle::iterate_from_slack(q, e_star));

    const std::string replay = synthetic::describe(inst);
    if (!(q.rho < 1.0) && rho_replay.empty()) rho_replay = replay;
    rho_worst = std::max(rho_worst, q.rho);
    cond1.add(rate.worst_slack_excess, replay);
    cond3.add(rate.worst_iterate_excess, replay);
    terminal.add(fast.report.converged ? std::max(fast.report.residual, exit_residual) / cfg.eps : INFINITY, replay);
    fixed.add((round_trip - e_star).lpNorm<Eigen::Infinity>(), replay);
  }
  SuiteReport report{"convergence",
                     {{"convergence: spectral radius rho(T) < 1", rho_worst < 1.0, rho_worst, 1.0,
                       "largest rho over " + std::to_string(instances) + " instances", rho_replay},
                      cond1.finish(), cond3.finish(), terminal.finish(), fixed.finish()},
                     0.0};
  report.seconds = seconds_since(start);
  return report;
}

SuiteReport metrics_suite() {
  const auto start = clock::now();
  SuiteReport report{"metrics", {}, 0.0};
  auto exact = [&](const std::string& name, double got, double want) {
    report.checks.push_back({name, got == want, std::abs(got - want), 0.0,
                             "got " + fmt(got) + " want " + fmt(want), ""});
  };
  const BBox truth{0, 0, 10, 10};
  exact("metrics: center_error 3-4-5", bench::center_error({0, 0, 2, 2}, {3, 4, 2, 2}), 5.0);
  exact("metrics: iou identical", bench::iou(truth, truth), 1.0);
  exact("metrics: iou adjacency 1/3", bench::iou({0, 0, 1, 1}, {0.5, 0, 1, 1}), 1.0 / 3.0);
  exact("metrics: iou disjoint", bench::iou({0, 0, 1, 1}, {2, 0, 1, 1}), 0.0);
  exact("metrics: iou touching edge", bench::iou({0, 0, 1, 1}, {1, 0, 1, 1}), 0.0);

  // Center errors 0, 5, 25, 60 and overlaps 1, 1/3, 0, 0.
  const std::vector<BBox> gt(4, truth);
  const std::vector<BBox> pred{{0, 0, 10, 10}, {5, 0, 10, 10}, {15, 20, 10, 10}, {60, 0, 10, 10}};
  const auto precision = bench::precision_curve(pred, gt);
  bool p_ok = precision.size() == bench::kPrecisionSamples;
  for (std::size_t t = 0; p_ok && t < precision.size(); ++t) {
    const double want = t < 5 ? 0.25 : (t < 25 ? 0.5 : 0.75);
    p_ok = precision[t] == want;
  }
  report.checks.push_back({"metrics: precision curve fixture", p_ok, 0.0, 0.0, "51 samples, steps at 5 and 25", ""});
  const auto success = bench::success_curve(pred, gt);
  bool s_ok = success.size() == bench::kSuccessSamples;
  for (std::size_t k = 0; s_ok && k < success.size(); ++k) {
    const double want = k == 0 ? 1.0 : (k <= 6 ? 0.5 : 0.25);
    s_ok = success[k] == want;
  }
  report.checks.push_back({"metrics: success curve fixture", s_ok, 0.0, 0.0, "21 samples, steps at 0.05 and 0.35", ""});
  bench::OPEResult scored;
  scored.boxes = pred;
  bench::score(scored, gt);
  exact("metrics: DP@20 fixture", scored.dp20, 0.5);
  exact("metrics: AUC fixture", scored.auc, 7.5 / 21.0);

  bench::OPEResult perfect;
  perfect.boxes = gt;
  bench::score(perfect, gt);
  exact("metrics: perfect DP@20", perfect.dp20, 1.0);
  exact("metrics: perfect AUC", perfect.auc, 1.0);

  bench::OPEResult a = perfect;
  a.attributes = {"IV"};
  a.fps = 10.0;
  bench::OPEResult b = scored;
  b.attributes = {"IV", "SV"};
  b.fps = 30.0;
  const auto agg = bench::aggregate({a, b});
  exact("metrics: aggregate mean DP@20", agg.overall.dp20, 0.75);
  exact("metrics: aggregate mean FPS", agg.overall.fps, 20.0);
  exact("metrics: aggregate IV subset DP@20", agg.per_attribute.at("IV").dp20, 0.75);
  exact("metrics: aggregate SV subset DP@20", agg.per_attribute.at("SV").dp20, 0.5);
  report.checks.push_back({"metrics: absent attribute omitted", agg.per_attribute.count("OCC") == 0, 0.0, 0.0,
                           std::to_string(agg.per_attribute.size()) + " subsets", ""});
  report.seconds = seconds_since(start);
  return report;
}

namespace {

struct Budgeted {
  double seconds;
  std::uint64_t transforms;
};

Budgeted run_budget(const synthetic::Instance& inst, Variant variant, std::size_t iterations) {
  SolverConfig cfg;
  cfg.C = inst.C;
  cfg.eps = 1e-300;
  cfg.max_iter = iterations;
  const KernelSpec spec = KernelSpec::gaussian(0.2);
  const std::uint64_t before = spectral::transform_count();
  const auto start = clock::now();
  switch (variant) {
    case Variant::scf:
      (void)solve_scf(inst.x[0], inst.y, cfg);
      break;
    case Variant::mscf:
      (void)solve_mscf(inst.x, inst.y, cfg);
      break;
    case Variant::kscf:
    case Variant::skscf:
      (void)solve_kscf(inst.x, inst.y, spec, cfg);
      break;
  }
  return {seconds_since(start), spectral::transform_count() - before};
}

}  // namespace

std::vector<SpeedRow> bench_speed(const std::vector<std::size_t>& sizes, Variant variant, std::uint64_t seed,
                                  std::size_t repeats) {
  constexpr std::size_t kShort = 10;
  constexpr std::size_t kLong = 210;
  std::vector<synthetic::Instance> instances;
  for (std::size_t n : sizes) {
    if (n < 4) throw ConfigError("bench-speed: sizes must be at least 4");
    const std::size_t channels = variant == Variant::scf ? 1 : 4;
    instances.push_back(
        synthetic::random_instance(n, n, channels, 0.3, 0.7, 1e4, mix(seed, n), 50.0 / (n * n / 4.0)));
    (void)run_budget(instances.back(), variant, 2);
  }
  // Sizes are interleaved within each round so slow periods of the host hit all of them.
  std::vector<double> lo_best(sizes.size(), INFINITY);
  std::vector<double> hi_best(sizes.size(), INFINITY);
  std::vector<std::uint64_t> transforms(sizes.size(), 0);
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const Budgeted lo = run_budget(instances[i], variant, kShort);
      const Budgeted hi = run_budget(instances[i], variant, kLong);
      lo_best[i] = std::min(lo_best[i], lo.seconds);
      hi_best[i] = std::min(hi_best[i], hi.seconds);
      transforms[i] = hi.transforms - lo.transforms;
    }
  }
  std::vector<SpeedRow> rows;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    SpeedRow row;
    row.n = sizes[i];
    row.seconds_per_iteration = (hi_best[i] - lo_best[i]) / static_cast<double>(kLong - kShort);
    row.transforms_per_iteration = static_cast<double>(transforms[i]) / static_cast<double>(kLong - kShort);
    if (!rows.empty()) row.ratio = row.seconds_per_iteration / rows.back().seconds_per_iteration;
    rows.push_back(row);
  }
  return rows;
}

SuiteReport complexity_suite(std::uint64_t seed) {
  const auto start = clock::now();
  const auto rows = bench_speed({32, 64, 128}, Variant::scf, seed, 15);
  SuiteReport report{"complexity", {}, 0.0};
  double lo = INFINITY;
  double hi = 0.0;
  std::ostringstream detail;
  for (const auto& row : rows) {
    detail << "n=" << row.n << " " << fmt(row.seconds_per_iteration) << "s";
    if (row.ratio > 0.0) {
      detail << " (x" << fmt(row.ratio) << ")";
      lo = std::min(lo, row.ratio);
      hi = std::max(hi, row.ratio);
    }
    detail << "; ";
  }
  report.checks.push_back({"complexity: doubling ratio in [3.5, 6.0]", lo >= 3.5 && hi <= 6.0,
                           hi, 6.0, detail.str() + "min ratio " + fmt(lo), ""});
  bool two = true;
  double worst = 0.0;
  for (const auto& row : rows) {
    two = two && row.transforms_per_iteration == 2.0;
    worst = std::max(worst, std::abs(row.transforms_per_iteration - 2.0));
  }
  report.checks.push_back({"complexity: transforms per iteration == 2", two, worst, 0.0, "counter difference", ""});
  report.seconds = seconds_since(start);
  return report;
}

SuiteReport tracking_suite(std::uint64_t seed) {
  const auto start = clock::now();
  SuiteReport report{"tracking", {}, 0.0};

  // Cyclic shifts of a periodic texture, searched with the unwindowed raw preset.
  {
    constexpr long P = 48;
    std::size_t exact = 0;
    std::size_t total = 0;
    std::string replay;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Image base = synthetic::texture(P, P, 1, mix(seed, 100 + s));
      std::mt19937_64 rng(mix(seed, s));
      std::uniform_int_distribution<long> step(-P / 4, P / 4);
      TrackerConfig cfg = TrackerConfig::preset(Variant::scf);
      cfg.window = false;
      scf::Tracker tracker(cfg);
      tracker.init(synthetic::tile(base, 3), {P + P / 4.0, P + P / 4.0, P / 2.0, P / 2.0});
      long sr = 0;
      long sc = 0;
      for (int k = 0; k < 20; ++k) {
        long dr = step(rng);
        long dc = step(rng);
        if (std::abs(sr + dr) > P / 2) dr = -dr;
        if (std::abs(sc + dc) > P / 2) dc = -dc;
        sr += dr;
        sc += dc;
        const StepResult r = tracker.step(synthetic::tile(synthetic::cyclic_shift(base, sr, sc), 3));
        ++total;
        if (r.dr == dr && r.dc == dc) {
          ++exact;
        } else if (replay.empty()) {
          replay = "texture seed " + std::to_string(mix(seed, 100 + s)) + " frame " + std::to_string(k) + " true (" +
                   std::to_string(dr) + "," + std::to_string(dc) + ") got (" + std::to_string(r.dr) + "," +
                   std::to_string(r.dc) + ")";
        }
      }
    }
    report.checks.push_back({"tracking: cyclic shift recovered exactly", exact == total,
                             static_cast<double>(total - exact), 0.0,
                             std::to_string(exact) + "/" + std::to_string(total) + " frames", replay});
  }

  // 1.5% zoom per frame; a frame counts when the chosen factor is within one pool step.
  {
    constexpr double kZoom = 1.015;
    constexpr std::size_t S = 240;
    std::size_t good = 0;
    std::size_t total = 0;
    std::string replay;
    for (std::uint64_t s = 0; s < 3; ++s) {
      const Image base = synthetic::texture(S, S, 3, mix(seed, 200 + s));
      const TrackerConfig cfg = TrackerConfig::preset(Variant::skscf);
      scf::Tracker tracker(cfg);
      tracker.init(base, {S / 2.0 - 30.0, S / 2.0 - 30.0, 60.0, 60.0});
      const auto& pool = cfg.scale_pool;
      const auto truth_it = std::min_element(pool.begin(), pool.end(), [&](double a, double b) {
        return std::abs(a - kZoom) < std::abs(b - kZoom);
      });
      const long truth_index = truth_it - pool.begin();
      for (int k = 1; k <= 10; ++k) {
        const StepResult r = tracker.step(synthetic::zoom_about_center(base, std::pow(kZoom, k)));
        const long chosen = std::find(pool.begin(), pool.end(), r.scale_factor) - pool.begin();
        ++total;
        if (std::abs(chosen - truth_index) <= 1) {
          ++good;
        } else if (replay.empty()) {
          replay = "texture seed " + std::to_string(mix(seed, 200 + s)) + " frame " + std::to_string(k) +
                   " chose " + fmt(r.scale_factor);
        }
      }
    }
    const double rate = static_cast<double>(good) / static_cast<double>(total);
    report.checks.push_back({"tracking: zoom factor within one pool step (rate)", rate >= 0.9, rate, 0.9,
                             std::to_string(good) + "/" + std::to_string(total) + " frames", replay});
  }

  // Perfect predictions on a short synthetic sequence.
  {
    std::vector<BBox> truth;
    for (int k = 0; k < 12; ++k) truth.push_back({10.0 + 1.5 * k, 20.0 - k, 30.0 + k, 25.0});
    bench::OPEResult r;
    r.boxes = truth;
    bench::score(r, truth);
    report.checks.push_back({"tracking: perfect fixture DP@20 == 1 and AUC == 1", r.dp20 == 1.0 && r.auc == 1.0,
                             std::max(1.0 - r.dp20, 1.0 - r.auc), 0.0,
                             "DP " + fmt(r.dp20) + " AUC " + fmt(r.auc), ""});
  }
  report.seconds = seconds_since(start);
  return report;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"solver", "kernel", "convergence", "metrics", "all"};
  return names;
}

std::vector<SuiteReport> run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "solver") return {solver_suite(seed), multichannel_suite(seed)};
  if (name == "kernel") return {kernel_suite(seed)};
  if (name == "convergence") return {convergence_suite(seed)};
  if (name == "metrics") return {metrics_suite()};
  if (name == "all") {
    return {solver_suite(seed), multichannel_suite(seed), kernel_suite(seed), convergence_suite(seed),
            metrics_suite()};
  }
  throw ConfigError("unknown suite '" + name + "' (expected solver, kernel, convergence, metrics or all)");
}

std::string format(const SuiteReport& report) {
  std::ostringstream os;
  for (const auto& c : report.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": worst " << fmt(c.worst) << " bound " << fmt(c.bound)
       << " (" << c.detail << ")\n";
    if (!c.passed && !c.replay.empty()) os << "  replay:\n" << c.replay << "\n";
  }
  return os.str();
}

}  // namespace scf::verify
