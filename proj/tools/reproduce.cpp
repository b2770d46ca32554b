#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>

#include "commands.hpp"
#include "metrobound/dicke_bounds.hpp"
#include "metrobound/error.hpp"
#include "metrobound/manifest.hpp"
#include "metrobound/parallel.hpp"
#include "metrobound/qfi.hpp"

namespace metrobound::cli {

namespace {

struct Panel {
  std::string suffix;
  Table table;
};

struct Output {
  std::vector<Panel> panels;
  json parameters = json::object();
  json tolerances = json::object();
  json checks = json::object();
};

class Progress {
 public:
  Progress(std::string label, std::size_t total) : label_(std::move(label)), total_(total) {}

  void tick() {
    const std::size_t d = ++done_;
    std::lock_guard<std::mutex> lock(m_);
    std::cerr << label_ << ": " << d << "/" << total_ << "\n";
  }

 private:
  std::string label_;
  std::size_t total_;
  std::atomic<std::size_t> done_{0};
  std::mutex m_;
};

template <class T, class F>
std::vector<T> sweep(const std::string& label, std::size_t n, const RunContext& ctx, F f) {
  std::vector<T> out(n);
  Progress progress(label, n);
  parallel_for(
      n,
      [&](std::size_t i) {
        out[i] = f(i);
        progress.tick();
      },
      ctx.threads);
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v = linspace(std::log(a), std::log(b), n);
  for (double& x : v) x = std::exp(x);
  return v;
}

json numbers_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

LegendreOptions serial_options(const RunContext& ctx) {
  LegendreOptions o;
  o.seed = ctx.seed;
  o.threads = 1;
  return o;
}

std::optional<double> try_bound(const std::function<double()>& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) return std::nullopt;
    throw;
  }
}

json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

DickeMoments experiment_moments(const json& manifest) {
  const json& d = manifest["experiment_inputs"]["dicke"];
  DickeMoments m;
  m.N = d["N"];
  m.jx2 = d["jx2"];
  m.jx4 = d["jx4"];
  m.jy2 = d["jy2"];
  m.jy4 = d["jy4"];
  return with_bounded_fourth_moment(m);
}

double shell(int N) { return 0.5 * N * (0.5 * N + 1.0); }

Output vd_evolution(const RunContext&, const json&) {
  const int N = 6;
  const double lambda = 1.0;
  const QuantumState s = squeezing_ground_state(N, lambda, 1).state;
  const DickeMoments m = moments_from_state(s).moments;
  Output o;
  o.parameters = {{"n", N}, {"lambda", lambda}, {"hamiltonian", "Jx^2 - lambda Jy"}};

  Table a{"precision along the evolution exp(-i theta Jz) of the ground state, N = 6",
          {{"theta", "rad"},
           {"formula_per_n", "(Delta theta)^-2 / N"},
           {"simulated_per_n", "(Delta theta)^-2 / N"},
           {"squared_difference", "(1/N)^2"}},
          {}};
  double peak = 0.0;
  std::vector<std::array<double, 3>> pts;
  for (int i = 1; i < 180; ++i) {
    const double t = std::numbers::pi * i / 180.0;
    const double f = precision_vs_theta(m, t) / N;
    const double sim = simulated_precision(s, t) / N;
    pts.push_back({t, f, sim});
    peak = std::max(peak, sim);
  }
  double worst = 0.0;
  for (const auto& [t, f, sim] : pts) {
    a.add({num(t), num(f), num(sim), num((f - sim) * (f - sim))});
    if (sim > 0.05 * peak) worst = std::max(worst, std::abs(f - sim) / sim);
  }
  o.panels.push_back({"_a", a});

  Table b{"parity of the evolved moments",
          {{"theta", "rad"}, {"jx2_plus", ""}, {"jx2_minus", ""}, {"jx4_plus", ""}, {"jx4_minus", ""}},
          {}};
  double parity = 0.0;
  for (double t : linspace(0.0, std::numbers::pi, 61)) {
    const double p2 = evolved_jx_moment(s, 2, t), m2 = evolved_jx_moment(s, 2, -t);
    const double p4 = evolved_jx_moment(s, 4, t), m4 = evolved_jx_moment(s, 4, -t);
    parity = std::max({parity, std::abs(p2 - m2), std::abs(p4 - m4)});
    b.add({num(t), num(p2), num(m2), num(p4), num(m4)});
  }
  o.panels.push_back({"_b", b});
  o.checks = {{"max_relative_difference_above_5pct_of_peak", num(worst)}, {"max_parity_violation", num(parity)}};
  return o;
}

Output vd_comparing(const RunContext& ctx, const json&) {
  const int N = 20;
  Output o;
  const std::vector<double> lpn = logspace(1e-3, 10.0, 41);
  const std::vector<double> temps = linspace(0.0, 5.0, 26);
  o.parameters = {{"n", N}, {"lambda_per_n", numbers_json(lpn)}, {"temperatures", numbers_json(temps)}};

  struct Row {
    double polarization, qfi, bound;
  };
  const auto gs = sweep<Row>("ground states", lpn.size(), ctx, [&](std::size_t i) {
    const QuantumState s = squeezing_ground_state(N, lpn[i] * N, 1).state;
    const double my = s.expect(collective_operator(Axis::Y, s.basis()));
    return Row{my / (0.5 * N), qfi(s, collective_operator(Axis::Z, s.basis())),
               optimal_precision(moments_from_state(s).moments).precision};
  });
  const auto th = sweep<Row>("thermal states", temps.size(), ctx, [&](std::size_t i) {
    const QuantumState s = thermal_dicke(N, temps[i]);
    return Row{0.0, qfi(s, collective_operator(Axis::Z, s.basis())),
               optimal_precision(moments_from_state(s).moments).precision};
  });
  Table a{"ground states of Jx^2 - lambda Jy, N = 20",
          {{"lambda", ""}, {"polarization", "<Jy>/(N/2)"}, {"qfi_per_n", "F_Q / N"}, {"bound_per_n", "(Delta theta)^-2 / N"}},
          {}};
  Table b{"thermal mixtures of x-Dicke states, N = 20",
          {{"temperature", ""}, {"qfi_per_n", "F_Q / N"}, {"bound_per_n", "(Delta theta)^-2 / N"}},
          {}};
  double excess = -1e300;
  for (std::size_t i = 0; i < lpn.size(); ++i) {
    a.add({num(lpn[i] * N), num(gs[i].polarization), num(gs[i].qfi / N), num(gs[i].bound / N)});
    excess = std::max(excess, gs[i].bound - gs[i].qfi);
  }
  for (std::size_t i = 0; i < temps.size(); ++i) {
    b.add({num(temps[i]), num(th[i].qfi / N), num(th[i].bound / N)});
    excess = std::max(excess, th[i].bound - th[i].qfi);
  }
  o.panels.push_back({"_a", a});
  o.panels.push_back({"_b", b});
  o.checks = {{"max_bound_minus_qfi", num(excess)}, {"cramer_rao_dominance", excess <= 1e-8}};
  return o;
}

Output vd_precision_theta(const RunContext&, const json& manifest) {
  const DickeMoments m = experiment_moments(manifest);
  Output o;
  o.parameters = manifest["experiment_inputs"]["dicke"];
  o.tolerances = manifest["criteria"]["2"];
  Table t{"precision as a function of theta for the experimental moments",
          {{"theta", "rad"}, {"precision_per_n", "(Delta theta)^-2 / N"}, {"shot_noise_per_n", "(Delta theta)^-2 / N"}},
          {}};
  for (int i = 1; i <= 300; ++i) {
    const double th = 1e-4 * i;
    t.add({num(th), num(precision_vs_theta(m, th) / m.N), 1.0});
  }
  o.panels.push_back({"", t});
  const OptimalPrecision op = optimal_precision(m);
  o.checks = {{"theta_opt", num(op.theta_opt)}, {"optimal_precision_per_n", num(op.precision / m.N)}};
  return o;
}

Output vd_experimental(const RunContext& ctx, const json& manifest) {
  const DickeMoments m = experiment_moments(manifest);
  const int N = m.N;
  const double J = shell(N);
  const std::vector<double> ys = linspace(0.30, 0.48, 37);
  const std::vector<double> xs = linspace(0.0, 400.0, 41);
  Output o;
  o.parameters = {{"n", N}, {"beta", 3.0}, {"jy2_over_shell", numbers_json(ys)}, {"jx2", numbers_json(xs)}};
  o.tolerances = manifest["criteria"]["2"];

  auto eval = [&](double jx2, double jy2) {
    return try_bound([&] { return second_moment_bound(jx2, jy2, N, 3.0); });
  };
  const auto grid = sweep<std::optional<double>>("second-moment grid", ys.size() * xs.size(), ctx, [&](std::size_t i) {
    return eval(xs[i % xs.size()], ys[i / xs.size()] * J);
  });
  Table a{"second-moment precision bound over (<Jy^2>, <Jx^2>), N = 7900",
          {{"jy2_over_shell", "<Jy^2> / (N/2 (N/2 + 1))"}, {"jx2", ""}, {"bound_per_n", "(Delta theta)^-2 / N"},
           {"entanglement_depth", "particles"}},
          {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& v = grid[i];
    a.add({num(ys[i / xs.size()]), num(xs[i % xs.size()]), opt(v ? std::optional<double>(*v / N) : std::nullopt),
           v ? json(entanglement_depth(*v, N)) : json(nullptr)});
  }
  o.panels.push_back({"_a", a});

  Table b{"cross section at the measured <Jy^2>, N = 7900",
          {{"jx2", ""}, {"bound_per_n", "(Delta theta)^-2 / N"}, {"entanglement_depth", "particles"}},
          {}};
  for (double x : linspace(0.0, 400.0, 201)) {
    const auto v = eval(x, m.jy2);
    b.add({num(x), opt(v ? std::optional<double>(*v / N) : std::nullopt), v ? json(entanglement_depth(*v, N)) : json(nullptr)});
  }
  o.panels.push_back({"_b", b});
  const double at = second_moment_bound(m.jx2, m.jy2, N) / N;
  o.checks = {{"measured_point_bound_per_n", num(at)},
              {"measured_point_entanglement_depth", entanglement_depth(at * N, N)}};
  return o;
}

Output lt_fidelities(const RunContext& ctx, const json&) {
  Output o;
  const std::vector<double> fa = linspace(0.0, 1.0, 41);
  const std::vector<double> fb = linspace(0.0, 1.0, 21);
  const std::vector<int> nb = {4, 40};
  o.parameters = {{"ghz_n", 4}, {"dicke_n", nb}, {"ghz_fidelities", numbers_json(fa)}, {"dicke_fidelities", numbers_json(fb)}};
  const LegendreOptions lo = serial_options(ctx);
  const auto ghz = sweep<double>("GHZ fidelity", fa.size(), ctx,
                                 [&](std::size_t i) { return ghz_fidelity_bound_numeric(fa[i], 4, lo).bound; });
  Table a{"QFI bound from the GHZ fidelity, N = 4",
          {{"fidelity", ""}, {"closed_form_per_n2", "F_Q / N^2"}, {"numeric_per_n2", "F_Q / N^2"}},
          {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const double c = ghz_fidelity_bound(fa[i], 4);
    worst = std::max(worst, std::abs(c - ghz[i]));
    a.add({num(fa[i]), num(c / 16.0), num(ghz[i] / 16.0)});
  }
  o.panels.push_back({"_a", a});

  const auto dk = sweep<double>("Dicke fidelity", fb.size() * nb.size(), ctx, [&](std::size_t i) {
    const int N = nb[i / fb.size()];
    return dicke_fidelity_bound(fb[i % fb.size()], N, lo).bound / (double(N) * N);
  });
  Table b{"QFI bound from the Dicke fidelity",
          {{"fidelity", ""}, {"bound_per_n2_n4", "F_Q / N^2"}, {"bound_per_n2_n40", "F_Q / N^2"}},
          {}};
  for (std::size_t i = 0; i < fb.size(); ++i) b.add({num(fb[i]), num(dk[i]), num(dk[fb.size() + i])});
  o.panels.push_back({"_b", b});
  o.checks = {{"ghz_max_numeric_minus_closed_form", num(worst)}};
  return o;
}

Output lt_nrange(const RunContext& ctx, const json&) {
  const std::vector<int> ns = {50, 100, 200, 300, 400, 500};
  const std::vector<double> fs = {0.2, 0.5, 0.7};
  Output o;
  o.parameters = {{"n_values", ns}, {"fidelities", fs}};
  const LegendreOptions lo = serial_options(ctx);
  const auto v = sweep<double>("Dicke fidelity N range", ns.size() * fs.size(), ctx, [&](std::size_t i) {
    const int N = ns[i / fs.size()];
    return dicke_fidelity_bound(fs[i % fs.size()], N, lo).bound / (double(N) * N);
  });
  Table t{"QFI bound from the Dicke fidelity normalized by N^2",
          {{"n", "particles"}, {"bound_per_n2_f0.2", "F_Q / N^2"}, {"bound_per_n2_f0.5", "F_Q / N^2"},
           {"bound_per_n2_f0.7", "F_Q / N^2"}},
          {}};
  json spread = json::object();
  for (std::size_t k = 0; k < fs.size(); ++k) {
    double lo_v = 1e300, hi_v = 0.0;
    for (std::size_t n = 0; n < ns.size(); ++n) {
      lo_v = std::min(lo_v, v[n * fs.size() + k]);
      hi_v = std::max(hi_v, v[n * fs.size() + k]);
    }
    spread[fmt12(fs[k])] = num(lo_v > 0.0 ? hi_v / lo_v : 0.0);
  }
  for (std::size_t n = 0; n < ns.size(); ++n) {
    t.add({ns[n], num(v[n * 3]), num(v[n * 3 + 1]), num(v[n * 3 + 2])});
  }
  o.panels.push_back({"", t});
  o.checks = {{"max_over_min_per_fidelity", spread}};
  return o;
}

Output lt_spsq2d(const RunContext& ctx, const json&) {
  const int N = 4;
  const std::vector<double> my = linspace(0.0, 2.0, 21);
  const std::vector<double> vx = linspace(0.0, 4.0, 21);
  Output o;
  o.parameters = {{"n", N}, {"mean_jy", numbers_json(my)}, {"var_jx", numbers_json(vx)}};
  const LegendreOptions lo = serial_options(ctx);
  const auto grid = sweep<std::optional<double>>("spin-squeezing grid", my.size() * vx.size(), ctx, [&](std::size_t i) {
    const double y = my[i / vx.size()], x = vx[i % vx.size()];
    return try_bound([&] { return spin_squeezing_bound(y, x, N, true, {}, lo).bound; });
  });
  Table a{"QFI bound from <Jy> and Var(Jx), N = 4",
          {{"mean_jy", ""}, {"var_jx", ""}, {"feasible", "0/1"}, {"bound_per_n", "F_Q / N"},
           {"pezze_smerzi_per_n", "F_Q / N"}},
          {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = my[i / vx.size()], x = vx[i % vx.size()];
    a.add({num(y), num(x), grid[i].has_value(), grid[i] ? num(*grid[i] / N) : json(nullptr),
           grid[i] && x > 0.0 ? num(pezze_smerzi_bound(y, x) / N) : json(nullptr)});
  }
  o.panels.push_back({"", a});

  Table b{"physical boundary from ground states of Jx^2 - lambda Jy, N = 4",
          {{"lambda", ""}, {"mean_jy", ""}, {"var_jx", ""}},
          {}};
  for (double l : logspace(1e-3, 1e3, 61)) {
    const QuantumState s = squeezing_ground_state(N, l, 1).state;
    const SpinTriple j = collective_operators(s.basis());
    b.add({num(l), num(s.expect(j.y)), num(s.variance(j.x))});
  }
  o.panels.push_back({"_boundary", b});
  return o;
}

Output lt_edge_diff(const RunContext& ctx, const json& manifest) {
  const std::vector<int> ns = {4, 6, 10, 20};
  const std::vector<double> lpn = logspace(0.005, 5.0, 16);
  Output o;
  o.parameters = {{"n_values", ns}, {"lambda_per_n", numbers_json(lpn)}};
  o.tolerances = {{"edge_gap_max", manifest["criteria"]["6"]["edge_gap_max"]}};
  const LegendreOptions lo = serial_options(ctx);
  struct Row {
    double polarization, bound, ps;
  };
  const auto rows = sweep<Row>("boundary states", ns.size() * lpn.size(), ctx, [&](std::size_t i) {
    const int N = ns[i / lpn.size()];
    const QuantumState s = squeezing_ground_state(N, lpn[i % lpn.size()] * N, 1).state;
    const SpinTriple j = collective_operators(s.basis());
    const double y = s.expect(j.y), x = s.variance(j.x);
    return Row{y / (0.5 * N), spin_squeezing_bound(y, x, N, false, {}, lo).bound, pezze_smerzi_bound(y, x)};
  });
  Table a{"relative gap between the optimal bound and the Pezze-Smerzi bound on the boundary",
          {{"n", "particles"}, {"lambda", ""}, {"polarization", "<Jy>/(N/2)"}, {"bound_per_n", "F_Q / N"},
           {"pezze_smerzi_per_n", "F_Q / N"}, {"relative_difference", ""}},
          {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int N = ns[i / lpn.size()];
    const Row& r = rows[i];
    const double gap = (r.bound - r.ps) / r.bound;
    worst = std::max(worst, gap);
    a.add({N, num(lpn[i % lpn.size()] * N), num(r.polarization), num(r.bound / N), num(r.ps / N), num(gap)});
  }
  o.panels.push_back({"_a", a});

  const int N = 4;
  const double y = 1.5, x = 0.567;
  const std::vector<double> x4 = linspace(0.35, 2.5, 44);
  o.parameters["fourth_moment"] = {{"n", N}, {"mean_jy", y}, {"var_jx", x}, {"jx4", numbers_json(x4)}};
  auto constrained = [&](Basis::Kind kind, std::optional<double> jx4,
                         const std::optional<BoundResult>& warm) -> std::optional<BoundResult> {
    const Basis b = kind == Basis::Kind::Full ? Basis::full(N, 0.5) : Basis::symmetric(N, 0.5);
    const SpinTriple j = collective_operators(b);
    ConstraintSet cs(b);
    cs.add(j.y, y, "Jy");
    cs.add(j.x * j.x, x, "Jx2");
    cs.add(j.x, 0.0, "Jx");
    LegendreOptions wo = lo;
    if (jx4) {
      cs.add(j.x * j.x * j.x * j.x, *jx4, "Jx4");
      if (warm) {
        wo.warm_start = warm->r_star;
        wo.warm_start->push_back(0.0);
      }
    }
    try {
      return qfi_lower_bound(cs, j.z, wo);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Infeasible) return std::nullopt;
      throw;
    }
  };
  const std::optional<BoundResult> plain = constrained(Basis::Kind::Full, std::nullopt, std::nullopt);
  const std::optional<BoundResult> sym = constrained(Basis::Kind::Symmetric, std::nullopt, std::nullopt);
  const auto full = sweep<std::optional<BoundResult>>("fourth-moment constraint", x4.size() * 2, ctx, [&](std::size_t i) {
    const bool is_full = i < x4.size();
    return constrained(is_full ? Basis::Kind::Full : Basis::Kind::Symmetric, x4[i % x4.size()], is_full ? plain : sym);
  });
  Table b{"QFI bound with an added <Jx^4> constraint, N = 4, <Jy> = 1.5, Var(Jx) = 0.567",
          {{"jx4", ""}, {"feasible", "0/1"}, {"bound_per_n", "F_Q / N"}, {"bound_symmetric_per_n", "F_Q / N"},
           {"without_jx4_per_n", "F_Q / N"}, {"without_jx4_symmetric_per_n", "F_Q / N"}},
          {}};
  auto per_n = [&](const std::optional<BoundResult>& v) { return v ? num(v->bound / N) : json(nullptr); };
  for (std::size_t i = 0; i < x4.size(); ++i) {
    b.add({num(x4[i]), full[i].has_value(), per_n(full[i]), per_n(full[x4.size() + i]), per_n(plain), per_n(sym)});
  }
  o.panels.push_back({"_b", b});
  const double limit = manifest["criteria"]["6"]["edge_gap_max"];
  o.checks = {{"worst_relative_difference", num(worst)}, {"edge_gap", verdict(worst <= limit)}};
  return o;
}

Output lt_symmetric_squeezing(const RunContext& ctx, const json& manifest) {
  const double xi2 = manifest["experiment_inputs"]["spin_squeezing"]["xi2"];
  const std::vector<double> alphas = {0.85, 0.5};
  const std::vector<int> nps = {10, 20, 50, 100, 200};
  Output o;
  o.parameters = {{"xi2", xi2}, {"alpha", alphas}, {"n_primes", nps}};
  o.tolerances = manifest["criteria"]["6"];
  const LegendreOptions lo = serial_options(ctx);
  const auto v = sweep<std::optional<double>>("scaled spin squeezing", alphas.size() * nps.size(), ctx, [&](std::size_t i) {
    const double a = alphas[i / nps.size()];
    const int np = nps[i % nps.size()];
    return try_bound([&] { return spin_squeezing_bound(a * np / 2.0, xi2 * np * a * a / 4.0, np, false, {}, lo).bound / np; });
  });
  const char* suffix[] = {"_a", "_b"};
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    Table t{"symmetric-subspace bound for scaled spin-squeezing data, alpha = " + fmt12(alphas[k]),
            {{"n_prime", "particles"}, {"mean_jy", ""}, {"var_jx", ""}, {"feasible", "0/1"}, {"bound_per_n", "F_Q / N'"},
             {"pezze_smerzi_per_n", "F_Q / N'"}},
            {}};
    for (std::size_t n = 0; n < nps.size(); ++n) {
      const int np = nps[n];
      const double y = alphas[k] * np / 2.0, x = xi2 * np * alphas[k] * alphas[k] / 4.0;
      const auto& b = v[k * nps.size() + n];
      t.add({np, num(y), num(x), b.has_value(), opt(b), num(pezze_smerzi_bound(y, x) / np)});
    }
    o.panels.push_back({suffix[k], t});
  }
  o.checks = {{"inverse_xi2", num(1.0 / xi2)}};
  return o;
}

Output assimpthotic(const RunContext& ctx, const json& manifest) {
  const json& c = manifest["criteria"]["7"];
  Output o;
  o.parameters = {{"n", c["N"]}, {"jy2", c["jy2"]}, {"jx2_eq_jz2", c["jx2_eq_jz2"]}, {"n_primes", c["n_primes"]}};
  o.tolerances = c;
  LegendreOptions lo;
  lo.seed = ctx.seed;
  lo.threads = ctx.threads;
  std::cerr << "scaled Dicke sweep: running\n";
  const DickeExperimentResult r = dicke_experiment_bound(c["jy2"].get<double>(), c["jx2_eq_jz2"].get<double>(),
                                                         c["N"].get<int>(), c["n_primes"].get<std::vector<int>>(), lo);
  Table t{"bound for N particles extrapolated from the symmetric subspace of N' particles",
          {{"n_prime", "particles"}, {"jy2_sym", ""}, {"jx2_sym", ""}, {"bound_sym", "F_Q"}, {"bound_per_n", "F_Q / N"}},
          {}};
  bool monotone = true;
  for (std::size_t i = 0; i < r.sweep.size(); ++i) {
    const ScalingPoint& s = r.sweep[i];
    t.add({s.n_prime, num(s.jy2_sym), num(s.jx2_sym), num(s.result.bound), num(s.bound_per_n)});
    if (i > 0 && s.bound_per_n < r.sweep[i - 1].bound_per_n) monotone = false;
  }
  o.panels.push_back({"", t});
  o.checks = {{"gamma", num(r.gamma)},
              {"bound_per_n", num(r.bound_per_n)},
              {"monotone", monotone},
              {"within_tolerance", verdict(std::abs(r.bound_per_n - c["target"].get<double>()) <= c["abs_tol"].get<double>())}};
  return o;
}

Output table_fidelities(const RunContext& ctx, const json& manifest) {
  const json& rows = manifest["fidelity_table"];
  Output o;
  o.parameters = {{"rows", rows.size()}};
  o.tolerances = {{"interval", "reference_bound_per_n +- reference_pm"}};
  const LegendreOptions lo = serial_options(ctx);
  const auto v = sweep<double>("fidelity table", rows.size(), ctx, [&](std::size_t i) {
    const json& r = rows[i];
    const int n = r["n"];
    const double F = r["fidelity"];
    return (r["state"] == "ghz" ? ghz_fidelity_bound_numeric(F, n, lo) : dicke_fidelity_bound(F, n, lo)).bound / n;
  });
  Table t{"QFI bounds from measured fidelities",
          {{"system", ""}, {"state", ""}, {"n", "particles"}, {"fidelity", ""}, {"reference_bound_per_n", "F_Q / N"},
           {"reference_pm", "F_Q / N"}, {"bound_per_n", "F_Q / N"}, {"pass", "pass/fail/n/a"}},
          {}};
  int passed = 0, checked = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& r = rows[i];
    std::string p = "n/a";
    if (!r["pm"].is_null()) {
      ++checked;
      const bool ok = std::abs(v[i] - r["bound_per_n"].get<double>()) <= r["pm"].get<double>();
      passed += ok;
      p = verdict(ok);
    }
    t.add({r["system"], r["state"], r["n"], r["fidelity"], r["bound_per_n"], r["pm"], num(v[i]), p});
  }
  o.panels.push_back({"", t});
  o.checks = {{"rows_checked", checked}, {"rows_passed", passed}};
  return o;
}

void table_rows(Table& t, int N, double j, const std::vector<TableRow>& rows, double tol, int& passed, int& checked) {
  for (const TableRow& r : rows) {
    std::string p = "n/a";
    json diff = nullptr;
    if (r.applicable && r.numeric) {
      const double d = std::abs(*r.numeric - r.closed_form);
      diff = num(d);
      ++checked;
      passed += d <= tol;
      p = verdict(d <= tol);
    }
    t.add({N, num(j), r.state, num(r.closed_form), r.numeric ? num(*r.numeric) : json(nullptr), diff, p, r.note});
  }
}

Table state_columns(const std::string& title) {
  return Table{title,
               {{"n", "particles"}, {"j", ""}, {"state", ""}, {"closed_form", "bound"}, {"numeric", "bound"},
                {"abs_difference", "bound"}, {"pass", "pass/fail/n/a"}, {"note", ""}},
               {}};
}

Output table_two_ensembles(const RunContext&, const json& manifest) {
  const json& c = manifest["criteria"]["8"];
  const double a = c["two_ensemble_a"];
  const double tol = c["abs_tol"];
  Output o;
  o.parameters = {{"n_values", c["n_values"]}, {"j_values", c["j_values"]}, {"a", a}};
  o.tolerances = {{"abs_tol", tol}};
  Table t = state_columns("gradient bounds for two ensembles at -a and +a");
  int passed = 0, checked = 0;
  for (int N : c["n_values"]) {
    for (double j : c["j_values"]) table_rows(t, N, j, two_ensemble_table(N, j, a), tol, passed, checked);
  }
  o.panels.push_back({"", t});
  o.checks = {{"rows_checked", checked}, {"rows_passed", passed}};
  return o;
}

Output table_compare_states(const RunContext&, const json& manifest) {
  const json& c = manifest["criteria"]["8"];
  const MomentModel m{0.5, 1.0, 0.3};
  const double tol = c["abs_tol"];
  Output o;
  o.parameters = {{"n_values", c["n_values"]}, {"j_values", c["j_values"]},
                  {"spatial", {{"mu", m.mu}, {"sigma2", m.sigma2}, {"eta", m.eta}}}};
  o.tolerances = {{"abs_tol", tol}};
  Table t = state_columns("gradient bounds for a single ensemble");
  int passed = 0, checked = 0;
  for (int N : c["n_values"]) {
    for (double j : c["j_values"]) table_rows(t, N, j, state_table(m, N, j), tol, passed, checked);
  }
  o.panels.push_back({"", t});
  o.checks = {{"rows_checked", checked}, {"rows_passed", passed}};
  return o;
}

using Producer = Output (*)(const RunContext&, const json&);

const std::map<std::string, Producer>& producers() {
  static const std::map<std::string, Producer> m = {
      {"fig:vd-evolution-of-precision", vd_evolution},
      {"fig:vd-comparing-the-bounds", vd_comparing},
      {"fig:vd-precision-theta-experiment", vd_precision_theta},
      {"fig:vd-experimental", vd_experimental},
      {"fig:lt-plots-for-fidelities", lt_fidelities},
      {"fig:lt-nrange-fdicke", lt_nrange},
      {"fig:lt-spsq2d-4", lt_spsq2d},
      {"fig:lt-edge-diff", lt_edge_diff},
      {"fig:lt-bounds-on-symmetric-spin-squeezing", lt_symmetric_squeezing},
      {"fig:assimpthotic", assimpthotic},
      {"table:lt-fidelities", table_fidelities},
      {"table:two-ensembles", table_two_ensembles},
      {"table:compare-states", table_compare_states},
  };
  return m;
}

}  // namespace

const std::vector<std::string>& reproduce_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, f] : producers()) k.push_back(name);
    return k;
  }();
  return keys;
}

json reproduce(const std::string& key, const std::string& out_dir, const RunContext& ctx) {
  const auto it = producers().find(key);
  if (it == producers().end()) {
    std::string known;
    for (const std::string& k : reproduce_keys()) known += " " + k;
    fail(ErrorKind::InvalidInput, "unknown reproduction key " + key + "; known keys:" + known);
  }
  const json manifest = json::parse(tolerance_manifest);
  const auto start = std::chrono::steady_clock::now();
  const Output out = it->second(ctx, manifest);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::InvalidInput, "cannot create " + out_dir + ": " + ec.message());
  std::string stem = key;
  for (char& c : stem) {
    if (c == ':') c = '_';
  }
  const std::filesystem::path dir(out_dir);
  json files = json::array();
  for (const Panel& p : out.panels) {
    const std::string path = (dir / (stem + p.suffix + ".csv")).string();
    Table t = p.table;
    t.title = key + (p.suffix.empty() ? "" : " panel " + p.suffix.substr(1)) + ": " + t.title;
    write_text(path, to_csv(t));
    files.push_back(path);
  }
  const std::string sidecar = (dir / (stem + ".json")).string();
  const json meta{{"key", key},
                  {"files", files},
                  {"parameters", out.parameters},
                  {"tolerances", out.tolerances},
                  {"checks", out.checks},
                  {"manifest_version", manifest["version"]},
                  {"seed", ctx.seed},
                  {"threads", ctx.threads},
                  {"runtime_seconds", num(seconds)}};
  write_text(sidecar, meta.dump(2) + "\n");
  return json{{"key", key}, {"files", files}, {"sidecar", sidecar}, {"checks", out.checks}};
}

}  // namespace metrobound::cli
