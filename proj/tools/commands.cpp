#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include "metrobound/dicke_bounds.hpp"
#include "metrobound/error.hpp"
#include "metrobound/manifest.hpp"
#include "metrobound/qfi.hpp"

namespace metrobound::cli {

namespace {

int parse_power(const std::string& s) {
  if (s.empty() || s.size() > 1 || s[0] < '1' || s[0] > '8') fail(ErrorKind::InvalidInput, "operator power must be 1..8");
  return s[0] - '0';
}

Basis basis_from(const Params& p, Basis::Kind kind) {
  const int N = p.integer("n");
  const double j = p.number("j", 0.5);
  if (N < 1) fail(ErrorKind::InvalidInput, "n must be positive");
  if (j <= 0.0 || std::abs(2.0 * j - std::round(2.0 * j)) > 1e-12) {
    fail(ErrorKind::InvalidInput, "j must be a positive half-integer");
  }
  return kind == Basis::Kind::Full ? Basis::full(N, j) : Basis::symmetric(N, j);
}

QuantumState density_state(const Params& p, Basis::Kind kind) {
  const Basis b = basis_from(p, kind);
  const json& d = p.at("density");
  const Index dim = b.dim();
  CMat rho = CMat::Zero(dim, dim);
  auto fill = [&](const char* part, bool imag) {
    if (!d.contains(part)) return;
    const json& m = d[part];
    if (!m.is_array() || static_cast<Index>(m.size()) != dim) {
      fail(ErrorKind::InvalidInput, std::string("density.") + part + " must be a square matrix matching the basis");
    }
    for (Index r = 0; r < dim; ++r) {
      const json& row = m[r];
      if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
        fail(ErrorKind::InvalidInput, std::string("density.") + part + " must be a square matrix matching the basis");
      }
      for (Index c = 0; c < dim; ++c) {
        if (!row[c].is_number()) fail(ErrorKind::InvalidInput, "density entries must be numbers");
        if (imag) {
          rho(r, c) += cplx(0.0, row[c].get<double>());
        } else {
          rho(r, c) += row[c].get<double>();
        }
      }
    }
  };
  if (!d.is_object() || !d.contains("re")) fail(ErrorKind::InvalidInput, "density needs a 're' matrix");
  fill("re", false);
  fill("im", true);
  return QuantumState::from_density(rho, b);
}

}  // namespace

QuantumState make_state(const Params& p, Basis::Kind default_kind) {
  const std::string name = p.text("state");
  Basis::Kind kind = default_kind;
  if (name == "singlet" || name == "two-ensemble") kind = Basis::Kind::Full;
  if (p.has("basis")) kind = parse_basis(p.text("basis"));
  if (name == "density") return density_state(p, kind);

  const int N = p.integer("n");
  if (N < 1) fail(ErrorKind::InvalidInput, "n must be positive");
  const double j = p.number("j", 0.5);
  const Axis axis = parse_axis(p.text("axis", "x"));
  if (name == "dicke") return dicke_state(N, p.integer("k", N / 2), axis, kind);
  if (name == "ghz") return ghz_state(N, kind);
  if (name == "polarized") return polarized_state(N, j, axis, kind);
  if (name == "cat") return cat_product_state(N, j, kind);
  if (name == "singlet") {
    if (kind != Basis::Kind::Full) fail(ErrorKind::InvalidInput, "the singlet needs the full basis");
    return pi_singlet(N, j);
  }
  if (name == "thermal") return thermal_dicke(N, p.number("temperature"), kind);
  if (name == "squeezing") return squeezing_ground_state(N, p.number("lambda"), p.integer("sign", 1), kind).state;
  if (name == "mixed") return maximally_mixed(basis_from(p, kind));
  if (name == "two-ensemble") return two_ensemble_best_state(N, j);
  fail(ErrorKind::InvalidInput, "unknown state " + name);
}

Operator make_operator(const std::string& name, const Basis& basis) {
  if (name == "ghz") return Operator(ghz_state(basis.n_particles, basis.kind).density(), basis);
  if (name == "dicke") {
    return Operator(dicke_state(basis.n_particles, basis.n_particles / 2, Axis::X, basis.kind).density(), basis);
  }
  if (name == "J2") return total_spin_squared(basis);
  if (name.size() >= 2 && name[0] == 'J') {
    const Axis axis = parse_axis(name.substr(1, 1));
    int power = 1;
    if (name.size() > 2) {
      if (name[2] != '^') fail(ErrorKind::InvalidInput, "unknown operator " + name);
      power = parse_power(name.substr(3));
    }
    const Operator base = collective_operator(axis, basis);
    Operator out = base;
    for (int k = 1; k < power; ++k) out = out * base;
    return out;
  }
  fail(ErrorKind::InvalidInput, "unknown operator " + name);
}

SpatialModel make_spatial(const Params& p, int N) {
  SpatialModel s;
  if (p.has("positions")) {
    s = Deterministic{p.numbers("positions")};
  } else if (p.has("chain")) {
    s = chain(N, p.number("chain"));
  } else if (p.has("double_well")) {
    s = double_well(N, p.number("double_well"));
  } else {
    s = MomentModel{p.number("mu", 0.0), p.number("sigma2", 1.0), p.number("eta", 0.0)};
  }
  validate_spatial(s, N);
  return s;
}

LegendreOptions legendre_options(const Params& p, const RunContext& ctx) {
  LegendreOptions o;
  o.seed = ctx.seed;
  o.threads = ctx.threads;
  o.mu_grid = p.integer("mu_grid", o.mu_grid);
  o.n_starts = p.integer("n_starts", o.n_starts);
  return o;
}

json run_qfi(const Params& p, const RunContext&) {
  const QuantumState s = make_state(p, Basis::Kind::Symmetric);
  Operator g;
  if (p.has("direction")) {
    const std::vector<double> d = p.numbers("direction");
    if (d.size() != 3) fail(ErrorKind::InvalidInput, "direction needs three components");
    g = collective_operator(Eigen::Vector3d(d[0], d[1], d[2]), s.basis());
  } else {
    g = make_operator(p.text("generator", "Jz"), s.basis());
  }
  return json{{"qfi", num(qfi(s, g))}};
}

json run_dicke_bound(const Params& p, const RunContext&) {
  DickeMoments m;
  if (p.has("state")) {
    m = moments_from_state(make_state(p, Basis::Kind::Symmetric)).moments;
  } else {
    m.N = p.integer("n");
    m.jx2 = p.number("jx2");
    m.jx4 = p.number("jx4");
    m.jy2 = p.number("jy2");
    m.jy4 = p.number("jy4");
    if (p.has("jz2")) m.jz2 = p.number("jz2");
    if (p.has("jxjy2jx")) m.jxjy2jx = p.number("jxjy2jx");
  }
  if (p.flag("bound_fourth_moment", !p.has("state") && !p.has("jxjy2jx"))) m = with_bounded_fourth_moment(m);
  m.validate();
  const double beta = p.number("beta", 3.0);
  const OptimalPrecision op = optimal_precision(m);
  const double sm = second_moment_bound(m.jx2, m.jy2, m.N, beta);
  json out{{"n", m.N},
           {"optimal_precision", num(op.precision)},
           {"optimal_precision_per_n", num(op.precision / m.N)},
           {"theta_opt", num(op.theta_opt)},
           {"second_moment_bound", num(sm)},
           {"second_moment_bound_per_n", num(sm / m.N)},
           {"beta", num(beta)},
           {"jxjy2jx", num(m.jxjy2jx)},
           {"jxjy2jx_bounded", m.jxjy2jx_is_bounded}};
  if (p.has("theta")) {
    const double t = p.number("theta");
    out["theta"] = num(t);
    out["precision_at_theta"] = num(precision_vs_theta(m, t));
  }
  return out;
}

namespace {

json bound_json(const BoundResult& r, int N) {
  json rs = json::array();
  for (double v : r.r_star) rs.push_back(num(v));
  return json{{"bound", num(r.bound)},         {"bound_per_n", num(r.bound / N)},
              {"r_star", rs},                  {"mu_star", num(r.mu_star)},
              {"converged", r.converged},      {"iterations", r.iterations},
              {"objective", num(r.objective)}, {"mu_grid", r.mu_grid_size}};
}

}  // namespace

json run_legendre_bound(const Params& p, const RunContext& ctx) {
  const std::string kind = p.text("kind");
  const LegendreOptions opts = legendre_options(p, ctx);
  if (kind == "ghz-fidelity") {
    const int N = p.integer("n");
    const double F = p.number("fidelity");
    json out = bound_json(ghz_fidelity_bound_numeric(F, N, opts), N);
    out["closed_form"] = num(ghz_fidelity_bound(F, N));
    return out;
  }
  if (kind == "dicke-fidelity") {
    const int N = p.integer("n");
    return bound_json(dicke_fidelity_bound(p.number("fidelity"), N, opts), N);
  }
  if (kind == "spin-squeezing") {
    const int N = p.integer("n");
    const double my = p.number("mean_jy");
    const double vx = p.number("var_jx");
    std::optional<double> jx4;
    if (p.has("jx4")) jx4 = p.number("jx4");
    json out = bound_json(spin_squeezing_bound(my, vx, N, p.flag("constrain_jx_zero", false), jx4, opts), N);
    out["pezze_smerzi"] = vx > 0.0 ? num(pezze_smerzi_bound(my, vx)) : json(nullptr);
    return out;
  }
  if (kind == "dicke-experiment") {
    const int N = p.integer("n");
    std::vector<int> nps;
    for (double v : p.numbers("n_primes")) nps.push_back(static_cast<int>(v));
    const DickeExperimentResult r = dicke_experiment_bound(p.number("jy2"), p.number("jx2_eq_jz2"), N, nps, opts);
    json sweep = json::array();
    for (const ScalingPoint& s : r.sweep) {
      sweep.push_back({{"n_prime", s.n_prime}, {"bound_sym", num(s.result.bound)}, {"bound_per_n", num(s.bound_per_n)}});
    }
    return json{{"gamma", num(r.gamma)}, {"jy2_sym", num(r.jy2_sym)}, {"bound_per_n", num(r.bound_per_n)},
                {"sweep", sweep}};
  }
  if (kind == "constraints") {
    const Basis b = basis_from(p, parse_basis(p.text("basis", "symmetric")));
    ConstraintSet cs(b);
    const json& list = p.at("constraints");
    if (!list.is_array() || list.empty()) fail(ErrorKind::InvalidInput, "constraints must be a non-empty list");
    for (const json& c : list) {
      if (!c.is_object() || !c.contains("operator") || !c.contains("value") || !c["operator"].is_string() ||
          !c["value"].is_number()) {
        fail(ErrorKind::InvalidInput, "each constraint needs an 'operator' name and a numeric 'value'");
      }
      const std::string name = c["operator"].get<std::string>();
      cs.add(make_operator(name, b), c["value"].get<double>(), name);
    }
    return bound_json(qfi_lower_bound(cs, make_operator(p.text("generator", "Jz"), b), opts), b.n_particles);
  }
  fail(ErrorKind::InvalidInput, "unknown bound kind " + kind);
}

json run_gradient_bound(const Params& p, const RunContext&) {
  const QuantumState s = make_state(p, Basis::Kind::Full);
  const GradientBound g = gradient_bound(s, make_spatial(p, s.basis().n_particles));
  return json{{"bound", num(g.value)},
              {"saturable", g.saturable},
              {"f00", num(g.qfi_matrix.f00)},
              {"f01", num(g.qfi_matrix.f01)},
              {"f11", num(g.qfi_matrix.f11)}};
}

json run_resample(const Params& p, const RunContext& ctx) {
  const std::string target = p.text("bound", "dicke-optimal");
  json values = json::object();
  json sigma = json::object();
  if (p.text("preset", "") == "dicke-experiment") {
    const json m = json::parse(tolerance_manifest)["experiment_inputs"]["dicke"];
    for (const char* k : {"N", "jx2", "jx4", "jy2", "jy4"}) values[k == std::string_view("N") ? "n" : k] = m[k];
    sigma = m["sigma"];
  } else if (p.has("preset")) {
    fail(ErrorKind::InvalidInput, "unknown preset " + p.text("preset"));
  }
  for (auto it = p.doc().begin(); it != p.doc().end(); ++it) {
    if (it.value().is_number()) values[it.key()] = it.value();
  }
  if (p.has("sigma")) {
    if (!p.at("sigma").is_object()) fail(ErrorKind::InvalidInput, "sigma must be an object of standard deviations");
    for (auto it = p.at("sigma").begin(); it != p.at("sigma").end(); ++it) sigma[it.key()] = it.value();
  }
  const Params v(values);

  std::vector<std::string> names;
  std::function<double(std::span<const double>)> f;
  int N = v.integer("n");
  if (target == "dicke-optimal") {
    names = {"jx2", "jx4", "jy2", "jy4"};
    f = [N](std::span<const double> x) {
      DickeMoments m;
      m.N = N;
      m.jx2 = x[0];
      m.jx4 = x[1];
      m.jy2 = x[2];
      m.jy4 = x[3];
      return optimal_precision(with_bounded_fourth_moment(m)).precision;
    };
  } else if (target == "second-moment") {
    names = {"jx2", "jy2"};
    const double beta = v.number("beta", 3.0);
    f = [N, beta](std::span<const double> x) { return second_moment_bound(x[0], x[1], N, beta); };
  } else if (target == "spin-squeezing") {
    names = {"mean_jy", "var_jx"};
    LegendreOptions opts = legendre_options(p, ctx);
    f = [N, opts](std::span<const double> x) { return spin_squeezing_bound(x[0], x[1], N, false, {}, opts).bound; };
  } else {
    fail(ErrorKind::InvalidInput, "unknown resample bound " + target);
  }
  std::vector<double> mean, sd;
  for (const std::string& k : names) {
    mean.push_back(v.number(k));
    double s = 0.0;
    if (sigma.contains(k)) {
      if (!sigma[k].is_number()) fail(ErrorKind::InvalidInput, "sigma." + k + " must be a number");
      s = sigma[k].get<double>();
    }
    if (!(s >= 0.0)) fail(ErrorKind::InvalidInput, "sigma." + k + " must be non-negative");
    sd.push_back(s);
  }
  const ResampleSummary r = gaussian_resample(f, mean, sd, p.integer("draws", 10000), ctx.seed);
  json used = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) used[names[i]] = {{"mean", num(mean[i])}, {"sigma", num(sd[i])}};
  return json{{"bound", target},
              {"n", N},
              {"inputs", used},
              {"draws", r.draws},
              {"failures", r.failures},
              {"seed", ctx.seed},
              {"mean", num(r.mean)},
              {"std", num(r.stddev)},
              {"p05", num(r.p05)},
              {"p50", num(r.p50)},
              {"p95", num(r.p95)},
              {"mean_per_n", num(r.mean / N)},
              {"std_per_n", num(r.stddev / N)}};
}

}  // namespace metrobound::cli
