#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "metrobound/error.hpp"
#include "metrobound/parallel.hpp"

using namespace metrobound;
using namespace metrobound::cli;

namespace {

struct Job {
  std::string input;
  json overrides = json::object();
};

using Runner = json (*)(const Params&, const RunContext&);

void param(CLI::App* sub, Job& job, const std::string& key, const std::string& help) {
  std::string flag = "--" + key;
  for (char& c : flag) {
    if (c == '_') c = '-';
  }
  sub->add_option_function<std::string>(
      flag, [&job, key](const std::string& s) { job.overrides[key] = parse_scalar(s); }, help);
}

void state_params(CLI::App* sub, Job& job) {
  param(sub, job, "state", "dicke|ghz|polarized|cat|singlet|thermal|squeezing|mixed|two-ensemble|density");
  param(sub, job, "n", "particle number");
  param(sub, job, "j", "single-particle spin (default 0.5)");
  param(sub, job, "k", "particles in |0> for the Dicke state (default N/2)");
  param(sub, job, "axis", "x|y|z (default x)");
  param(sub, job, "basis", "symmetric|full");
  param(sub, job, "temperature", "width of the thermal Dicke mixture");
  param(sub, job, "lambda", "field of the ground state of Jx^2 - lambda Jy");
  param(sub, job, "sign", "+1 or -1 in front of Jx^2");
  param(sub, job, "density", "density matrix as {\"re\": [[...]], \"im\": [[...]]}");
}

int thread_count(int requested) {
  if (const char* env = std::getenv("METROBOUND_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return requested > 0 ? requested : default_thread_count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds on the quantum Fisher information from measured expectation values", "metrobound"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  std::string output;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output,-o", output, "write results to this file instead of stdout");
  app.add_option("--seed", seed, "seed for random starts and resampling");
  app.add_option("--threads", threads, "worker threads (METROBOUND_THREADS overrides)")->check(CLI::NonNegativeNumber);

  std::map<CLI::App*, std::pair<Runner, Job*>> runners;
  Job qfi_job, dicke_job, legendre_job, gradient_job, resample_job;

  auto add = [&](const std::string& name, const std::string& help, Runner r, Job& job) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--input,-i", job.input, "JSON document with the job parameters");
    runners[sub] = {r, &job};
    return sub;
  };

  CLI::App* q = add("qfi", "quantum Fisher information of a named state", run_qfi, qfi_job);
  state_params(q, qfi_job);
  param(q, qfi_job, "generator", "Jx|Jy|Jz, optionally with ^p (default Jz)");
  param(q, qfi_job, "direction", "generator direction as [x, y, z]");

  CLI::App* d = add("dicke-bound", "precision bound from moments near the unpolarized Dicke state", run_dicke_bound,
                    dicke_job);
  state_params(d, dicke_job);
  for (const char* k : {"jx2", "jx4", "jy2", "jy4", "jz2", "jxjy2jx"}) param(d, dicke_job, k, std::string("<") + k + ">");
  param(d, dicke_job, "beta", "<Jx^4> / <Jx^2>^2 for the second-moment bound (default 3)");
  param(d, dicke_job, "theta", "also evaluate the precision at this angle");
  param(d, dicke_job, "bound_fourth_moment", "replace <Jx Jy^2 Jx> by its upper bound");

  CLI::App* l = add("legendre-bound", "QFI lower bound from constrained expectation values", run_legendre_bound,
                    legendre_job);
  param(l, legendre_job, "kind", "ghz-fidelity|dicke-fidelity|spin-squeezing|dicke-experiment|constraints");
  for (const char* k : {"n", "j", "basis", "fidelity", "mean_jy", "var_jx", "jx4", "constrain_jx_zero", "jy2",
                        "jx2_eq_jz2", "n_primes", "generator", "constraints", "mu_grid", "n_starts"}) {
    param(l, legendre_job, k, k);
  }

  CLI::App* g = add("gradient-bound", "gradient-magnetometry bound for a spin state and particle positions",
                    run_gradient_bound, gradient_job);
  state_params(g, gradient_job);
  param(g, gradient_job, "positions", "particle positions as [x1, ..., xN]");
  param(g, gradient_job, "chain", "positions a, 2a, ..., Na");
  param(g, gradient_job, "double_well", "half the particles at -a, half at +a");
  param(g, gradient_job, "mu", "mean position");
  param(g, gradient_job, "sigma2", "single-particle position variance");
  param(g, gradient_job, "eta", "pair position covariance");

  CLI::App* r = add("resample", "Gaussian resampling of a bound's inputs", run_resample, resample_job);
  for (const char* k : {"bound", "preset", "n", "jx2", "jx4", "jy2", "jy4", "beta", "mean_jy", "var_jx", "sigma", "draws"}) {
    param(r, resample_job, k, k);
  }

  CLI::App* rep = app.add_subcommand("reproduce", "write the data behind a figure or table");
  std::string key;
  std::string out_dir = "reproduce";
  bool list = false;
  rep->add_option("key", key, "figure or table key");
  rep->add_option("--out", out_dir, "directory for CSV files and the JSON sidecar");
  rep->add_flag("--list", list, "print the known keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const RunContext ctx{seed, thread_count(threads)};
  try {
    if (rep->parsed()) {
      if (list) {
        for (const std::string& k : reproduce_keys()) std::cout << k << "\n";
        return 0;
      }
      if (key.empty()) fail(ErrorKind::InvalidInput, "reproduce needs a key (see --list)");
      emit("metrobound reproduce", reproduce(key, out_dir, ctx), format, output);
      return 0;
    }
    for (const auto& [sub, job] : runners) {
      if (!sub->parsed()) continue;
      json doc = job.second->input.empty() ? json::object() : read_json_file(job.second->input);
      doc.update(job.second->overrides);
      emit("metrobound " + sub->get_name(), job.first(Params(doc), ctx), format, output);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Infeasible ? 3 : 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
