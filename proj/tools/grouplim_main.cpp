// grouplim: command-line front end. Every command prints one JSON document on
// stdout with a "meta" block; CSV goes to --out where a command offers it.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grouplim/error.hpp"
#include "grouplim/json_io.hpp"
#include "grouplim/parallel.hpp"
#include "grouplim/version.hpp"

namespace {

using grouplim::io::json;
namespace gl = grouplim;

enum Exit { kOk = 0, kValidation = 1, kBudget = 2, kInternal = 3 };

struct Common {
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;  // 0: command default
  int weight_cap = 12;
  std::uint64_t node_budget = 10'000'000;
};

gl::ConfigSystem load_config(const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) return gl::io::config_from_json(gl::io::read_file(arg));
  return gl::builtin_config(arg);
}

gl::DenseFn load_dense(const std::string& path) { return gl::io::dense_from_json(gl::io::read_file(path)); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw gl::ValidationError("cannot write " + path);
  out << text;
}

gl::DhatOptions dhat_options(const Common& c) {
  gl::DhatOptions o;
  o.weight_cap = c.weight_cap;
  o.node_budget = c.node_budget;
  return o;
}

gl::DensityOptions density_options(const Common& c) {
  gl::DensityOptions o;
  if (c.budget) o.budget = c.budget;
  return o;
}

gl::Metric parse_metric(const std::string& m) {
  if (m == "d") return gl::Metric::d;
  if (m == "dprime" || m == "d'") return gl::Metric::dprime;
  throw gl::ValidationError("unknown metric " + m + " (expected d or dprime)");
}

int exit_code(gl::ErrorKind k) {
  switch (k) {
    case gl::ErrorKind::budget:
      return kBudget;
    case gl::ErrorKind::internal:
      return kInternal;
    default:
      return kValidation;
  }
}

const char* kind_name(gl::ErrorKind k) {
  switch (k) {
    case gl::ErrorKind::validation:
      return "validation";
    case gl::ErrorKind::budget:
      return "budget";
    case gl::ErrorKind::unsupported:
      return "unsupported";
    case gl::ErrorKind::precision:
      return "precision";
    case gl::ErrorKind::internal:
      return "internal";
  }
  return "internal";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limits of functions on abelian groups: spectra, metrics, densities, extremal problems", "grouplim"};
  app.set_config("--config-file", "", "Read options from a key=value file");
  app.set_version_flag("--version", std::string(gl::kVersion));
  app.require_subcommand(1);

  Common c;
  app.add_option("--threads", c.threads, "Worker threads (default: GROUPLIM_THREADS or hardware)");

  // Result of the selected command and the budget fields to echo.
  json result;
  json budgets = json::object();
  bool uses_seed = false;
  std::function<void()> run;

  // dft
  std::string fn_path, method = "auto";
  auto* dft = app.add_subcommand("dft", "Fourier transform of a dense function");
  dft->add_option("--fn", fn_path, "Function JSON")->required();
  dft->add_option("--method", method, "auto, naive or fft")->check(CLI::IsMember({"auto", "naive", "fft"}));
  dft->callback([&] {
    run = [&] {
      const auto m = method == "naive" ? gl::DftMethod::naive
                     : method == "fft" ? gl::DftMethod::fft
                                       : gl::DftMethod::automatic;
      result["spectrum"] = gl::io::to_json(gl::dft(load_dense(fn_path), m));
    };
  });

  // u2
  std::string u2_method = "fourier";
  auto* u2 = app.add_subcommand("u2", "Gowers U2 norm");
  u2->add_option("--fn", fn_path, "Function JSON")->required();
  u2->add_option("--method", u2_method, "fourier or direct")->check(CLI::IsMember({"fourier", "direct"}));
  u2->callback([&] {
    run = [&] {
      const gl::DenseFn f = load_dense(fn_path);
      result["u2"] = u2_method == "direct" ? gl::u2_direct(f) : gl::u2_fourier(f);
      result["method"] = u2_method;
    };
  });

  // dist
  std::string lhs, rhs, metric = "d";
  bool raw = false;
  auto* dist = app.add_subcommand("dist", "Bracket for d (or d-hat on raw spectra)");
  dist->add_option("--lhs", lhs, "First function or spectrum JSON")->required();
  dist->add_option("--rhs", rhs, "Second function or spectrum JSON")->required();
  dist->add_flag("--raw-spectra", raw, "Inputs are spectra; compare them with d-hat directly");
  dist->add_option("--metric", metric, "d or dprime");
  dist->add_option("--weight-cap", c.weight_cap, "Largest partial-isomorphism weight")->check(CLI::Range(1, 64));
  dist->add_option("--budget", c.node_budget, "Search nodes per epsilon probe");
  dist->callback([&] {
    run = [&] {
      budgets["node_budget"] = c.node_budget;
      budgets["weight_cap"] = c.weight_cap;
      const auto opts = dhat_options(c);
      gl::DistBracket b;
      if (raw) {
        b = gl::dhat(gl::io::sparse_from_json(gl::io::read_file(lhs)), gl::io::sparse_from_json(gl::io::read_file(rhs)),
                     opts);
      } else {
        const auto f1 = load_dense(lhs), f2 = load_dense(rhs);
        b = parse_metric(metric) == gl::Metric::d ? gl::d_metric(f1, f2, opts) : gl::dprime(f1, f2, opts);
      }
      result = gl::io::to_json(b);
      result["metric"] = raw ? "dhat" : metric;
    };
  });

  // density
  std::string config;
  std::vector<std::string> fn_paths;
  std::string density_method = "fourier";
  std::uint64_t samples = 0;
  auto* density = app.add_subcommand("density", "Configuration density t(L, f)");
  density->add_option("--config", config, "Builtin name (ap3, ap4, parallelogram, graph:0-1,...) or JSON file")
      ->required();
  density->add_option("--fn", fn_paths, "Function JSON; repeat once per form for distinct functions")->required();
  density->add_option("--method", density_method, "brute, fourier or mc")
      ->check(CLI::IsMember({"brute", "fourier", "mc"}));
  density->add_option("--samples,--monte-carlo", samples, "Monte Carlo samples (implies --method mc)");
  density->add_option("--seed", c.seed, "Monte Carlo seed");
  density->add_option("--budget", c.budget, "Evaluation budget");
  density->callback([&] {
    run = [&] {
      const auto L = load_config(config);
      std::vector<gl::DenseFn> fs;
      for (const auto& p : fn_paths) fs.push_back(load_dense(p));
      if (fs.size() == 1) {
        const gl::DenseFn f = fs.front();
        fs.assign(L.size(), f);
      }
      const auto opts = density_options(c);
      budgets["density_budget"] = opts.budget;
      if (samples > 0) density_method = "mc";
      result["method"] = density_method;
      result["config"] = L.name();
      if (density_method == "mc") {
        uses_seed = true;
        if (samples == 0) samples = 100000;
        const auto est = gl::density_monte_carlo(L, fs, samples, c.seed);
        result["estimate"] = true;
        result["density"] = est.mean.real();
        result["density_im"] = est.mean.imag();
        result["stderr_re"] = est.stderr_re;
        result["stderr_im"] = est.stderr_im;
        result["samples"] = est.samples;
        return;
      }
      const gl::Complex t =
          density_method == "brute" ? gl::density_brute(L, fs, opts) : gl::density_fourier(L, fs, opts);
      result["density"] = t.real();
      result["density_im"] = t.imag();
    };
  });

  // cs1
  auto* cs1 = app.add_subcommand("cs1", "Cauchy-Schwarz complexity <= 1 check");
  cs1->add_option("--config", config, "Builtin name or JSON file")->required();
  cs1->callback([&] {
    run = [&] {
      const auto r = gl::cs_complexity_at_most_1(load_config(config));
      result["per_form"] = r.per_form;
      result["cs_complexity_at_most_1"] = r.overall;
      result["cs1"] = r.overall ? "yes" : "no";
    };
  });

  // round
  int best_of = 1;
  std::optional<double> target;
  auto* round = app.add_subcommand("round", "Randomized rounding of a [0,1]-valued function");
  round->add_option("--fn", fn_path, "Function JSON")->required();
  round->add_option("--seed", c.seed, "Seed");
  round->add_option("--best-of", best_of, "Independent trials; keep the lowest U2 deviation")
      ->check(CLI::Range(1, 1 << 20));
  round->add_option("--target-density", target, "Switch zeros on until this density is reached")
      ->check(CLI::Range(0.0, 1.0));
  round->callback([&] {
    run = [&] {
      uses_seed = true;
      const gl::DenseFn f = load_dense(fn_path);
      const auto r = gl::best_of_round(f, c.seed, best_of);
      gl::DenseFn h = r.h;
      if (target) h = gl::adjust_density(h, *target, c.seed);
      result["fn"] = gl::io::to_json(h);
      result["u2_deviation"] = r.u2_deviation;
      result["stream"] = r.stream;
      result["trials"] = r.trials;
      result["mean"] = h.mean().real();
      if (target) {
        gl::DenseFn diff = f;
        for (std::size_t i = 0; i < diff.size(); ++i) diff.mutable_values()[i] -= h[i];
        result["u2_deviation_adjusted"] = gl::u2_fourier(diff);
      }
    };
  });

  // minimize / rho-curve
  gl::Int p = 0;
  double delta = 0.0;
  std::vector<double> deltas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  gl::MinimizeOptions mopts;
  std::string out_path;
  auto add_opt_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Builtin name or JSON file")->required();
    sub->add_option("--p", p, "Prime modulus")->required();
    sub->add_option("--restarts", mopts.restarts, "Random restarts besides the constant start")
        ->check(CLI::Range(0, 1 << 16));
    sub->add_option("--seed", c.seed, "Seed for random restarts");
    sub->add_option("--max-iter", mopts.max_iter, "Iterations per run");
    sub->add_option("--tol", mopts.tol, "Projected-gradient stopping tolerance");
    sub->add_flag("--allow-composite,--unsafe-group", mopts.allow_composite, "Permit composite moduli");
    sub->add_option("--budget", c.budget, "Density evaluation budget");
  };
  auto echo_minimize = [&] {
    uses_seed = true;
    mopts.seed = c.seed;
    mopts.density = density_options(c);
    budgets["density_budget"] = mopts.density.budget;
    budgets["restarts"] = mopts.restarts;
    budgets["max_iter"] = mopts.max_iter;
    budgets["tol"] = mopts.tol;
  };
  auto* minimize = app.add_subcommand("minimize", "Minimize t(L, f) over f: Z_p -> [0,1] with mean delta");
  add_opt_flags(minimize);
  minimize->add_option("--delta", delta, "Target mean")->required()->check(CLI::Range(0.0, 1.0));
  minimize->callback([&] {
    run = [&] {
      echo_minimize();
      result = gl::io::to_json(gl::minimize_density(load_config(config), p, delta, mopts));
    };
  });

  auto* rho = app.add_subcommand("rho-curve", "Minimized density over a grid of means");
  add_opt_flags(rho);
  rho->add_option("--deltas", deltas, "Grid of means")->delimiter(',');
  rho->add_option("--out", out_path, "CSV output path");
  rho->callback([&] {
    run = [&] {
      echo_minimize();
      const auto curve = gl::rho_curve(load_config(config), p, deltas, mopts);
      json pts = json::array();
      for (const auto& q : curve) {
        pts.push_back({{"delta", q.delta},
                       {"value", q.value},
                       {"monotone", q.monotone},
                       {"grad_norm", q.grad_norm},
                       {"violation", q.violation}});
      }
      result["p"] = p;
      result["curve"] = std::move(pts);
      if (!out_path.empty()) {
        write_text(out_path, gl::rho_curve_csv(curve));
        result["csv"] = out_path;
      }
    };
  });

  // hom
  std::string graph_path;
  bool verify = false;
  double tol = 1e-9;
  auto* hom = app.add_subcommand("hom", "Homomorphism density t(H, W_f) of the Cayley kernel");
  hom->add_option("--graph", graph_path, "Graph JSON")->required();
  hom->add_option("--fn", fn_path, "Function JSON")->required();
  hom->add_flag("--verify-bridge", verify, "Also compute t(L_H, f) and check equality");
  hom->add_option("--tol", tol, "Bridge tolerance");
  hom->add_option("--budget", c.budget, "Vertex-map budget");
  bool bridge_failed = false;
  hom->callback([&] {
    run = [&] {
      if (!(tol >= 0.0)) throw gl::ValidationError("bridge tolerance must be nonnegative");
      const gl::Graph H = gl::io::graph_from_json(gl::io::read_file(graph_path));
      const gl::DenseFn f = load_dense(fn_path);
      const std::uint64_t b = c.budget ? c.budget : 100'000'000ULL;
      budgets["hom_budget"] = b;
      result["hom"] = gl::io::to_json(gl::hom_density(H, gl::cayley_kernel(f), b));
      if (verify) {
        const auto rep = gl::verify_bridge(H, f, tol);
        result["bridge"] = gl::io::to_json(rep);
        bridge_failed = !rep.ok;
      }
    };
  });

  // converge
  std::string conv_metric = "d";
  double conv_tol = 0.1;
  auto* converge = app.add_subcommand("converge", "Pairwise metric table and Cauchy check for a sequence");
  converge->add_option("--fns", fn_paths, "Function (or spectrum) JSON files, in sequence order")->required();
  converge->add_option("--metric", conv_metric, "d or dprime");
  converge->add_option("--tol", conv_tol, "Cauchy tolerance");
  converge->add_option("--out", out_path, "CSV output path");
  converge->add_option("--weight-cap", c.weight_cap, "Largest partial-isomorphism weight")->check(CLI::Range(1, 64));
  converge->add_option("--budget", c.node_budget, "Search nodes per epsilon probe");
  converge->callback([&] {
    run = [&] {
      budgets["node_budget"] = c.node_budget;
      budgets["weight_cap"] = c.weight_cap;
      std::vector<json> docs;
      for (const auto& path : fn_paths) docs.push_back(gl::io::read_file(path));
      bool sparse = !docs.empty() && gl::io::is_sparse_json(docs.front());
      gl::BracketTable table;
      std::vector<double> norms;
      if (sparse) {
        std::vector<gl::SparseFn> spectra;
        for (const auto& d : docs) {
          if (!gl::io::is_sparse_json(d)) throw gl::ValidationError("mixed dense and sparse inputs");
          spectra.push_back(gl::io::sparse_from_json(d));
          norms.push_back(spectra.back().l2_norm());
        }
        table = gl::pairwise_table(spectra, dhat_options(c));
      } else {
        std::vector<gl::DenseFn> fs;
        for (const auto& d : docs) {
          fs.push_back(gl::io::dense_from_json(d));
          norms.push_back(fs.back().l2_norm());
        }
        table = gl::pairwise_table(fs, parse_metric(conv_metric), dhat_options(c));
      }
      const auto cd = gl::cauchy_detect(table, conv_tol);
      const auto tight = gl::tightness_check(table, norms, conv_tol);
      json cells = json::array();
      for (const auto& row : table) {
        json r = json::array();
        for (const auto& cell : row) {
          json j = {{"lo", cell.bracket.lo}, {"hi", cell.bracket.hi}, {"exact", cell.bracket.exact}};
          if (cell.error) j["error"] = *cell.error;
          r.push_back(std::move(j));
        }
        cells.push_back(std::move(r));
      }
      result["metric"] = sparse ? "dhat" : conv_metric;
      result["table"] = std::move(cells);
      result["cauchy"] = cd.cauchy;
      result["tail_index"] = cd.tail_index;
      result["norm_spread"] = tight.norm_spread;
      result["norm_drift"] = tight.drift_flag;
      if (!out_path.empty()) {
        write_text(out_path, gl::table_csv(table));
        result["csv"] = out_path;
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return kOk;
    std::cerr << app.help();
    return kValidation;
  }

  if (c.threads > 0) gl::set_thread_count(c.threads);
  const auto start = std::chrono::steady_clock::now();
  try {
    run();
  } catch (const gl::Error& e) {
    std::cerr << json{{"error", {{"kind", kind_name(e.kind())}, {"message", e.what()}}}}.dump() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << '\n';
    return kInternal;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  json meta = {{"version", gl::kVersion}, {"command", app.get_subcommands().front()->get_name()}};
  meta["seed"] = c.seed;
  meta["seed_used"] = uses_seed;
  meta["weight_cap"] = c.weight_cap;
  meta["budgets"] = budgets;
  meta["timing_ms"] = ms;
  result["meta"] = std::move(meta);
  std::cout << result.dump(2) << '\n';
  if (bridge_failed) {
    std::cerr << result["bridge"]["detail"].get<std::string>() << '\n';
    return kInternal;
  }
  return kOk;
}
