#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "randfun/covariance.hpp"
#include "randfun/experiments_analytic.hpp"
#include "randfun/experiments_zeros.hpp"
#include "randfun/growth.hpp"
#include "randfun/plot.hpp"
#include "randfun/report.hpp"
#include "randfun/sampling.hpp"
#include "randfun/zeros.hpp"

namespace randfun::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) { return plot::split(s, sep); }

inline double parse_number(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError(key, "'" + s + "' is not a number");
}

/// gef | gamma[:alpha] | gauss[:alpha] | lacunary | list:a0,a1,... |
/// holeblocks:a,b,M | unitdisk[:kappa]. --alpha supplies or overrides the
/// parameter of gamma, gauss and unitdisk.
inline CoefficientSequence parse_sequence(const std::string& spec, std::optional<double> alpha) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto param = [&]() {
    if (alpha) return *alpha;
    if (arg.empty()) throw CLI::ValidationError("--seq", spec + " needs a parameter (e.g. " + kind + ":0.5 or --alpha)");
    return parse_number("--seq", arg);
  };
  try {
    if (kind == "gef") return CoefficientSequence::gef();
    if (kind == "gamma") return CoefficientSequence::gamma_type(param());
    if (kind == "gauss") return CoefficientSequence::gauss_squared(param());
    if (kind == "unitdisk") return CoefficientSequence::unit_disk(param());
    if (kind == "lacunary") return CoefficientSequence::lacunary();
    if (kind == "list") {
      std::vector<double> v;
      for (const auto& x : split(arg, ',')) v.push_back(parse_number("--seq", x));
      return CoefficientSequence::explicit_list(v);
    }
    if (kind == "holeblocks") {
      const auto p = split(arg, ',');
      if (p.size() != 3) throw CLI::ValidationError("--seq", "holeblocks needs a,b,M");
      return CoefficientSequence::hole_blocks(parse_number("--seq", p[0]), parse_number("--seq", p[1]),
                                              static_cast<int>(parse_number("--seq", p[2])));
    }
  } catch (const Error& e) {
    throw CLI::ValidationError("--seq", e.what());
  }
  throw CLI::ValidationError("--seq", "unknown sequence '" + spec + "'");
}

inline EnsembleSpec parse_ensemble(const std::string& name, std::uint64_t seed) {
  if (name == "gaussian") return EnsembleSpec::gaussian(seed);
  if (name == "rademacher") return EnsembleSpec::rademacher(seed);
  if (name == "steinhaus") return EnsembleSpec::steinhaus(seed);
  throw CLI::ValidationError("--ensemble", "unknown ensemble '" + name + "'");
}

/// "re" or "re,im".
inline cplx parse_complex(const std::string& key, const std::string& s) {
  const auto p = split(s, ',');
  if (p.size() == 1) return {parse_number(key, p[0]), 0.0};
  if (p.size() == 2) return {parse_number(key, p[0]), parse_number(key, p[1])};
  throw CLI::ValidationError(key, "'" + s + "' is not re or re,im");
}

inline const CLI::Validator kPositive{[](std::string& v) -> std::string {
  try {
    if (std::stod(v) > 0) return {};
  } catch (const std::exception&) {
  }
  return "must be a positive number, got " + v;
}, "POSITIVE"};

}  // namespace detail

// All flags; each subcommand registers the subset it uses.
struct Options {
  std::string seq = "gef";
  std::optional<double> alpha;
  std::string ensemble = "gaussian";
  std::optional<double> r;
  std::vector<double> r_grid;
  std::optional<std::int64_t> trials;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = "randfun_out";
  bool emit_plots = false;
  double tol_tail = 1e-12;
  double eta = kDefaultEta;

  std::int64_t sectors = 8;
  double eps = 0.05;
  std::int64_t k = 6;
  std::int64_t patterns = 8;
  std::int64_t points = 5;
  std::int64_t m_max = 3;
  std::int64_t k_signs = 10;
  bool explore = false;
  std::int64_t attempts = 10000;
  std::int64_t n_points = 16;
  bool omega = false;
  std::int64_t conditioned = 1000;
  std::int64_t profile_k = 32;
  std::vector<double> q_list{1, 2};
  std::vector<double> p_list{2, 4, 8};
  std::int64_t dim = 64;
  std::int64_t vectors = 4;
  std::int64_t n_freq = 2;
  std::string b_list = "0,0;1,1";
  std::int64_t degree = 80;
  bool all_plus = false;
  std::string beta = "1";
  std::int64_t n_max = 400;
  std::vector<std::int64_t> N_list{1, 2, 3, 4, 5};

  RunOptions run() const { return {seed, threads, tol_tail, eta}; }
  std::vector<double> grid_or(std::vector<double> fallback) const {
    if (!r_grid.empty()) return r_grid;
    if (r) return {*r};
    return fallback;
  }
  double r_or(double fallback) const { return r.value_or(fallback); }
  std::int64_t trials_or(std::int64_t fallback) const { return trials.value_or(fallback); }
};

namespace detail {

// The run configuration echoed into reports: every flag of the subcommand
// except the ones that cannot change results.
inline ojson echo_options(const CLI::App* sub) {
  ojson j = ojson::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "out" || name == "threads" || name == "emit-plots" || name == "config") continue;
    if (opt->count() > 0) {
      std::string joined;
      for (const auto& v : opt->results()) joined += (joined.empty() ? "" : ",") + v;
      j[name] = joined;
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

inline ExperimentReport growth_report(const Options& o) {
  const auto seq = parse_sequence(o.seq, o.alpha);
  const auto grid = o.grid_or({2.0});
  ExperimentReport rep;
  rep.name = "growth";
  rep.seed = o.seed;
  rep.columns = {"r", "log_sigma2", "s", "edelman_kostlan", "S", "n", "m", "delta", "S_over_r4", "hayman_ok"};
  for (double r : grid) {
    if (!(r > 0)) throw CLI::ValidationError("--r", "radius must be positive");
    const auto g = growth_profile(seq, r, o.eta);
    rep.add_row({r, 2 * g.log_sigma, g.s, edelman_kostlan(seq, r), g.S, g.n_count, g.m_weight, g.delta,
                 g.S / std::pow(r, 4), hayman_window(seq, r, o.eta)});
    if (grid.size() == 1) {
      rep.summary["S"] = g.S;
      rep.summary["n"] = g.n_count;
      rep.summary["m"] = g.m_weight;
      rep.summary["s"] = g.s;
      rep.summary["sigma"] = g.sigma;
      rep.summary["delta"] = g.delta;
      rep.summary["N"] = g.N_set;
    }
  }
  return rep;
}

inline ExperimentReport sample_report(const Options& o) {
  const auto seq = parse_sequence(o.seq, o.alpha);
  const auto ens = parse_ensemble(o.ensemble, o.seed);
  const double r = o.r_or(2.0);
  if (!(r > 0)) throw CLI::ValidationError("--r", "radius must be positive");
  ExperimentReport rep;
  rep.name = "sample";
  rep.seed = o.seed;
  rep.columns = {"trial_id", "n", "re", "im"};
  ojson samples = ojson::array();
  for (std::int64_t t = 0; t < o.trials_or(1); ++t) {
    const auto s = sample(seq, ens, r, o.tol_tail, static_cast<std::uint64_t>(t));
    const auto c = s.coeffs();
    for (std::size_t n = 0; n < c.size(); ++n) rep.add_row({t, n, c[n].real(), c[n].imag()});
    samples.push_back(to_json(s));
  }
  rep.summary["samples"] = samples;
  return rep;
}

inline ExperimentReport zeros_report(const Options& o) {
  const auto seq = parse_sequence(o.seq, o.alpha);
  const auto ens = parse_ensemble(o.ensemble, o.seed);
  const double r = o.r_or(2.0);
  if (!(r > 0)) throw CLI::ValidationError("--r", "radius must be positive");
  ExperimentReport rep;
  rep.name = "zeros";
  rep.seed = o.seed;
  rep.columns = {"trial_id", "re", "im", "modulus", "multiplicity", "method"};
  ojson per = ojson::array();
  bool agree = true;
  for (std::int64_t t = 0; t < o.trials_or(1); ++t) {
    const auto s = sample(seq, ens, r, o.tol_tail, static_cast<std::uint64_t>(t));
    const auto zs = find_zeros_disk(s, r);
    const auto ap = argument_principle_count(s, r);
    for (const auto& root : zs.roots) {
      rep.add_row({t, root.z.real(), root.z.imag(), std::abs(root.z), root.multiplicity, to_string(zs.method)});
    }
    ojson e = {{"trial_id", t}, {"count", zs.count()}, {"argument_principle", ap}, {"residual", zs.residual},
               {"boundary_flags", zs.boundary_flags.size()}, {"multiplicity_warning", zs.multiplicity_warning}};
    if (s.constant_term() != cplx{}) {
      e["jensen_quadrature"] = jensen_N(s, r);
      e["jensen_roots"] = jensen_from_roots(zs);
    }
    agree = agree && ap == zs.count();
    per.push_back(e);
  }
  rep.summary["radius"] = r;
  rep.summary["trials"] = per;
  rep.summary["methods_agree"] = agree;
  rep.passed = agree;
  return rep;
}

inline ExperimentReport covariance_report(const Options& o) {
  const auto seq = parse_sequence(o.seq, o.alpha);
  const double r = o.r_or(2.0);
  if (!(r > 0)) throw CLI::ValidationError("--r", "radius must be positive");
  ExperimentReport rep;
  rep.name = "covariance";
  rep.seed = o.seed;
  rep.columns = {"j", "angle"};
  const auto d = det_sigma_lower_check(seq, r, o.attempts, o.seed);
  for (std::size_t j = 0; j < d.angles.size(); ++j) rep.add_row({j, d.angles[j]});
  rep.top_level = to_json(d);
  auto lam = circulant_eigenvalues(seq, r, o.n_points);
  const auto cov = build_covariance(seq, CircleConfiguration::equispaced(r, static_cast<std::size_t>(o.n_points)));
  auto dense = dense_eigenvalues(cov.entries());
  std::sort(lam.begin(), lam.end());
  double worst = 0;
  for (std::size_t i = 0; i < lam.size(); ++i) worst = std::max(worst, std::abs(lam[i] - dense[i]) / lam.back());
  rep.summary["circulant_vs_dense_max_rel"] = worst;
  try {
    const auto b = hole_bound_pair(seq, r);
    rep.summary["hole_bounds"] = {{"S", b.S}, {"upper", b.upper}, {"lower", b.lower}, {"hayman_ok", b.hayman_ok}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooFewDominantTerms) throw;
    rep.summary["hole_bounds"] = nullptr;
  }
  rep.passed = d.ok && worst < 1e-9;
  return rep;
}

inline std::vector<cplx> parse_b_list(const std::string& s) {
  std::vector<cplx> out;
  for (const auto& item : split(s, ';')) out.push_back(parse_complex("--b-list", item));
  return out;
}

inline void emit_plots(const std::string& cmd, const std::filesystem::path& dir, const ExperimentReport& rep,
                       double radius, std::ostream& err) {
  try {
    if (cmd == "zeros") plot::zeros_scatter(dir / "zeros.csv", radius, dir / "zeros.svg");
    if (cmd == "growth") plot::growth_curve(dir / "growth.csv", dir / "growth.svg");
    if (cmd == "sectors") plot::sector_histogram(dir / "sectors.csv", dir / "sectors.svg");
    if (cmd == "hole" && rep.name == "hole") plot::hole_overlay(dir / "hole_radii.csv", dir / "hole.svg");
  } catch (const std::exception& e) {
    err << "warning: plot skipped: " << e.what() << '\n';
  }
}

}  // namespace detail

/// Entry point of the command-line tool. Returns 0 when the run passes its
/// checks, 2 when a check fails and 1 on usage or configuration errors.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Random Taylor series: growth, zeros, hole probabilities and covariance checks"};
  app.set_config("--config", "", "key = value file; [subcommand] sections; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);
  Options o;
  std::map<std::string, std::function<ExperimentReport()>> actions;

  auto common = [&](CLI::App* sub, bool randomness) {
    sub->add_option("--seq", o.seq, "gef | gamma:a | gauss:a | lacunary | list:a0,a1,.. | holeblocks:a,b,M | unitdisk:k")
        ->capture_default_str();
    sub->add_option("--alpha", o.alpha, "parameter for gamma, gauss, unitdisk and realzeros");
    sub->add_option("--r", o.r, "radius")->check(detail::kPositive);
    sub->add_option("--r-grid", o.r_grid, "radii, comma separated")->delimiter(',')->check(detail::kPositive);
    sub->add_option("--eta", o.eta, "exponent of delta = m^-eta")->capture_default_str()->check(CLI::Range(1e-9, 0.25));
    sub->add_option("--out", o.out, "output directory (RANDFUN_OUT overrides)")->capture_default_str();
    sub->add_flag("--emit-plots", o.emit_plots, "write SVG plots next to the CSV files");
    if (randomness) {
      sub->add_option("--ensemble", o.ensemble, "gaussian | rademacher | steinhaus")->capture_default_str();
      sub->add_option("--trials", o.trials, "number of trials")->check(detail::kPositive);
      sub->add_option("--seed", o.seed, "64-bit seed")->capture_default_str();
      sub->add_option("--threads", o.threads, "worker threads (results do not depend on it)")
          ->capture_default_str()
          ->check(CLI::Range(1, 1024));
      sub->add_option("--tol-tail", o.tol_tail, "certified truncation tail")->capture_default_str()->check(detail::kPositive);
    }
  };
  auto add = [&](const std::string& name, const std::string& help, bool randomness,
                 std::function<ExperimentReport()> act) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->configurable();
    common(sub, randomness);
    actions[name] = std::move(act);
    return sub;
  };

  add("growth", "growth functionals sigma, s, S, n, m at --r or over --r-grid", false,
      [&] { return detail::growth_report(o); });
  add("sample", "draw truncated series samples", true, [&] { return detail::sample_report(o); });
  add("zeros", "zeros in |z| <= r by root finding, cross-checked by the argument principle", true,
      [&] { return detail::zeros_report(o); });
  auto* hole = add("hole", "hole probability Monte Carlo (or --omega for the Omega_r soundness run)", true, [&] {
    const auto seq = detail::parse_sequence(o.seq, o.alpha);
    if (o.omega) return exp_omega_soundness(seq, o.r_or(2.0), o.trials_or(10000), o.conditioned, o.run());
    return exp_hole_mc(seq, o.grid_or({0.25, 0.5, 0.75, 1.0}), o.trials_or(10000), o.run());
  });
  hole->add_flag("--omega", o.omega, "check that Omega_r forces a zero-free disk");
  hole->add_option("--conditioned", o.conditioned, "samples drawn conditioned on Omega_r")->capture_default_str();
  auto* sectors = add("sectors", "sector equidistribution of zeros", true, [&] {
    return exp_equidistribution(detail::parse_sequence(o.seq, o.alpha), detail::parse_ensemble(o.ensemble, o.seed),
                                o.grid_or({2, 4, 6}), o.sectors, o.trials_or(300), o.eps, o.run());
  });
  sectors->add_option("--sectors", o.sectors, "number of equal sectors")->capture_default_str()->check(detail::kPositive);
  sectors->add_option("--eps", o.eps, "epsilon in the s^(3/4+eps) normalisation")->capture_default_str();
  add("concentration", "zero counts n_f(r) against s_f(r)", true, [&] {
    return exp_zero_concentration(detail::parse_sequence(o.seq, o.alpha), detail::parse_ensemble(o.ensemble, o.seed),
                                  o.grid_or({2, 4, 6}), o.trials_or(500), o.run());
  });
  auto* lac = add("lacunary", "zero counts of the lacunary series around |z| = e^k", true,
                  [&] { return exp_lacunary_discrepancy(o.k, o.patterns, o.points, o.run()); });
  lac->add_option("--k", o.k, "window centre exponent (5..7)")->capture_default_str();
  lac->add_option("--patterns", o.patterns, "sign patterns (the first is all +1)")->capture_default_str();
  lac->add_option("--points", o.points, "interior points per window")->capture_default_str();
  auto* real = add("realzeros", "real zeros of sum xi_k exp(-alpha k^2) z^k", true, [&] {
    return exp_real_zeros(o.alpha.value_or(1.1), o.m_max, o.k_signs, !o.explore, o.run());
  });
  real->add_option("--m-max", o.m_max, "largest disk index m")->capture_default_str();
  real->add_option("--k-signs", o.k_signs, "coefficients whose signs are enumerated")->capture_default_str();
  real->add_flag("--explore", o.explore, "exploratory run, nothing asserted (alpha may be below log 3)");
  auto* cov = add("covariance", "determinant, eigenvalue and hole-bound checks", true,
                  [&] { return detail::covariance_report(o); });
  cov->add_option("--attempts", o.attempts, "random configurations tried")->capture_default_str();
  cov->add_option("--n-points", o.n_points, "points for the circulant eigenvalue check")->capture_default_str();
  auto* mom = add("moments", "log-integrability moments of Rademacher Fourier series", true, [&] {
    return exp_log_moments(flat_profile(o.profile_k), o.q_list, o.trials_or(1000), o.run());
  });
  mom->add_option("--profile-k", o.profile_k, "flat profile on |n| < K")->capture_default_str();
  mom->add_option("--q-list", o.q_list, "moment orders")->delimiter(',')->capture_default_str();
  auto* kh = add("khinchin", "Khinchin ratios for linear and bilinear Rademacher forms", true,
                 [&] { return exp_khinchin(o.p_list, o.dim, o.trials_or(10000), o.vectors, o.run()); });
  kh->add_option("--p-list", o.p_list, "moment orders")->delimiter(',')->capture_default_str();
  kh->add_option("--dim", o.dim, "dimension")->capture_default_str();
  kh->add_option("--vectors", o.vectors, "random coefficient vectors")->capture_default_str();
  auto* tu = add("turan", "Turan-type sup comparison diagnostic", true,
                 [&] { return exp_turan_diagnostic(o.n_freq, o.trials_or(1000), false, 4096, o.run()); });
  tu->add_option("--n-freq", o.n_freq, "frequencies per exponential polynomial")->capture_default_str();
  auto* ka = add("kahane", "sum of (1 - |w|) over solutions of F(w) = b", true, [&] {
    const auto seq = o.seq == "gef" ? CoefficientSequence::unit_disk(0.5) : detail::parse_sequence(o.seq, o.alpha);
    return exp_kahane_range(seq, o.grid_or({0.9, 0.99}), detail::parse_b_list(o.b_list), o.trials_or(5), o.run());
  });
  ka->add_option("--b-list", o.b_list, "targets re,im separated by ';'")->capture_default_str();
  auto* ce = add("counterexample", "smallest zero of Rademacher series with GEF magnitudes", true,
                 [&] { return exp_counterexample_r0(o.trials_or(1000), o.degree, o.all_plus, o.run()); });
  ce->add_option("--degree", o.degree, "truncation degree")->capture_default_str();
  ce->add_flag("--all-plus", o.all_plus, "use the all +1 sign pattern");
  auto* as = add("asymptotics", "coefficients of exp(z^2/2 + beta z)", false, [&] {
    return exp_coeff_asymptotics(detail::parse_complex("--beta", o.beta), o.n_max, o.run());
  });
  as->add_option("--beta", o.beta, "beta as re or re,im")->capture_default_str();
  as->add_option("--n-max", o.n_max, "largest n")->capture_default_str();
  auto* gn = add("gn", "g_N = sin(2 pi theta)^(2N) sharpness checks", false,
                 [&] { return exp_gN_sharpness(o.N_list, o.run()); });
  gn->add_option("--N-list", o.N_list, "values of N")->delimiter(',')->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  const CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  ExperimentReport rep;
  try {
    rep = actions.at(cmd)();
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  rep.config["command"] = cmd;
  rep.config["run"] = detail::echo_options(sub);
  std::filesystem::path dir = o.out;
  if (const char* env = std::getenv("RANDFUN_OUT"); env && *env) dir = env;
  try {
    for (const auto& p : rep.write_files(dir)) err << "wrote " << p.string() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (o.emit_plots) detail::emit_plots(cmd, dir, rep, o.r_or(2.0), err);
  out << rep.summary_json().dump(2) << '\n';
  if (rep.exploratory) return kExitPass;
  return rep.passed ? kExitPass : kExitFail;
}

}  // namespace randfun::cli
