#include "specfield/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "specfield/blocking.hpp"
#include "specfield/error.hpp"
#include "specfield/frequencies.hpp"
#include "specfield/kernels.hpp"
#include "specfield/mixing.hpp"
#include "specfield/periodogram.hpp"
#include "specfield/serialize.hpp"
#include "specfield/spectral.hpp"
#include "specfield/stats.hpp"

#ifndef SPECFIELD_VERSION
#define SPECFIELD_VERSION "dev"
#endif

namespace specfield::cli {

namespace {

using io::json;

constexpr std::array kSubcommands = {"kernels",     "periodogram",   "expectation",   "covariance",
                                     "clt-experiment", "miller",     "blocking-plan", "negligibility",
                                     "mixing-estimate"};

std::string usage() {
  std::ostringstream os;
  os << "usage: specfield <subcommand> [options]\n\nsubcommands:\n";
  for (const auto* name : kSubcommands) os << "  " << name << '\n';
  os << "\nRun 'specfield <subcommand> --help' for options. SPECFIELD_THREADS sets the worker count.\n";
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

void emit(const json& j, const std::optional<std::string>& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path && !path->empty()) {
    write_text(*path, text);
  } else {
    out << text;
  }
}

Frequency parse_frequency(const std::string& s) { return Frequency(io::parse_real_list(s)); }
BoxDims parse_dims(const std::string& s) { return BoxDims(io::parse_int_list(s)); }

std::vector<BoxDims> parse_dims_sequence(const std::string& s) {
  std::vector<BoxDims> seq;
  std::stringstream ss(s);
  std::string token;
  while (std::getline(ss, token, ';')) seq.push_back(parse_dims(token));
  validate_dims_sequence(seq);
  return seq;
}

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::vector<BoxDims> config_dims_list(const io::ExperimentConfig& cfg) {
  if (!cfg.dims_sequence.empty()) return cfg.dims_sequence;
  return {*cfg.dims};
}

std::string resolve_out(const std::string& flag, const std::optional<std::string>& from_config) {
  if (!flag.empty()) return flag;
  return from_config.value_or("");
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << usage();
    return kExitUsage;
  }
  const std::string& first = args.front();
  if (first == "--help" || first == "-h") {
    out << usage();
    return kExitOk;
  }
  if (first == "--version") {
    out << "specfield " << SPECFIELD_VERSION << " (C++" << __cplusplus / 100 % 100 << ", " << __VERSION__ << ")\n";
    return kExitOk;
  }
  if (std::find(kSubcommands.begin(), kSubcommands.end(), first) == kSubcommands.end()) {
    err << "unknown subcommand '" << first << "'\n" << usage();
    return kExitUsage;
  }

  CLI::App app{"Periodograms of stationary random fields", "specfield"};
  app.require_subcommand(1);

  // kernels
  double alpha = 0.0;
  std::int64_t order = 1;
  auto* kernels_cmd = app.add_subcommand("kernels", "Fejer and modulated Dirichlet kernels");
  kernels_cmd->add_option("--alpha", alpha, "angle")->required();
  kernels_cmd->add_option("--n", order, "order")->required();

  // periodogram
  std::string spec_path, dims_text, shift_text;
  std::vector<std::string> freq_texts;
  std::uint64_t seed = 0;
  auto* per_cmd = app.add_subcommand("periodogram", "S and I of one generated sample");
  per_cmd->add_option("--spec", spec_path, "field spec JSON")->required();
  per_cmd->add_option("--dims", dims_text, "box sides, e.g. 32,32")->required();
  per_cmd->add_option("--freq", freq_texts, "frequency, e.g. 1.5708,1.5708 (repeatable)")->required();
  per_cmd->add_option("--seed", seed, "master seed");
  per_cmd->add_option("--shift", shift_text, "box shift w");

  // expectation
  std::size_t quadrature = 0, grid = 128;
  std::string dims_seq_text, report_path;
  auto* exp_cmd = app.add_subcommand("expectation", "E I exactly, by quadrature, or as a uniform-convergence report");
  exp_cmd->add_option("--spec", spec_path, "field spec JSON")->required();
  exp_cmd->add_option("--dims", dims_text, "box sides");
  exp_cmd->add_option("--freq", freq_texts, "frequency");
  exp_cmd->add_option("--quadrature", quadrature, "grid points per dimension for the quadrature route");
  exp_cmd->add_option("--dims-sequence", dims_seq_text, "semicolon-separated dims, e.g. 8;16;32");
  exp_cmd->add_option("--grid", grid, "lambda grid size per dimension for the report");
  exp_cmd->add_option("--report", report_path, "CSV output path for the report (default stdout)");

  // covariance
  std::string mu_text;
  auto* cov_cmd = app.add_subcommand("covariance", "E[S^l conj S^m]/V and E[S^l S^m]/V");
  cov_cmd->add_option("--spec", spec_path, "field spec JSON")->required();
  cov_cmd->add_option("--dims", dims_text, "box sides")->required();
  cov_cmd->add_option("--freq", freq_texts, "lambda")->required();
  cov_cmd->add_option("--freq2", mu_text, "mu")->required();

  // config-driven experiments
  std::string config_path, out_path, csv_path;
  auto* clt_cmd = app.add_subcommand("clt-experiment", "Monte Carlo CLT report");
  clt_cmd->add_option("--config", config_path, "experiment config JSON")->required();
  clt_cmd->add_option("--out", out_path, "report JSON path");
  clt_cmd->add_option("--csv", csv_path, "per-replication CSV path");
  auto* miller_cmd = app.add_subcommand("miller", "second-moment discrepancy of the G functional");
  miller_cmd->add_option("--config", config_path, "experiment config JSON")->required();
  miller_cmd->add_option("--out", out_path, "table JSON path");
  auto* negl_cmd = app.add_subcommand("negligibility", "leftover and tail second moments");
  negl_cmd->add_option("--config", config_path, "experiment config JSON")->required();
  negl_cmd->add_option("--out", out_path, "table JSON path");

  // blocking-plan
  std::int64_t v1 = 0;
  std::string profile_path;
  double q = 0.2;
  auto* plan_cmd = app.add_subcommand("blocking-plan", "Bernstein blocking plan and cardinalities");
  plan_cmd->add_option("--v1", v1, "first box side")->required();
  plan_cmd->add_option("--profile", profile_path, "mixing profile JSON")->required();
  plan_cmd->add_option("--q", q, "truncation exponent in (0, 1/4)");
  plan_cmd->add_option("--dims", dims_text, "full box sides (default: v1 only)");

  // mixing-estimate
  std::int64_t window = 3, n_max = 5;
  std::size_t set_size = 2;
  auto* mix_cmd = app.add_subcommand("mixing-estimate", "lower bounds on rho'(n) by canonical correlations");
  mix_cmd->add_option("--spec", spec_path, "field spec JSON")->required();
  mix_cmd->add_option("--window", window, "window radius");
  mix_cmd->add_option("--set-size", set_size, "max |S|, |T|");
  mix_cmd->add_option("--n-max", n_max, "largest separation");
  mix_cmd->add_option("--out", out_path, "profile JSON path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (kernels_cmd->parsed()) {
      const cplx dk = kernels::dirichlet_mod(alpha, order);
      emit({{"alpha", alpha}, {"n", order}, {"fejer", kernels::fejer(alpha, order)},
            {"dirichlet", complex_json(dk)}, {"dirichlet_abs2", std::norm(dk)}},
           std::nullopt, out);
    } else if (per_cmd->parsed()) {
      const auto spec = io::spec_from_json(io::read_json_file(spec_path));
      const auto dims = parse_dims(dims_text);
      Lag shift(dims.dim(), 0);
      if (!shift_text.empty()) shift = io::parse_int_list(shift_text);
      std::vector<Frequency> freqs;
      for (const auto& t : freq_texts) freqs.push_back(parse_frequency(t));
      const auto sample = generate(spec, dims, shift, seed);
      json rows = json::array();
      for (const auto& e : periodogram_vector(sample, freqs)) rows.push_back({{"S", complex_json(e.sum)}, {"I", e.value}});
      json result = {{"dims", dims.sides()}, {"seed", seed}, {"entries", rows}};
      if (rows.size() == 1) {
        result["S"] = rows[0]["S"];
        result["I"] = rows[0]["I"];
      }
      emit(result, std::nullopt, out);
    } else if (exp_cmd->parsed()) {
      const auto spec = io::spec_from_json(io::read_json_file(spec_path));
      if (!dims_seq_text.empty()) {
        const auto seq = parse_dims_sequence(dims_seq_text);
        const auto report = spectral::uniform_convergence_report(spec, seq, grid);
        if (report_path.empty()) {
          spectral::write_report_csv(out, report);
        } else {
          std::ofstream f(report_path);
          if (!f) throw ValidationError("cannot write " + report_path);
          spectral::write_report_csv(f, report);
        }
      } else {
        if (dims_text.empty() || freq_texts.size() != 1) {
          throw ValidationError("expectation needs --dims and exactly one --freq, or --dims-sequence");
        }
        const auto dims = parse_dims(dims_text);
        const auto lambda = parse_frequency(freq_texts.front());
        json result = {{"dims", dims.sides()}, {"freq", lambda.coords()},
                       {"f", spectral_density(spec, lambda)},
                       {"exact", spectral::expected_periodogram_exact(spec, lambda, dims)}};
        if (quadrature > 0) {
          result["quadrature"] = spectral::expected_periodogram_quadrature(spec, lambda, dims, quadrature);
        }
        emit(result, std::nullopt, out);
      }
    } else if (cov_cmd->parsed()) {
      if (freq_texts.size() != 1) throw ValidationError("covariance needs exactly one --freq");
      const auto spec = io::spec_from_json(io::read_json_file(spec_path));
      const auto dims = parse_dims(dims_text);
      const auto lambda = parse_frequency(freq_texts.front());
      const auto mu = parse_frequency(mu_text);
      emit({{"dims", dims.sides()}, {"lambda", lambda.coords()}, {"mu", mu.coords()},
            {"covariance_of_sums", complex_json(spectral::covariance_of_sums(spec, lambda, mu, dims))},
            {"product_of_sums", complex_json(spectral::product_of_sums(spec, lambda, mu, dims))}},
           std::nullopt, out);
    } else if (clt_cmd->parsed()) {
      const auto cfg = io::config_from_json(io::read_json_file(config_path));
      const auto dims_list = config_dims_list(cfg);
      const auto scheme = build_scheme(cfg.scheme, dims_list);
      const auto report = stats::run_clt_experiment(cfg.spec, scheme, dims_list.back(), cfg.replications, cfg.seed);
      emit(io::to_json(report), resolve_out(out_path, cfg.out), out);
      const auto csv = resolve_out(csv_path, cfg.csv);
      if (!csv.empty()) {
        std::ofstream f(csv);
        if (!f) throw ValidationError("cannot write " + csv);
        io::write_clt_csv(f, report);
      }
    } else if (miller_cmd->parsed()) {
      const auto cfg = io::config_from_json(io::read_json_file(config_path));
      const auto scheme = build_scheme(cfg.scheme, config_dims_list(cfg));
      const auto bv = cfg.weights.value_or(stats::WeightVector::ones(cfg.scheme.m));
      const auto rows = stats::miller_check(cfg.spec, scheme, bv, cfg.replications, cfg.seed);
      emit(io::to_json(rows), resolve_out(out_path, cfg.out), out);
    } else if (negl_cmd->parsed()) {
      const auto cfg = io::config_from_json(io::read_json_file(config_path));
      blocking::NegligibilityConfig nc{cfg.scheme,
                                       config_dims_list(cfg),
                                       cfg.q,
                                       cfg.weights.value_or(stats::WeightVector::ones(cfg.scheme.m)),
                                       cfg.profile.value_or(blocking::MixingProfile::m_dependent(cfg.spec.dependence_range())),
                                       cfg.replications,
                                       cfg.seed};
      emit(io::to_json(blocking::negligibility_report(cfg.spec, nc)), resolve_out(out_path, cfg.out), out);
    } else if (plan_cmd->parsed()) {
      const auto profile = io::profile_from_json(io::read_json_file(profile_path));
      const auto bplan = blocking::plan(v1, profile, q);
      const BoxDims dims = dims_text.empty() ? BoxDims({v1}) : parse_dims(dims_text);
      emit(io::to_json(bplan, blocking::block_index_sets(bplan, dims)), std::nullopt, out);
    } else if (mix_cmd->parsed()) {
      const auto spec = io::spec_from_json(io::read_json_file(spec_path));
      const auto est = mixing::rho_prime_profile(spec, window, set_size, n_max);
      emit(io::to_json(est), out_path.empty() ? std::nullopt : std::optional(out_path), out);
    }
  } catch (const InternalConsistencyError& e) {
    err << "internal consistency error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const io::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace specfield::cli
