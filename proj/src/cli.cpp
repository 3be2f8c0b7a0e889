#include "usd/cli.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "usd/bounds.hpp"
#include "usd/sim.hpp"
#include "usd/symusd.hpp"
#include "usd/trine.hpp"

namespace usd::cli {

using nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json header(const std::string& command) { return json{{"schema", kSchemaVersion}, {"command", command}}; }

Format format_or(const RunConfig& cfg, Format fallback) { return cfg.format.value_or(fallback); }

void require_json(const RunConfig& cfg) {
  if (format_or(cfg, Format::Json) != Format::Json) {
    throw ValidationError(cfg.command + ": only --format json is supported");
  }
}

}  // namespace

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

CommandResult cmd_bounds(const RunConfig& cfg) {
  if (cfg.copies < 1 || cfg.dim < 1) throw ValidationError("bounds: --c and --d must be at least 1");
  const FeasibilityVerdict v = classify(cfg.n, static_cast<std::uint64_t>(cfg.copies), static_cast<std::uint64_t>(cfg.dim));
  if (format_or(cfg, Format::Json) == Format::Csv) {
    std::ostringstream os;
    os << "N,C,D,verdict,necessary_max,sufficient_max\n"
       << v.n << ',' << v.copies << ',' << v.dim << ',' << to_string(v.verdict) << ',' << v.necessary_max << ','
       << v.sufficient_max << '\n';
    return {kExitOk, os.str(), {}};
  }
  json j = header("bounds");
  j.update(json(v));
  return {kExitOk, dump(j), {}};
}

CommandResult cmd_lifted_curve(const RunConfig& cfg) {
  if (cfg.grid < 2) throw ValidationError("lifted-curve: --grid must be at least 2");
  const int last = cfg.grid - 1;
  if (format_or(cfg, Format::Csv) == Format::Json) {
    json rows = json::array();
    for (int i = 0; i <= last; ++i) {
      const double lambda = static_cast<double>(i) / last;
      rows.push_back({{"lambda", lambda}, {"p_max", p_max_lifted(lambda)}});
    }
    json j = header("lifted-curve");
    j["rows"] = std::move(rows);
    return {kExitOk, dump(j), {}};
  }
  std::ostringstream os;
  os << "lambda,p_max\n";
  for (int i = 0; i <= last; ++i) {
    const double lambda = static_cast<double>(i) / last;
    os << format_double(lambda) << ',' << format_double(p_max_lifted(lambda)) << '\n';
  }
  return {kExitOk, os.str(), {}};
}

CommandResult cmd_trine_table(const RunConfig& cfg) {
  if (cfg.c_max < 2) throw ValidationError("trine-table: --c-max must be at least 2");
  const bool as_json = format_or(cfg, Format::Csv) == Format::Json;
  std::ostringstream os;
  json rows = json::array();
  if (!as_json) os << "C,L_C,p_max,pairwise_p\n";
  for (int c = 1; c <= cfg.c_max; ++c) {
    const MultiTrineParams params = multitrine_params(c);
    const double pairwise = c >= 2 ? pairwise_success_analytic(c) : 0.0;
    if (as_json) {
      rows.push_back({{"C", c}, {"L_C", params.lift}, {"p_max", params.p_max}, {"pairwise_p", pairwise}});
    } else {
      os << c << ',' << format_double(params.lift) << ',' << format_double(params.p_max) << ','
         << format_double(pairwise) << '\n';
    }
  }
  if (!as_json) return {kExitOk, os.str(), {}};
  json j = header("trine-table");
  j["rows"] = std::move(rows);
  return {kExitOk, dump(j), {}};
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  require_json(cfg);
  if (cfg.copies < 2) throw ValidationError("simulate: --c must be at least 2");
  if (cfg.trials < 1) throw ValidationError("simulate: --trials must be at least 1");
  const SimOptions opts{cfg.seed, 0, cfg.threads};

  json config{{"C", cfg.copies}, {"n", cfg.trials}, {"seed", cfg.seed}, {"strategy", cfg.strategy}};
  double analytic = 0.0;
  std::optional<TrialStats> stats;
  if (cfg.strategy == "collective") {
    analytic = p_max_multitrine(cfg.copies);
    stats = run_trials(multitrine_representation(cfg.copies), collective_povm(cfg.copies), cfg.trials, opts);
  } else if (cfg.strategy == "pairwise") {
    const int used = cfg.copies - cfg.copies % 2;
    config["pairwise_copies"] = used;
    analytic = pairwise_success_analytic(used);
    stats = pairwise_strategy(used, cfg.trials, opts);
  } else {
    throw ValidationError("simulate: --strategy must be collective or pairwise");
  }

  json j = header("simulate");
  j["config"] = std::move(config);
  j.update(json(*stats));
  j["analytic_success"] = analytic;
  j["sigma"] = binomial_sigma(analytic, stats->n_trials());
  CommandResult r{kExitOk, dump(j), {}};
  if (stats->error_count() != 0) {
    r.exit_code = kExitVerification;
    r.error = "simulate: measurement produced misidentifications";
  }
  return r;
}

CommandResult cmd_witness(const RunConfig& cfg) {
  require_json(cfg);
  if (cfg.kind != "achieve" && cfg.kind != "depend") throw ValidationError("witness: kind must be achieve or depend");
  if (!(cfg.tol > 0.0)) throw ValidationError("witness: --tol must be positive");
  Rng rng(cfg.seed);
  const bool achieve = cfg.kind == "achieve";
  const StateEnsemble e =
      achieve ? achievability_witness(cfg.copies, cfg.dim, rng) : dependence_witness(cfg.copies, cfg.dim, rng);
  const StateEnsemble powers = tensor_power(e, cfg.copies);
  const std::size_t rank = li_rank(powers.states(), cfg.tol);
  const bool pass = (achieve ? rank == e.size() : rank < e.size()) && e.is_distinct(kDistinctMargin);

  json j = header("witness");
  j["kind"] = cfg.kind;
  j["C"] = cfg.copies;
  j["D"] = cfg.dim;
  j["seed"] = cfg.seed;
  j["N"] = e.size();
  j["states"] = e.states();
  j["priors"] = e.priors();
  j["tensor_rank"] = rank;
  j["expected"] = achieve ? "independent" : "dependent";
  j["verdict"] = pass ? "pass" : "fail";
  CommandResult r{pass ? kExitOk : kExitVerification, dump(j), {}};
  if (!pass) r.error = "witness: self-verification failed";
  return r;
}

CommandResult cmd_verify_povm(const RunConfig& cfg) {
  require_json(cfg);
  if (cfg.copies < 2) throw ValidationError("verify-povm: --c must be at least 2");
  if (!(cfg.tol > 0.0)) throw ValidationError("verify-povm: --tol must be positive");
  const StateEnsemble e = multitrine_representation(cfg.copies);
  const Povm m = usd_povm(e, cfg.p);
  const PovmReport report = verify_povm(m, e, cfg.tol);

  json j = header("verify-povm");
  j["C"] = cfg.copies;
  j["p"] = cfg.p;
  j["p_max"] = p_max_multitrine(cfg.copies);
  j["tol"] = cfg.tol;
  j["report"] = report;
  CommandResult r{report.passed() ? kExitOk : kExitVerification, dump(j), {}};
  if (!report.passed()) r.error = "verify-povm: measurement is not a valid zero-error POVM";
  return r;
}

CommandResult run(const RunConfig& cfg) {
  try {
    if (cfg.command == "bounds") return cmd_bounds(cfg);
    if (cfg.command == "lifted-curve") return cmd_lifted_curve(cfg);
    if (cfg.command == "trine-table") return cmd_trine_table(cfg);
    if (cfg.command == "simulate") return cmd_simulate(cfg);
    if (cfg.command == "witness") return cmd_witness(cfg);
    if (cfg.command == "verify-povm") return cmd_verify_povm(cfg);
    return {kExitValidation, {}, "unknown command: " + cfg.command};
  } catch (const std::invalid_argument& e) {
    return {kExitValidation, {}, e.what()};
  } catch (const std::overflow_error& e) {
    return {kExitValidation, {}, e.what()};
  } catch (const WitnessError& e) {
    return {kExitVerification, {}, e.what()};
  } catch (const InvalidPovmError& e) {
    return {kExitVerification, {}, e.what()};
  } catch (const InvariantViolation& e) {
    return {kExitVerification, {}, e.what()};
  }
}

bool write_output(const RunConfig& cfg, const CommandResult& result) {
  if (!cfg.out) return true;
  std::ofstream file(*cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) return false;
  file << result.output;
  return static_cast<bool>(file.flush());
}

}  // namespace usd::cli
