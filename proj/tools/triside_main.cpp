// Command-line front end: generate instances, construct equilibria, verify
// certificates, and compute optimal welfare. Exit codes: 0 success,
// 1 verification failed, 2 input error, 3 no equilibrium of the requested
// kind exists, 4 resource cap exceeded, 70 internal invariant broken.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "triside/certificate_io.hpp"
#include "triside/equilibrium.hpp"
#include "triside/errors.hpp"
#include "triside/instances.hpp"
#include "triside/market_io.hpp"
#include "triside/rational.hpp"
#include "triside/welfare.hpp"

namespace {

using nlohmann::json;
using namespace triside;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNoEquilibrium = 3;
constexpr int kExitCapExceeded = 4;
constexpr int kExitInternal = 70;

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot read file " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

// Writes via a sibling temp file plus rename so readers never observe a
// half-written artifact.
void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string temp = path + ".tmp~";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError("cannot write file " + temp);
    file << content;
    file.flush();
    if (!file) throw InputError("cannot write file " + temp);
  }
  if (std::rename(temp.c_str(), path.c_str()) != 0) {
    std::remove(temp.c_str());
    throw InputError("cannot move " + temp + " into place at " + path);
  }
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(elapsed).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// `--cap` beats the TRISIDE_BRUTE_CAP environment variable beats the default.
int resolve_cap(const CLI::Option* option, int flag_value) {
  if (option->count() > 0) return flag_value;
  if (const char* env = std::getenv("TRISIDE_BRUTE_CAP")) {
    try {
      size_t used = 0;
      int value = std::stoi(env, &used);
      if (used != std::string(env).size() || value < 1) throw std::invalid_argument("");
      return value;
    } catch (const std::exception&) {
      throw InputError("TRISIDE_BRUTE_CAP must be a positive integer");
    }
  }
  return flag_value;
}

json market_digest(const std::string& path, const Market& market) {
  return {{"file", path},
          {"buyers", market.num_buyers()},
          {"stores", market.num_stores()},
          {"couriers", market.num_couriers()},
          {"structure", cost_kind_tag(detect_cost_structure(market).kind)},
          {"store_costs", market.has_store_costs()}};
}

json make_report(const std::string& command, const json& digest, json results,
                 json violations, double ms) {
  json report;
  report["schema"] = "triside-report/1";
  report["command"] = command;
  report["market"] = digest;
  report["results"] = std::move(results);
  if (!violations.empty()) report["violations"] = std::move(violations);
  report["timing_ms"] = ms;
  return report;
}

std::string pretty_value(const json& value) {
  if (value.is_string()) {
    std::string text = value.get<std::string>();
    if (auto rational = rat_from_string(text); rational && rational->get_den() != 1) {
      char approx[64];
      std::snprintf(approx, sizeof approx, "%.6g", rat_to_double(*rational));
      return text + "  (~ " + approx + ")";
    }
    return text;
  }
  if (value.is_boolean()) return value.get<bool>() ? "yes" : "no";
  return value.dump();
}

std::string plural(int count, const char* noun) {
  return std::to_string(count) + " " + noun + (count == 1 ? "" : "s");
}

// The table prints exactly the data carried by the JSON report; decimal
// approximations of non-integer rationals are marked with "~".
void print_human(const json& report) {
  std::cout << "command: " << report["command"].get<std::string>() << "\n";
  const json& digest = report["market"];
  std::cout << "market: " << digest["file"].get<std::string>() << " — "
            << plural(digest["buyers"].get<int>(), "buyer") << ", "
            << plural(digest["stores"].get<int>(), "store") << ", "
            << plural(digest["couriers"].get<int>(), "courier")
            << "; costs: " << digest["structure"].get<std::string>();
  if (digest["store_costs"].get<bool>()) std::cout << "; store costs present";
  std::cout << "\n";
  for (const auto& [key, value] : report["results"].items())
    std::cout << key << ": " << pretty_value(value) << "\n";
  if (report.contains("violations")) {
    std::cout << "violations:\n";
    for (const json& entry : report["violations"])
      std::cout << "  - [" << entry["condition"].get<std::string>() << "] "
                << entry["subject"].get<std::string>() << ": "
                << entry["witness"].get<std::string>() << "\n";
  }
  char ms[64];
  std::snprintf(ms, sizeof ms, "%.2f", report["timing_ms"].get<double>());
  std::cout << "time: " << ms << " ms\n";
}

void emit_report(const json& report, const std::string& report_path) {
  print_human(report);
  if (!report_path.empty()) write_file_atomic(report_path, report.dump(2) + "\n");
}

json allocation_json(const Market& market, const Allocation& allocation) {
  json list = json::array();
  for (const Trade& trade : allocation.trades)
    list.push_back({{"buyer", market.buyer_ids()[static_cast<size_t>(trade.buyer)]},
                    {"store", market.store_ids()[static_cast<size_t>(trade.store)]},
                    {"courier", market.courier_ids()[static_cast<size_t>(trade.courier)]}});
  return list;
}

json violations_json(const std::vector<Violation>& violations) {
  json list = json::array();
  for (const Violation& violation : violations)
    list.push_back({{"condition", condition_tag(violation.condition)},
                    {"subject", violation.subject},
                    {"witness", violation.witness}});
  return list;
}

struct GenerateArgs {
  std::string family, spec_path, kappa, output;
  std::uint64_t seed = 0;
  std::vector<int> dims{2, 2, 2};
  long max_numerator = 20;
  long denominator = 1;
};

int cmd_generate(const GenerateArgs& args) {
  InstanceSpec spec;
  if (!args.spec_path.empty()) {
    spec = instance_spec_from_json(read_file(args.spec_path));
  } else {
    if (args.family.empty()) throw InputError("generate needs --family or --spec");
    auto family = family_from_tag(args.family);
    if (!family) {
      std::string known;
      for (const std::string& tag : all_family_tags())
        known += (known.empty() ? "" : ", ") + tag;
      throw InputError("unknown family " + args.family + " (known: " + known + ")");
    }
    spec.family = *family;
    spec.seed = args.seed;
    spec.buyers = args.dims[0];
    spec.stores = args.dims[1];
    spec.couriers = args.dims[2];
    spec.grid.max_numerator = args.max_numerator;
    spec.grid.denominator = args.denominator;
    if (!args.kappa.empty()) {
      auto kappa = rat_from_string(args.kappa);
      if (!kappa) throw InputError("kappa must be a rational like 3 or 5/2");
      spec.kappa = *kappa;
    }
  }
  std::string text = save_market(generate(spec));
  if (args.output.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(args.output, text);
    std::cout << "wrote " << args.output << "\n";
  }
  return kExitOk;
}

struct SolveArgs {
  std::string market_path, mode = "auto", output, report_path;
  bool optimal_eq = false;
  bool exhaustive_orders = false;
  int cap = kDefaultBruteForceCap;
};

int cmd_solve(const SolveArgs& args) {
  Timer timer;
  Market market = load_market(read_file(args.market_path));
  json digest = market_digest(args.market_path, market);

  std::optional<EquilibriumCertificate> certificate;
  json results;
  if (args.optimal_eq) {
    if (args.mode != "auto")
      throw InputError("--optimal-eq picks its own equilibrium; drop --mode");
    auto best = optimal_equilibrium_welfare_bruteforce(market, args.cap);
    if (!best)
      throw InternalError("no supportable allocation found, but one always exists");
    results["solver"] = "optimal-eq-brute";
    results["empty_allocation"] = best->certificate.allocation.trades.empty();
    certificate = std::move(best->certificate);
  } else if (args.mode == "without-tip") {
    auto found = construct_without_tip(market);
    if (!found) {
      results["solver"] = "tip-free-construction";
      results["result"] = "none";
      emit_report(make_report("solve", digest, results, json::array(), timer.ms()),
                  args.report_path);
      std::cerr << "no tip-free equilibrium exists for this market\n";
      return kExitNoEquilibrium;
    }
    results["solver"] = "tip-free-construction";
    certificate = std::move(*found);
  } else if (args.mode == "with-tip") {
    results["solver"] = "tip-construction";
    certificate = construct_with_tip(market, {args.exhaustive_orders});
  } else if (args.mode == "non-clearing") {
    results["solver"] = "best-single-trade";
    certificate = best_single_trade_equilibrium(market);
  } else {
    if (detect_cost_structure(market).kind != CostKind::Unstructured) {
      results["solver"] = "structured-efficient";
      certificate = efficient_equilibrium_structured(market);
    } else {
      results["solver"] = "tip-construction";
      certificate = construct_with_tip(market, {args.exhaustive_orders});
    }
  }

  Verdict verdict = verify(market, *certificate);
  if (!verdict.ok)
    throw InternalError("constructed certificate failed re-verification");
  results["mode"] = mode_tag(certificate->mode);
  results["market_clearing"] = certificate->market_clearing;
  results["welfare"] = rat_to_string(welfare(market, certificate->allocation));
  results["trades"] = static_cast<int>(certificate->allocation.trades.size());
  if (!args.output.empty()) {
    write_file_atomic(args.output, save_certificate(*certificate, market));
    results["certificate"] = args.output;
  }
  emit_report(make_report("solve", digest, results, json::array(), timer.ms()),
              args.report_path);
  return kExitOk;
}

struct VerifyArgs {
  std::string market_path, certificate_path, mode, report_path;
};

int cmd_verify(const VerifyArgs& args) {
  Timer timer;
  Market market = load_market(read_file(args.market_path));
  EquilibriumCertificate certificate =
      load_certificate(read_file(args.certificate_path), market);
  if (!args.mode.empty()) {
    auto mode = mode_from_tag(args.mode);
    if (!mode) throw InputError("mode must be with-tip or without-tip");
    if (*mode != certificate.mode)
      throw InputError("certificate is " + std::string(mode_tag(certificate.mode)) +
                       " but " + args.mode + " was requested");
  }
  Verdict verdict = verify(market, certificate);
  json results;
  results["verdict"] = verdict.ok ? "ok" : "fail";
  results["mode"] = mode_tag(certificate.mode);
  results["market_clearing"] = certificate.market_clearing;
  results["trades"] = static_cast<int>(certificate.allocation.trades.size());
  if (validate_allocation(market, certificate.allocation))
    results["welfare"] = rat_to_string(welfare(market, certificate.allocation));
  emit_report(make_report("verify", market_digest(args.market_path, market), results,
                          violations_json(verdict.violations), timer.ms()),
              args.report_path);
  return verdict.ok ? kExitOk : kExitVerificationFailed;
}

struct OptArgs {
  std::string market_path, solver = "auto", report_path;
  int cap = kDefaultBruteForceCap;
};

int cmd_opt(const OptArgs& args) {
  Timer timer;
  Market market = load_market(read_file(args.market_path));
  CostStructure structure = detect_cost_structure(market);

  OptResult optimum;
  std::string used;
  if (args.solver == "brute") {
    optimum = optimal_welfare_bruteforce(market, args.cap);
    used = "brute";
  } else if (args.solver == "flow") {
    optimum = optimal_welfare_flow(market, structure);
    used = "flow";
  } else if (args.solver == "single-minded") {
    optimum = optimal_welfare_single_minded(market);
    used = "single-minded";
  } else {
    switch (structure.kind) {
      case CostKind::CourierStore:
      case CostKind::CourierBuyer:
        optimum = optimal_welfare_flow(market, structure);
        used = "flow";
        break;
      case CostKind::SingleMindedBuyers:
        optimum = optimal_welfare_single_minded(market);
        used = "single-minded";
        break;
      case CostKind::Unstructured:
        optimum = optimal_welfare_bruteforce(market, args.cap);
        used = "brute";
        break;
    }
  }

  json results;
  results["welfare"] = rat_to_string(optimum.welfare);
  results["solver"] = used;
  results["trades"] = static_cast<int>(optimum.allocation.trades.size());
  results["allocation"] = allocation_json(market, optimum.allocation);
  emit_report(make_report("opt", market_digest(args.market_path, market), results,
                          json::array(), timer.ms()),
              args.report_path);
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"equilibrium computation for three-sided delivery markets"};
  app.require_subcommand(1);

  GenerateArgs generate_args;
  CLI::App* generate = app.add_subcommand(
      "generate", "write a market instance from a family spec");
  CLI::Option* family_opt =
      generate->add_option("--family", generate_args.family,
                           "instance family (see the project README for the list)");
  generate->add_option("--spec", generate_args.spec_path,
                       "JSON instance spec file (alternative to inline flags)")
      ->excludes(family_opt);
  generate->add_option("--seed", generate_args.seed, "PRNG seed for random families")
      ->default_val(0);
  generate->add_option("--dims", generate_args.dims,
                       "buyers,stores,couriers for random families")
      ->delimiter(',')
      ->expected(3);
  generate->add_option("--max-numerator", generate_args.max_numerator,
                       "largest numerator drawn for random values")
      ->default_val(20);
  generate->add_option("--denominator", generate_args.denominator,
                       "fixed denominator under random values")
      ->default_val(1);
  generate->add_option("--kappa", generate_args.kappa,
                       "cost scale for the fig3 family (rational > 2)");
  generate->add_option("-o,--output", generate_args.output,
                       "output market file (default: stdout)");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "construct an equilibrium certificate");
  solve->add_option("market", solve_args.market_path, "market JSON file")->required();
  solve->add_option("--mode", solve_args.mode,
                    "equilibrium kind: with-tip, without-tip, non-clearing, or auto")
      ->check(CLI::IsMember({"with-tip", "without-tip", "non-clearing", "auto"}));
  solve->add_flag("--optimal-eq", solve_args.optimal_eq,
                  "brute-force the welfare-maximal equilibrium (small markets)");
  solve->add_flag("--exhaustive-orders", solve_args.exhaustive_orders,
                  "search all delivered-order sets in the tip construction");
  CLI::Option* solve_cap =
      solve->add_option("--cap", solve_args.cap,
                        "largest per-side size brute force accepts "
                        "(TRISIDE_BRUTE_CAP overrides the default)");
  solve->add_option("-o,--output", solve_args.output, "certificate output file");
  solve->add_option("--report", solve_args.report_path, "write the JSON report here");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "check a certificate against a market");
  verify->add_option("market", verify_args.market_path, "market JSON file")->required();
  verify->add_option("certificate", verify_args.certificate_path, "certificate JSON file")
      ->required();
  verify->add_option("--mode", verify_args.mode,
                     "require this mode (with-tip or without-tip)");
  verify->add_option("--report", verify_args.report_path, "write the JSON report here");

  OptArgs opt_args;
  CLI::App* opt = app.add_subcommand("opt", "compute the optimal welfare");
  opt->add_option("market", opt_args.market_path, "market JSON file")->required();
  opt->add_option("--solver", opt_args.solver,
                  "auto, brute, flow, or single-minded")
      ->check(CLI::IsMember({"auto", "brute", "flow", "single-minded"}));
  CLI::Option* opt_cap =
      opt->add_option("--cap", opt_args.cap,
                      "largest per-side size brute force accepts "
                      "(TRISIDE_BRUTE_CAP overrides the default)");
  opt->add_option("--report", opt_args.report_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return kExitInputError;
  }

  if (app.got_subcommand(generate)) return cmd_generate(generate_args);
  if (app.got_subcommand(solve)) {
    solve_args.cap = resolve_cap(solve_cap, solve_args.cap);
    return cmd_solve(solve_args);
  }
  if (app.got_subcommand(verify)) return cmd_verify(verify_args);
  opt_args.cap = resolve_cap(opt_cap, opt_args.cap);
  return cmd_opt(opt_args);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitInputError;
  } catch (const CapError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitCapExceeded;
  } catch (const InternalError& error) {
    std::cerr << "internal error: " << error.what() << "\n";
    return kExitInternal;
  }
}
