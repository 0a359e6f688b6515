// Command-line front end: analyze / perturb / verify / example with JSON
// instance I/O. Exit codes: 0 success, 1 verification failure, 2 input or
// usage error.

#include "ffp/instances.hpp"
#include "ffp/io.hpp"
#include "ffp/perturbation.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <numbers>
#include <sstream>

namespace {

using namespace ffp;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

json tolerances_json(const ToleranceConfig& tol) {
  return {{"rank_tol_factor", tol.rank_tol_factor},
          {"cmp_tol", tol.cmp_tol},
          {"intersection_tol", tol.intersection_tol}};
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text << '\n';
  } else {
    write_file_atomic(out_path, text + "\n");
  }
}

void emit(const std::string& out_path, const json& j) { emit(out_path, j.dump(2)); }

struct RandomSpec {
  Index dim = 8;
  int trials = 100;
  std::uint64_t seed = 1;
};

RandomSpec parse_random_spec(const std::string& text) {
  RandomSpec spec;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad --random entry: " + token);
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "dim") spec.dim = std::stol(value);
    else if (key == "trials") spec.trials = std::stoi(value);
    else if (key == "seed") spec.seed = std::stoull(value);
    else throw std::invalid_argument("unknown --random key: " + key);
  }
  if (spec.dim < 2 || spec.trials < 1) throw std::invalid_argument("bad --random spec");
  return spec;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const std::string& path, bool angles, bool csv, const std::string& out,
                const ToleranceConfig& tol) {
  const Instance inst = load_instance(path, tol);
  const FrameAnalysis fa = frame_bounds(inst.family, tol);

  if (csv) {
    std::ostringstream table;
    table << "i,j,cos_dixmier,cos_friedrichs,gap_ij,gap_ji\n";
    const auto& items = inst.family.items;
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        char line[256];
        std::snprintf(line, sizeof(line), "%zu,%zu,%.17g,%.17g,%.17g,%.17g", i, j,
                      cos_dixmier(items[i].subspace, items[j].subspace),
                      cos_friedrichs(items[i].subspace, items[j].subspace, tol),
                      gap(items[i].subspace, items[j].subspace),
                      gap(items[j].subspace, items[i].subspace));
        table << line << "\n";
      }
    }
    emit(out, table.str());
    return kExitOk;
  }

  json report;
  report["command"] = "analyze";
  report["input_hash"] = fnv1a_hex(read_file(path));
  report["tolerances"] = tolerances_json(tol);
  report["warnings"] = inst.warnings;
  report["result"] = {{"lower", fa.lower},
                      {"upper", fa.upper},
                      {"span_dim", fa.span_dim},
                      {"classification", to_string(fa.classification)}};
  if (angles) {
    json table = json::array();
    const auto& items = inst.family.items;
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        table.push_back({{"i", i},
                         {"j", j},
                         {"cos_dixmier", cos_dixmier(items[i].subspace, items[j].subspace)},
                         {"cos_friedrichs",
                          cos_friedrichs(items[i].subspace, items[j].subspace, tol)},
                         {"gap_ij", gap(items[i].subspace, items[j].subspace)},
                         {"gap_ji", gap(items[j].subspace, items[i].subspace)}});
      }
    }
    report["result"]["angles"] = std::move(table);
  }
  emit(out, report);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// perturb
// ---------------------------------------------------------------------------

json perturbation_report(const Mat& t, const WeightedFamily& family, double a_opt, double b_opt,
                         bool have_a, bool have_b, WeightStrategy strategy,
                         const ToleranceConfig& tol, bool& contained) {
  const LocalQuantities lq = local_quantities(t, family, tol);
  const double c = condition_c(lq);
  const double b = have_b ? b_opt : 1.0;
  const double a = have_a ? a_opt : c * b;

  json report;
  report["condition_c"] = c;
  report["A"] = a;
  report["B"] = b;
  report["strategy"] = to_string(strategy);
  report["degenerate_indices"] = lq.degenerate;
  json local = json::array();
  for (std::size_t i = 0; i < lq.gamma.size(); ++i) {
    local.push_back({{"index", i},
                     {"gamma", lq.is_degenerate(i) ? json("inf") : json(lq.gamma[i])},
                     {"norm", lq.norm[i]},
                     {"ratio", lq.is_degenerate(i) ? json() : json(lq.ratio[i])}});
  }
  report["local_quantities"] = std::move(local);

  std::vector<double> old_weights;
  for (const auto& item : family.items) old_weights.push_back(item.weight);
  const WeightWindow window = construct_weights(lq, old_weights, a, b, strategy);

  json windows = json::array();
  for (std::size_t i = 0; i < window.lo.size(); ++i) {
    windows.push_back({{"lo", window.lo[i]}, {"hi", window.hi[i]}, {"v", window.chosen[i]}});
  }
  report["weight_windows"] = std::move(windows);

  const WeightedFamily perturbed = perturb(t, family, window, tol);
  const FrameAnalysis achieved = frame_bounds(perturbed, tol);
  const BoundPrediction pred = predict_bounds(t, family, a, b, tol);

  report["predicted"] = {{"gamma_F", pred.gamma_f},
                         {"norm_F", pred.norm_f},
                         {"lower_interval", {pred.lower_lo, pred.lower_hi}},
                         {"upper_interval", {pred.upper_lo, pred.upper_hi}}};
  report["achieved"] = {{"lower", achieved.lower},
                        {"upper", achieved.upper},
                        {"span_dim", achieved.span_dim},
                        {"classification", to_string(achieved.classification)}};
  const double slack_lower =
      std::max({pred.lower_lo - achieved.lower, achieved.lower - pred.lower_hi, 0.0});
  const double slack_upper =
      std::max({pred.upper_lo - achieved.upper, achieved.upper - pred.upper_hi, 0.0});
  contained = slack_lower <= tol.cmp_tol && slack_upper <= tol.cmp_tol;
  report["containment"] = {{"pass", contained},
                           {"slack_lower", slack_lower},
                           {"slack_upper", slack_upper}};
  return report;
}

int cmd_perturb(const std::string& path, double a_opt, double b_opt, bool have_a, bool have_b,
                const std::string& strategy_name, const std::string& out,
                const ToleranceConfig& tol) {
  const Instance inst = load_instance(path, tol);
  if (!inst.op) throw std::invalid_argument("perturb requires an instance with an operator");
  const auto strategy = parse_strategy(strategy_name);
  if (!strategy) throw std::invalid_argument("unknown strategy: " + strategy_name);

  json report;
  report["command"] = "perturb";
  report["input_hash"] = fnv1a_hex(read_file(path));
  report["tolerances"] = tolerances_json(tol);
  report["warnings"] = inst.warnings;
  bool contained = false;
  try {
    report["result"] = perturbation_report(*inst.op, inst.family, a_opt, b_opt, have_a, have_b,
                                           *strategy, tol, contained);
  } catch (const hypothesis_error& e) {
    report["result"] = {{"hypothesis_violation", e.what()},
                        {"violating_index", e.index()}};
    emit(out, report);
    return kExitVerifyFail;
  }
  emit(out, report);
  return contained ? kExitOk : kExitVerifyFail;
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

struct SuiteResult {
  int trials = 0;
  int passes = 0;
  double max_slack = 0.0;
  json failures = json::array();

  void record(bool pass, double slack, const json& params) {
    ++trials;
    max_slack = std::max(max_slack, slack);
    if (pass) {
      ++passes;
    } else {
      json f = params;
      f["slack"] = slack;
      failures.push_back(std::move(f));
    }
  }
};

SuiteResult run_prop24(const RandomSpec& spec, const ToleranceConfig& tol) {
  SuiteResult res;
  std::uint64_t seed = spec.seed;
  while (res.trials < spec.trials) {
    const std::uint64_t s = seed++;
    SeededRng rng(s);
    const Index n = spec.dim;
    Mat t = random_gaussian(n, n, rng);
    if (s % 3 == 0) {
      t = t * (Mat::Identity(n, n) - projector(random_subspace(n, 1 + n / 4, s + 1)));
    }
    const Subspace w = random_subspace(n, 1 + static_cast<Index>(s % (n - 1)), s + 2);
    const GammaChainReport r = verify_prop_gammas(t, w, tol);
    if (!r.hypothesis_met) continue;
    res.record(r.pass, r.slack, {{"seed", s}, {"dim", n}});
  }
  return res;
}

SuiteResult run_thm25(const RandomSpec& spec, const ToleranceConfig& tol) {
  SuiteResult res;
  std::uint64_t seed = spec.seed;
  while (res.trials < spec.trials) {
    const std::uint64_t s = seed++;
    const Index n = spec.dim;
    const Index null_dim = static_cast<Index>(s % (n / 2 + 1));
    const Mat a = random_psd_with_nullspace(n, null_dim, 0.3, 3.0, s);
    const Subspace w = random_subspace(n, 1 + static_cast<Index>(s % (n - 1)), s + 2);
    const AngleChainReport r = verify_thm_angle_bounds(a, w, tol);
    if (!r.hypothesis_met) continue;
    res.record(r.pass, std::max(r.chain_slack, r.set_identity_err),
               {{"seed", s}, {"dim", n}, {"null_dim", null_dim}});
  }
  return res;
}

SuiteResult run_cor26(const RandomSpec& spec, const ToleranceConfig& tol) {
  SuiteResult res;
  std::uint64_t seed = spec.seed;
  while (res.trials < spec.trials) {
    const std::uint64_t s = seed++;
    const Index n = spec.dim;
    const Index null_dim = static_cast<Index>(s % (n / 2 + 1));
    const Mat a = random_psd_with_nullspace(n, null_dim, 0.3, 3.0, s);
    std::vector<Subspace> ws;
    const int count = 3 + static_cast<int>(s % 3);
    for (int i = 0; i < count; ++i) {
      ws.push_back(random_subspace(n, 1 + static_cast<Index>((s + i) % (n - 1)), s + 10 + i));
    }
    const EquivalenceReport r = verify_cor_equivalence(a, ws, tol);
    res.record(r.pass, r.max_equality_err,
               {{"seed", s}, {"dim", n}, {"null_dim", null_dim}});
  }
  return res;
}

SuiteResult run_thm32(const RandomSpec& spec, const ToleranceConfig& tol) {
  SuiteResult res;
  std::uint64_t seed = spec.seed;
  while (res.trials < spec.trials) {
    const std::uint64_t s = seed++;
    SeededRng rng(s);
    const Index n = spec.dim;
    Mat t = random_gaussian(n, n, rng);
    if (s % 4 == 0) {
      t = t * (Mat::Identity(n, n) - projector(random_subspace(n, 1, s + 1)));
    }
    std::vector<Index> dims;
    const int count = 2 + static_cast<int>(s % 3);
    for (int i = 0; i < count; ++i) dims.push_back(1 + static_cast<Index>((s + i) % (n - 1)));
    const WeightedFamily family = random_family(n, dims, 0.5, 2.0, s + 5);
    const LocalQuantities lq = local_quantities(t, family, tol);
    if (!lq.degenerate.empty()) continue;
    const double c = condition_c(lq);
    if (c <= 1e-10) continue;

    std::vector<double> old_weights;
    for (const auto& item : family.items) old_weights.push_back(item.weight);
    bool pass = true;
    double slack = 0.0;
    const BoundPrediction pred = predict_bounds(t, family, c, 1.0, tol);
    for (WeightStrategy strategy : {WeightStrategy::geometric_mid, WeightStrategy::lower_edge,
                                    WeightStrategy::upper_edge}) {
      const WeightWindow window = construct_weights(lq, old_weights, c, 1.0, strategy);
      const FrameAnalysis achieved = frame_bounds(perturb(t, family, window, tol), tol);
      slack = std::max({slack, pred.lower_lo - achieved.lower, achieved.lower - pred.lower_hi,
                        pred.upper_lo - achieved.upper, achieved.upper - pred.upper_hi});
    }
    pass = slack <= tol.cmp_tol;
    res.record(pass, std::max(slack, 0.0), {{"seed", s}, {"dim", n}});
  }
  return res;
}

int cmd_verify(const std::string& suite, const std::string& instance_path,
               const std::string& random_text, const std::string& out,
               const ToleranceConfig& tol) {
  json report;
  report["command"] = "verify";
  report["suite"] = suite;
  report["tolerances"] = tolerances_json(tol);

  SuiteResult res;
  if (!instance_path.empty()) {
    const Instance inst = load_instance(instance_path, tol);
    if (!inst.op) throw std::invalid_argument("verify on an instance requires an operator");
    report["input_hash"] = fnv1a_hex(read_file(instance_path));
    if (suite == "prop24") {
      std::size_t i = 0;
      for (const auto& item : inst.family.items) {
        const GammaChainReport r = verify_prop_gammas(*inst.op, item.subspace, tol);
        if (r.hypothesis_met) res.record(r.pass, r.slack, {{"index", i}});
        ++i;
      }
    } else if (suite == "thm25") {
      std::size_t i = 0;
      for (const auto& item : inst.family.items) {
        const AngleChainReport r = verify_thm_angle_bounds(*inst.op, item.subspace, tol);
        if (r.hypothesis_met) {
          res.record(r.pass, std::max(r.chain_slack, r.set_identity_err), {{"index", i}});
        }
        ++i;
      }
    } else if (suite == "cor26") {
      std::vector<Subspace> ws;
      for (const auto& item : inst.family.items) ws.push_back(item.subspace);
      const EquivalenceReport r = verify_cor_equivalence(*inst.op, ws, tol);
      res.record(r.pass, r.max_equality_err, {{"instance", instance_path}});
      report["equivalence"] = {{"inf_gamma", std::isfinite(r.inf_gamma) ? json(r.inf_gamma)
                                                                        : json("inf")},
                               {"sup_cosine", r.sup_cosine},
                               {"sup_gap", r.sup_gap},
                               {"conditions", {r.cond_gamma, r.cond_cosine, r.cond_gap}}};
    } else if (suite == "thm32") {
      bool contained = false;
      try {
        report["perturbation"] =
            perturbation_report(*inst.op, inst.family, 0.0, 0.0, false, false,
                                WeightStrategy::geometric_mid, tol, contained);
        res.record(contained, 0.0, {{"instance", instance_path}});
      } catch (const hypothesis_error& e) {
        res.record(false, 0.0, {{"instance", instance_path}, {"reason", e.what()}});
      }
    } else {
      throw std::invalid_argument("unknown suite: " + suite);
    }
  } else {
    const RandomSpec spec = parse_random_spec(random_text);
    report["random"] = {{"dim", spec.dim}, {"trials", spec.trials}, {"seed", spec.seed}};
    if (suite == "prop24") res = run_prop24(spec, tol);
    else if (suite == "thm25") res = run_thm25(spec, tol);
    else if (suite == "cor26") res = run_cor26(spec, tol);
    else if (suite == "thm32") res = run_thm32(spec, tol);
    else throw std::invalid_argument("unknown suite: " + suite);
  }

  report["trials"] = res.trials;
  report["passes"] = res.passes;
  report["max_slack"] = res.max_slack;
  report["failures"] = res.failures;
  report["pass"] = res.passes == res.trials && res.trials > 0;
  emit(out, report);
  return report["pass"].get<bool>() ? kExitOk : kExitVerifyFail;
}

// ---------------------------------------------------------------------------
// example
// ---------------------------------------------------------------------------

int cmd_example(int blocks, double theta0, const std::string& out, const std::string& plot_path,
                const ToleranceConfig& tol) {
  if (blocks < 1) throw std::invalid_argument("--blocks must be at least 1");
  if (!(theta0 > 0.0) || !(theta0 < std::numbers::pi / 4.0)) {
    throw std::invalid_argument("--theta0 must lie in (0, pi/4)");
  }
  const BlockExample ex = paper_example(PaperExampleSpec::halving(blocks, theta0));
  emit(out, instance_to_json(ex.family, &ex.projector_t));

  if (!plot_path.empty()) {
    std::ostringstream csv;
    csv << "K,condition_c,perturbed_lower_bound\n";
    for (int k = 1; k <= blocks; ++k) {
      const BlockExample trunc = paper_example(PaperExampleSpec::halving(k, theta0));
      const LocalQuantities lq = local_quantities(trunc.projector_t, trunc.family, tol);
      WeightWindow unit;
      unit.lo.assign(trunc.family.items.size(), 1.0);
      unit.hi.assign(trunc.family.items.size(), 1.0);
      unit.chosen.assign(trunc.family.items.size(), 1.0);
      const FrameAnalysis fa =
          frame_bounds(perturb(trunc.projector_t, trunc.family, unit, tol), tol);
      char line[128];
      std::snprintf(line, sizeof(line), "%d,%.17g,%.17g", k, condition_c(lq), fa.lower);
      csv << line << "\n";
    }
    write_file_atomic(plot_path, csv.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fusion-frame subspace geometry and operator perturbation toolkit"};
  app.require_subcommand(1);

  ToleranceConfig tol;

  auto* analyze = app.add_subcommand("analyze", "frame bounds and classification of an instance");
  std::string analyze_path, analyze_out;
  bool analyze_angles = false, analyze_csv = false;
  analyze->add_option("instance", analyze_path, "instance JSON file")->required();
  analyze->add_flag("--angles", analyze_angles, "include the per-pair angle/gap table");
  analyze->add_flag("--csv", analyze_csv, "emit the per-pair table as CSV instead of JSON");
  analyze->add_option("--out", analyze_out, "output path (default stdout)");
  analyze->add_option("--tol", tol.cmp_tol, "comparison tolerance");

  auto* perturb_cmd = app.add_subcommand("perturb", "construct weights and verify the perturbed family");
  std::string perturb_path, perturb_out, strategy_name = "geometric_mid";
  double opt_a = 0.0, opt_b = 0.0;
  auto* a_opt = perturb_cmd->add_option("--A", opt_a, "lower constant (default c*B)");
  auto* b_opt = perturb_cmd->add_option("--B", opt_b, "upper constant (default 1)");
  perturb_cmd->add_option("instance", perturb_path, "instance JSON file with operator")->required();
  perturb_cmd->add_option("--strategy", strategy_name,
                          "weight choice: geometric_mid | lower_edge | upper_edge");
  perturb_cmd->add_option("--out", perturb_out, "output path (default stdout)");
  perturb_cmd->add_option("--tol", tol.cmp_tol, "comparison tolerance");

  auto* verify = app.add_subcommand("verify", "run a verifier suite on an instance or random draws");
  std::string verify_suite, verify_path, verify_random, verify_out;
  verify->add_option("--suite", verify_suite, "prop24 | thm25 | cor26 | thm32")->required();
  verify->add_option("instance", verify_path, "instance JSON file");
  verify->add_option("--random", verify_random, "random spec, e.g. dim=8,trials=500,seed=7");
  verify->add_option("--out", verify_out, "output path (default stdout)");
  verify->add_option("--tol", tol.cmp_tol, "comparison tolerance");

  auto* example = app.add_subcommand("example", "emit the truncated block-construction instance");
  int blocks = 1;
  double theta0 = std::numbers::pi / 8.0;
  std::string example_out, plot_path;
  example->add_option("--blocks", blocks, "number of blocks K");
  example->add_option("--theta0", theta0, "leading angle, in (0, pi/4)");
  example->add_option("--out", example_out, "output path (default stdout)");
  example->add_option("--plot", plot_path, "write the K-sweep (c, perturbed lower bound) CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return kExitUsage;
  }

  try {
    if (*analyze) {
      return cmd_analyze(analyze_path, analyze_angles, analyze_csv, analyze_out, tol);
    }
    if (*perturb_cmd) {
      return cmd_perturb(perturb_path, opt_a, opt_b, a_opt->count() > 0, b_opt->count() > 0,
                         strategy_name, perturb_out, tol);
    }
    if (*verify) {
      if (verify_path.empty() && verify_random.empty()) {
        throw std::invalid_argument("verify needs an instance path or --random");
      }
      return cmd_verify(verify_suite, verify_path, verify_random, verify_out, tol);
    }
    if (*example) {
      return cmd_example(blocks, theta0, example_out, plot_path, tol);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerifyFail;
  }
  return kExitUsage;
}
