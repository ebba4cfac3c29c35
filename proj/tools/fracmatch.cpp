// fracmatch: exact verification toolkit for the extremal tail formulas of
// perfect fractional matchings, the finite inequality sweep, desk-scale LP
// oracles, the smoothed counting optimizer, and the constant-chain audit.
//
// Exit codes: 0 success, 1 usage error, 2 violation (or fail-as-printed
// under --strict), 3 interrupted-resumable, 4 internal arithmetic failure.

#include "fracmatch/appendix.hpp"
#include "fracmatch/arrangement.hpp"
#include "fracmatch/binomial.hpp"
#include "fracmatch/hypergraph.hpp"
#include "fracmatch/io_util.hpp"
#include "fracmatch/parallel.hpp"
#include "fracmatch/selftest.hpp"
#include "fracmatch/smooth.hpp"
#include "fracmatch/sweep.hpp"
#include "fracmatch/tails.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

namespace fm = fracmatch;

namespace {

int cmd_eval(long n, long k, bool as_json) {
  const fm::ExtremumProfile p = fm::max_tail_strict(n, k);
  const fm::ExtremumProfile q = fm::min_tail_weak(n, k);
  const fm::Count shifted = fm::max_tail_shifted(n, k);
  const fm::ComplementReport comp = fm::check_complement_identity(n, k);

  if (as_json) {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["k"] = k;
    j["p"] = p.value.get_str();
    j["p_args"] = p.args;
    j["p_shifted_form"] = shifted.get_str();
    j["q"] = q.value.get_str();
    j["q_args"] = q.args;
    j["total"] = comp.total.get_str();
    j["complement_identity"] = comp.holds;
    j["forms_agree"] = (shifted == p.value);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "p(" << n << "," << k << ") = " << p.value.get_str() << "   argmax a = {";
    for (std::size_t i = 0; i < p.args.size(); ++i)
      std::cout << (i ? "," : "") << p.args[i];
    std::cout << "}\n";
    std::cout << "  shifted form value = " << shifted.get_str()
              << (shifted == p.value ? "  (agrees)" : "  (MISMATCH)") << '\n';
    std::cout << "q(" << n << "," << k << ") = " << q.value.get_str() << "   argmin a = {";
    for (std::size_t i = 0; i < q.args.size(); ++i)
      std::cout << (i ? "," : "") << q.args[i];
    std::cout << "}\n";
    std::cout << "p + q = " << fm::Count(p.value + q.value).get_str() << "  vs C(n,k) = "
              << comp.total.get_str() << (comp.holds ? "  (complement holds)" : "  (MISMATCH)")
              << '\n';
  }
  if (shifted != p.value || !comp.holds) {
    std::cerr << "eval: identity mismatch detected\n";
    return 2;
  }
  return 0;
}

int cmd_oracle_pfm(const std::string& path, std::size_t cap, bool as_json) {
  const fm::Hypergraph h = fm::read_edge_list_file(path);
  const fm::PfmResult res = fm::solve_pfm(h, cap);
  nlohmann::ordered_json j;
  j["n"] = h.n;
  j["k"] = h.k;
  j["edges"] = h.edges.size();
  switch (res.outcome) {
    case fm::PfmOutcome::Matching: {
      j["outcome"] = "perfect_fractional_matching";
      j["verified"] = fm::verify_certificate(h, *res.matching);
      auto alphas = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < res.matching->support.size(); ++i) {
        nlohmann::ordered_json e;
        e["edge_mask"] = res.matching->support[i];
        e["alpha"] = fm::to_string(res.matching->alpha[i]);
        alphas.push_back(e);
      }
      j["support"] = alphas;
      break;
    }
    case fm::PfmOutcome::Separated: {
      j["outcome"] = "separated";
      j["verified"] = fm::verify_certificate(h, *res.separation);
      auto om = nlohmann::ordered_json::array();
      for (const fm::Ratio& w : res.separation->omega) om.push_back(fm::to_string(w));
      j["omega"] = om;
      break;
    }
    case fm::PfmOutcome::EmptyInstance:
      j["outcome"] = "empty_instance";
      j["verified"] = true;
      break;
  }
  std::cout << (as_json ? j.dump(2) : j.dump()) << '\n';
  if (!j["verified"].get<bool>()) {
    std::cerr << "oracle: certificate failed verification\n";
    return 4;
  }
  return 0;
}

int cmd_oracle_brute(long n, long k, long cap, bool maximize_pos, bool as_json) {
  fm::BruteForceOptions opt;
  opt.max_n = cap;
  const fm::BruteForceResult r =
      maximize_pos ? fm::brute_force_max_pos(n, k, opt) : fm::brute_force_min_nonneg(n, k, opt);
  nlohmann::ordered_json j;
  j["n"] = n;
  j["k"] = k;
  j["quantity"] = maximize_pos ? "p" : "q";
  j["value"] = r.value;
  auto w = nlohmann::ordered_json::array();
  for (const fm::Ratio& x : r.witness) w.push_back(fm::to_string(x));
  j["witness"] = w;
  j["faces"] = r.faces;
  j["lp_calls"] = r.lp_calls;
  std::cout << (as_json ? j.dump(2) : j.dump()) << '\n';
  return 0;
}

int cmd_oracle_count_u(const std::string& beta_text, long k, bool as_json) {
  const std::vector<fm::Ratio> beta = fm::parse_ratio_list(beta_text);
  const fm::UCount u = fm::count_nonneg_edges(beta, k);
  nlohmann::ordered_json j;
  j["count"] = u.count;
  if (as_json) {
    j["family_masks"] = u.family;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << j.dump() << '\n';
  }
  return 0;
}

int cmd_optimize(long n, long k, long a, fm::AnnealConfig cfg, bool as_json) {
  const fm::AnnealResult r = fm::anneal_maximize(n, k, a, cfg);
  nlohmann::ordered_json j;
  j["n"] = n;
  j["k"] = k;
  j["support"] = a;
  j["count"] = r.count.get_str();
  auto g = nlohmann::ordered_json::array();
  for (long i = 0; i < r.gamma.size(); ++i) g.push_back(r.gamma[i]);
  j["gamma"] = g;
  j["is_uniform_step"] = r.profile.is_uniform_step;
  if (r.profile.two_level) {
    j["two_level"] = {{"b", r.profile.two_level->b},
                      {"lambda", r.profile.two_level->lambda},
                      {"gamma_a", r.profile.two_level->gamma_a}};
  }
  j["best_restart"] = r.best_restart;
  std::cout << (as_json ? j.dump(2) : j.dump()) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verification toolkit for perfect fractional matching extremal problems"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = fm::default_jobs();
  app.add_option("--jobs", jobs, "worker threads (default: FRACMATCH_JOBS or hardware)");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate the extremal tail formulas at (n,k)");
  long ev_n = 0, ev_k = 0;
  bool ev_json = false;
  eval->add_option("--n", ev_n, "ground set size")->required();
  eval->add_option("--k", ev_k, "edge size")->required();
  eval->add_flag("--json", ev_json, "machine-readable output");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "verify the tail inequality over a range of n");
  fm::SweepConfig sc;
  std::string k_rule = "quarter";
  std::vector<long> k_list;
  std::string mode = "exact";
  sweep->add_option("--n-min", sc.n_min, "first n")->required();
  sweep->add_option("--n-max", sc.n_max, "last n")->required();
  sweep->add_option("--k-rule", k_rule, "quarter | band | list")
      ->check(CLI::IsMember({"quarter", "band", "list"}));
  sweep->add_option("--k", k_list, "explicit k values (with --k-rule list)");
  sweep->add_option("--out", sc.out_path, "JSONL ledger path")->required();
  sweep->add_option("--checkpoint", sc.checkpoint_path, "checkpoint path")->required();
  sweep->add_option("--mode", mode, "exact | filtered")->check(CLI::IsMember({"exact", "filtered"}));
  sweep->add_option("--slack-bits", sc.filter_slack_bits, "certified-summation budget");
  sweep->add_flag("--resume", sc.resume, "resume from the checkpoint");
  sweep->add_option("--stop-after", sc.stop_after, "stop (resumable) after this many n");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "desk-scale exact LP and enumeration oracles");
  oracle->require_subcommand(1);
  auto* pfm = oracle->add_subcommand("pfm", "decide perfect fractional matchability");
  std::string pfm_path;
  std::size_t pfm_cap = 200;
  bool pfm_json = false;
  pfm->add_option("--input", pfm_path, "edge-list file")->required();
  pfm->add_option("--max-edges", pfm_cap, "LP edge cap");
  pfm->add_flag("--json", pfm_json);
  auto* bq = oracle->add_subcommand("q", "brute-force minimum of |U(beta)|");
  auto* bp = oracle->add_subcommand("p", "brute-force maximum strict-positive count");
  long bq_n = 0, bq_k = 0, bq_cap = 8;
  bool bq_json = false;
  for (auto* cmd : {bq, bp}) {
    cmd->add_option("--n", bq_n)->required();
    cmd->add_option("--k", bq_k)->required();
    cmd->add_option("--max-n", bq_cap, "instance cap");
    cmd->add_flag("--json", bq_json);
  }
  auto* cu = oracle->add_subcommand("count-u", "count k-sets with nonnegative beta-sum");
  std::string cu_beta;
  long cu_k = 0;
  bool cu_json = false;
  cu->add_option("--beta", cu_beta, "comma-separated rationals")->required();
  cu->add_option("--k", cu_k)->required();
  cu->add_flag("--json", cu_json);

  // optimize
  auto* opt = app.add_subcommand("optimize", "annealed maximization of the counting objective");
  long op_n = 0, op_k = 0, op_a = 0;
  bool op_json = false;
  fm::AnnealConfig cfg = fm::AnnealConfig::defaults();
  opt->add_option("--n", op_n)->required();
  opt->add_option("--k", op_k)->required();
  opt->add_option("--a", op_a, "support size")->required();
  opt->add_option("--seed", cfg.seed);
  opt->add_option("--restarts", cfg.restarts);
  opt->add_option("--iters", cfg.iters_per_stage);
  opt->add_option("--step", cfg.step_size);
  opt->add_flag("--json", op_json);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "audit the constant chain");
  bool b_report = false, b_strict = false;
  std::string b_json_path;
  bounds->add_flag("--report", b_report, "emit the audit table");
  bounds->add_flag("--strict", b_strict, "exit 2 if any line fails as printed");
  bounds->add_option("--json", b_json_path, "also write the report as JSON to this path");

  // selftest
  auto* st = app.add_subcommand("selftest", "fast deterministic property suite");
  std::uint64_t st_seed = 1;
  st->add_option("--seed", st_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*eval) return cmd_eval(ev_n, ev_k, ev_json);

    if (*sweep) {
      sc.workers = jobs;
      sc.k_list = k_list;
      sc.k_rule = (k_rule == "quarter") ? fm::KRule::Quarter
                  : (k_rule == "band")  ? fm::KRule::Band
                                        : fm::KRule::Explicit;
      sc.filtered = (mode == "filtered");
      try {
        const fm::SweepSummary s = fm::run_sweep(sc);
        std::cout << "cells " << s.cells << ", records " << s.records << ", violations "
                  << s.violations << (s.interrupted ? ", interrupted (resumable)" : "") << '\n';
        if (s.interrupted) return 3;
        return s.violations ? 2 : 0;
      } catch (const std::runtime_error& e) {
        // I/O trouble: the checkpoint on disk is intact and the run resumable.
        std::cerr << "sweep stopped (resumable): " << e.what() << '\n';
        return 3;
      }
    }

    if (*pfm) return cmd_oracle_pfm(pfm_path, pfm_cap, pfm_json);
    if (*bq) return cmd_oracle_brute(bq_n, bq_k, bq_cap, false, bq_json);
    if (*bp) return cmd_oracle_brute(bq_n, bq_k, bq_cap, true, bq_json);
    if (*cu) return cmd_oracle_count_u(cu_beta, cu_k, cu_json);

    if (*opt) {
      cfg.jobs = jobs;
      return cmd_optimize(op_n, op_k, op_a, cfg, op_json);
    }

    if (*bounds) {
      const fm::BoundReport r = fm::build_bound_report();
      if (b_report || b_json_path.empty()) std::cout << fm::report_to_text(r);
      if (!b_json_path.empty()) fm::write_file_atomic(b_json_path, fm::report_to_json(r));
      if (b_strict && fm::report_has_failures(r)) return 2;
      return 0;
    }

    if (*st) {
      const int failures = fm::run_selftest(std::cout, st_seed);
      return failures == 0 ? 0 : 4;
    }
  } catch (const fm::IndeterminateComparison& e) {
    std::cerr << "arithmetic failure: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 1;
}
