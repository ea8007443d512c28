// jn — generators, transforms, and verification for sequences of finitely
// supported measures. Exit codes: 0 ok, 1 invariant failure / could not
// conclude at the horizon, 2 usage or malformed input.

#include "jnseq/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace jnseq;

unsigned default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

struct InputOpts {
  std::string in_path;
  std::string variant;
  std::string alpha = "1/2";
};

void add_input_opts(CLI::App* cmd, InputOpts& in) {
  auto* file = cmd->add_option("--in", in.in_path, "input sequence (JSONL)");
  auto* gen = cmd->add_option("--variant,--gen", in.variant,
                              "generator name (square1..square4, square2thin, conv, pairs)");
  cmd->add_option("--alpha", in.alpha, "square3 weight as p/q");
  file->excludes(gen);
}

MeasureSequence resolve_input(const InputOpts& in) {
  if (!in.in_path.empty()) return load_sequence(in.in_path);
  if (!in.variant.empty()) return generator_by_name(in.variant, parse_rational(in.alpha));
  throw validation_error("pass --in FILE or --variant NAME");
}

std::size_t clamp_horizon(const MeasureSequence& seq, std::size_t requested) {
  if (seq.length() && *seq.length() < requested) return *seq.length();
  return requested;
}

// 0 means "not set": per-variant defaults keep the dyadic generator (whose
// support doubles with n) inside exact-arithmetic budgets.
std::size_t pick(std::size_t requested, const InputOpts& in, std::size_t dyadic_def,
                 std::size_t def) {
  if (requested) return requested;
  return in.variant == "square4" ? dyadic_def : def;
}

void emit(const std::string& path, const std::string& content) {
  if (path == "-")
    std::cout << content;
  else
    write_text_atomic(path, content);
}

std::string fmt_value(double approx, const std::optional<Rational>& exact) {
  std::ostringstream ss;
  if (exact)
    ss << to_string(*exact) << " (exact)";
  else
    ss << approx;
  return ss.str();
}

// ------------------------------------------------------------------ gen

struct GenOpts {
  InputOpts in;  // only the generator half is used
  std::size_t count = 0;
  std::string out = "-";
};

int run_gen(const GenOpts& o) {
  if (o.in.variant.empty()) throw validation_error("gen needs --variant");
  MeasureSequence seq = generator_by_name(o.in.variant, parse_rational(o.in.alpha));
  std::size_t count = clamp_horizon(seq, o.count);
  std::ostringstream ss;
  write_sequence(ss, seq, count);
  emit(o.out, ss.str());
  if (o.out != "-")
    std::cout << "wrote " << count << " measures (" << seq.meta().name << ") to " << o.out
              << "\n";
  return 0;
}

// ------------------------------------------------------------------ verify

struct VerifyOpts {
  InputOpts in;
  std::size_t horizon = 0;  // auto: 400 (12 for the dyadic variant)
  std::string eps = "1/32";
  std::string half_tol = "1/256";
  unsigned jobs = default_jobs();
  std::string json_out, csv_out;
};

int run_verify(const VerifyOpts& o) {
  MeasureSequence seq = resolve_input(o.in);
  std::size_t horizon = clamp_horizon(seq, pick(o.horizon, o.in, 12, 400));
  std::vector<TestFunction> fns = corpus(seq.space());
  Certificate cert = jn_certificate(seq, fns, horizon, parse_rational(o.eps),
                                    parse_rational(o.half_tol), o.jobs);

  std::cout << "sequence:   " << seq.meta().name << " on " << space_name(seq.space()) << "\n";
  std::cout << "horizon:    " << horizon << " (tail from " << cert.decay.tail_start << ")\n";
  std::cout << "norms:      " << (cert.norms_ok ? "all exactly 1" : "defect") << "\n";
  if (cert.first_norm_defect)
    std::cout << "  first defect at n=" << cert.first_norm_defect->n << ": ||mu|| = "
              << to_string(cert.first_norm_defect->total_variation) << "\n";
  std::cout << "half split: " << (cert.half_balance_ok ? "balanced within " + o.half_tol
                                                       : "unbalanced")
            << "\n";
  if (cert.first_half_violation)
    std::cout << "  first violation at n=" << cert.first_half_violation->n
              << ": pos = " << to_string(cert.first_half_violation->pos_mass)
              << ", neg = " << to_string(cert.first_half_violation->neg_mass) << "\n";
  std::cout << "decay:      sup over tail = " << cert.decay.sup_tail << " vs eps = " << o.eps
            << (cert.decay.refuted ? "  -> REFUTED" : "  -> not refuted") << "\n";
  if (cert.decay.witness)
    std::cout << "  witness: n=" << cert.decay.witness->n << " f=" << cert.decay.witness->label
              << " value=" << fmt_value(cert.decay.witness->value, cert.decay.witness->exact)
              << "\n";
  if (cert.decay.fitted_exponent)
    std::cout << "fitted decay exponent: " << *cert.decay.fitted_exponent << "\n";
  std::cout << "verdict:    " << (cert.ok ? "certificate holds at this horizon" : "FAILED")
            << "\n";

  if (!o.json_out.empty()) {
    Json j = certificate_to_json(cert);
    RunConfig cfg;
    cfg.command = "verify";
    cfg.variant = o.in.variant.empty() ? seq.meta().name : o.in.variant;
    cfg.horizon = horizon;
    cfg.eps = parse_rational(o.eps);
    cfg.half_tol = parse_rational(o.half_tol);
    cfg.jobs = o.jobs;
    j["config"] = run_config_to_json(cfg);
    emit(o.json_out, j.dump(2) + "\n");
  }
  if (!o.csv_out.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : cert.decay.rows)
      rows.push_back({std::to_string(r.n),
                      r.max_abs_exact ? to_string(*r.max_abs_exact) : std::to_string(r.max_abs),
                      r.argmax, to_string(r.norm_defect), std::to_string(r.support_size)});
    std::ostringstream ss;
    write_csv(ss, {"eps: " + o.eps, "horizon: " + std::to_string(horizon)},
              {"n", "max_abs", "argmax", "norm_defect", "support_size"}, rows);
    emit(o.csv_out, ss.str());
  }
  return cert.ok ? 0 : 1;
}

// ------------------------------------------------------------------ analyze

struct AnalyzeOpts {
  InputOpts in;
  std::size_t horizon = 0;  // auto: 400 (16 for the dyadic variant)
  std::size_t window = 0;   // auto: 50 (4 for the dyadic variant)
  std::string tau = "1/1048576";
  std::size_t min_keep = 8;
  bool extract = false;
  std::string json_out, csv_out;
};

int run_analyze(const AnalyzeOpts& o) {
  MeasureSequence seq = resolve_input(o.in);
  AnalysisParams params{clamp_horizon(seq, pick(o.horizon, o.in, 16, 400)),
                        pick(o.window, o.in, 4, 50), parse_rational(o.tau), o.min_keep};
  if (params.window == 0 || params.window > params.horizon)
    throw validation_error("window must lie in [1, horizon]");
  Classification cls = classify_points(seq, params);
  LimitMassReport lm = limit_mass_bound(cls, params);

  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& [pt, rep] : cls.points) ++counts[static_cast<int>(rep.label)];
  std::cout << "sequence:    " << seq.meta().name << ", horizon " << params.horizon
            << ", window " << params.window << ", tau " << o.tau << "\n";
  std::cout << "points:      L=" << counts[0] << "  LI-only=" << counts[1]
            << "  LS-only=" << counts[2] << "  transient=" << counts[3] << "\n";
  std::cout << "limit atoms: " << cls.limit_atoms.size() << ", |mass| sum "
            << to_string(lm.mass_sum) << " vs bound " << to_string(lm.bound)
            << (lm.violated ? "  -> VIOLATED" : "  -> within bound") << "\n";
  std::size_t shown = 0;
  for (const auto& [pt, est] : cls.limit_atoms) {
    if (++shown > 12) {
      std::cout << "  ...\n";
      break;
    }
    std::cout << "  " << pt.str() << " -> " << to_string(est) << "\n";
  }

  if (o.extract) {
    ExtractResult ex = extract_pointwise_convergent(seq, params);
    std::cout << "extraction:  kept " << ex.indices.size() << " of " << params.horizon
              << " indices; limit has " << ex.limit.support_size() << " atoms, |limit| = "
              << to_string(ex.limit.total_variation()) << "\n";
  }

  if (!o.csv_out.empty()) {
    std::ostringstream ss;
    write_csv(ss,
              {"columns: point,label,estimate,window_min,window_max", "tau: " + o.tau,
               "window: " + std::to_string(params.window)},
              {"point", "label", "estimate", "window_min", "window_max"},
              classification_csv_rows(cls));
    emit(o.csv_out, ss.str());
  }
  if (!o.json_out.empty()) {
    Json j = Json::object();
    j["classification"] = classification_to_json(cls);
    j["limit_mass"] = limit_mass_to_json(lm);
    emit(o.json_out, j.dump(2) + "\n");
  }
  return lm.violated ? 1 : 0;
}

// ------------------------------------------------------------------ transform

struct TransformOpts {
  InputOpts in;
  std::string op;
  std::size_t horizon = 0;  // auto: 200 (12 for the dyadic variant)
  std::size_t window = 0;   // auto: 50 (4 for the dyadic variant)
  std::string tau = "1/1048576";
  std::size_t min_keep = 8;
  std::size_t count = 8;        // split rounds / disjoint pairs
  std::string eps_floor = "1/4";
  std::size_t levels = 8;
  std::size_t scan = 0;
  std::size_t min_candidates = 8;
  std::size_t max_size = 8;     // pair reduction support bound
  std::string tol = "1/1024";   // constcoef / pairs clustering tolerance
  std::string eps = "1/1024";   // pairs corpus refutation bound
  std::string out, json_out, witness_out;
};

int run_transform(const TransformOpts& o) {
  MeasureSequence seq = resolve_input(o.in);
  AnalysisParams params{clamp_horizon(seq, pick(o.horizon, o.in, 12, 200)),
                        pick(o.window, o.in, 4, 50), parse_rational(o.tau), o.min_keep};
  Json report = Json::object();
  std::optional<MeasureSequence> out_seq;
  std::size_t out_len = 0;

  if (o.op == "split") {
    SplitResult s = kpr_split(seq, o.count, params);
    report["split"] = split_to_json(s);
    std::cout << "split: " << o.count << " rounds, chosen indices:";
    for (auto n : s.chosen) std::cout << ' ' << n;
    std::cout << "\n  residual norms:";
    for (const auto& r : s.residual_norms) std::cout << ' ' << to_string(r);
    std::cout << "\n";
  } else if (o.op == "disjointify") {
    DisjointifyResult d = disjointify(seq, o.count, params, parse_rational(o.eps_floor));
    out_seq = d.sequence;
    out_len = o.count;
    report["split"] = split_to_json(d.split);
    DisjointnessReport dj = disjointness_check(d.sequence, o.count);
    report["disjointness"] = disjointness_to_json(dj);
    std::cout << "disjointify: " << o.count << " measures, pairwise disjoint supports "
              << (dj.ok ? "verified" : "FAILED") << "\n";
    if (!dj.ok) return 1;
  } else if (o.op == "discretize") {
    std::size_t scan = o.scan ? o.scan : params.horizon;
    DiscretizeResult d = discretize(seq, o.levels, scan, o.min_candidates);
    DiscretenessReport cert = discreteness_certificate(d);
    out_seq = d.sequence;
    out_len = o.levels;
    report["discretize"] = discretize_to_json(d, cert);
    std::cout << "discretize: " << o.levels << " levels from scan " << scan
              << "; lambda norms:";
    for (const auto& n : d.lambda_norms) std::cout << ' ' << to_string(n);
    std::cout << "\n  discreteness certificate: " << (cert.ok ? "passes" : "FAILS") << "\n";
    if (!o.witness_out.empty()) {
      Json wits = Json::array();
      for (const auto& w : d.witnesses) wits.push_back(function_to_json(w));
      emit(o.witness_out, wits.dump(2) + "\n");
    }
    if (!cert.ok) return 1;
  } else if (o.op == "constcoef") {
    ConstantCoefficientsResult c =
        constant_coefficients(seq, o.max_size, parse_rational(o.tol), params.horizon);
    out_seq = c.sequence;
    out_len = c.indices.size();
    Json alpha = Json::array();
    for (const auto& a : c.alpha) alpha.push_back(to_string(a));
    report["alpha"] = std::move(alpha);
    report["indices"] = c.indices;
    std::cout << "constcoef: cluster of " << c.indices.size() << " indices, alpha =";
    for (const auto& a : c.alpha) std::cout << ' ' << to_string(a);
    std::cout << "\n";
  } else if (o.op == "pairs") {
    PairsResult pr = reduce_to_pairs(seq, o.max_size, params.horizon, parse_rational(o.tol),
                                     parse_rational(o.eps));
    out_seq = pr.sequence;
    out_len = *pr.sequence.length();
    report["strategy"] = pr.strategy;
    report["uniform_size"] = pr.uniform_size;
    report["pairs"] = out_len;
    report["decay"] = decay_report_to_json(pr.decay, false);
    std::cout << "pairs: " << out_len << " two-point measures via " << pr.strategy
              << "; corpus check " << (pr.decay.refuted ? "REFUTED" : "not refuted") << "\n";
  } else if (o.op == "renorm-half") {
    RenormalizeResult r = renormalize_half(seq, params.horizon);
    out_seq = r.sequence;
    out_len = r.kept_indices.size();
    report["kept"] = r.kept_indices;
    report["skipped_one_signed"] = r.skipped_one_signed;
    std::cout << "renorm-half: " << out_len << " measures pushed to the half/half sphere, "
              << r.skipped_one_signed.size() << " one-signed skipped\n";
  } else {
    throw validation_error("unknown --op '" + o.op +
                           "' (split|disjointify|discretize|constcoef|pairs|renorm-half)");
  }

  if (out_seq && !o.out.empty()) {
    std::ostringstream ss;
    write_sequence(ss, *out_seq, out_len);
    emit(o.out, ss.str());
    if (o.out != "-") std::cout << "wrote " << out_len << " measures to " << o.out << "\n";
  }
  if (!o.json_out.empty()) emit(o.json_out, report.dump(2) + "\n");
  return 0;
}

// ------------------------------------------------------------------ witness

struct WitnessOpts {
  std::string pairs_path;
  std::uint64_t checkpoint = 1000000;
  std::string json_out;
};

int run_witness(const WitnessOpts& o) {
  auto [xs, ys] = load_pairs(o.pairs_path);
  ObstructionWitness w = obstruction_witness(xs, ys, o.checkpoint);
  std::cout << "pairs:     " << xs.size() << " from " << o.pairs_path << "\n";
  std::cout << "witness:   " << w.set->str() << "  [" << w.source << "]\n";
  std::cout << "separates: " << w.separated.size() << " of " << w.scanned
            << " pairs, |mu([A])| = 1/2 exactly on each\n";
  std::cout << "density:   " << to_string(w.density_at_checkpoint) << " at N = " << w.checkpoint
            << "; profile verdict: " << verdict_name(w.profile.verdict) << "\n";
  if (!o.json_out.empty()) emit(o.json_out, witness_to_json(w).dump(2) + "\n");
  return 0;
}

// ------------------------------------------------------------------ pipeline

struct PipelineOpts {
  InputOpts in;
  std::size_t horizon = 0;  // 0 = per-variant default
  std::size_t window = 0;
  std::string tau;
  std::string eps = "1/16";
  std::string half_tol = "1/256";
  unsigned jobs = default_jobs();
  std::size_t count = 24;
  std::size_t levels = 8;
  std::size_t scan = 0;
  std::size_t min_candidates = 8;
  std::string eps_floor = "1/4";
  bool no_disjointify = false;
  bool no_discretize = false;
  bool renormalize = false;
  std::string out_dir = "jn-out";
};

int run_pipeline_cmd(const PipelineOpts& o) {
  RunConfig cfg;
  cfg.command = "pipeline";
  cfg.variant = o.in.variant.empty() ? "square1" : o.in.variant;
  cfg.alpha = parse_rational(o.in.alpha);

  bool dyadic = cfg.variant == "square4";
  cfg.horizon = o.horizon ? o.horizon : (dyadic ? 12 : 200);
  cfg.window = o.window ? o.window : (dyadic ? 4 : 50);
  // The truncation budget tau scales with the prefix-support size; square3's
  // support grows quadratically with the horizon, so it gets a finer default.
  cfg.tau = !o.tau.empty()          ? parse_rational(o.tau)
            : dyadic                ? pow2_inv(8)
            : cfg.variant == "square3" ? pow2_inv(24)
                                       : pow2_inv(20);
  cfg.eps = parse_rational(o.eps);
  cfg.half_tol = parse_rational(o.half_tol);
  cfg.jobs = o.jobs;
  cfg.disjoint_count = o.count;
  cfg.eps_floor = parse_rational(o.eps_floor);
  cfg.discretize_levels = o.levels;
  cfg.discretize_scan = o.scan;
  cfg.discretize_min_candidates = o.min_candidates;
  cfg.do_disjointify = !o.no_disjointify && !dyadic;
  cfg.do_discretize = !o.no_discretize && !dyadic;
  cfg.do_renormalize = o.renormalize || dyadic;

  PipelineResult res = o.in.in_path.empty()
                           ? run_pipeline(cfg)
                           : run_pipeline(load_sequence(o.in.in_path), cfg);
  write_pipeline_artifacts(o.out_dir, cfg, res);

  const char* order[] = {"generate",    "certificate", "classify",       "limit_mass",
                         "renormalize", "disjointify", "verify_disjoint", "discretize"};
  for (const char* name : order) {
    auto it = res.stages.find(name);
    if (it == res.stages.end()) continue;
    std::cout << "  " << name << ": " << it->second.status;
    if (!it->second.detail.empty()) std::cout << " (" << it->second.detail << ")";
    std::cout << "\n";
  }
  std::cout << "artifacts in " << o.out_dir << "\n";
  std::cout << (res.ok ? "pipeline ok" : "pipeline FAILED") << "\n";
  return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequences of finitely supported measures: generate, transform, verify"};
  app.require_subcommand(1);

  GenOpts gen_o;
  auto* gen_cmd = app.add_subcommand("gen", "generate a built-in sequence as JSONL");
  gen_cmd->add_option("--variant,--gen", gen_o.in.variant, "generator name")->required();
  gen_cmd->add_option("--alpha", gen_o.in.alpha, "square3 weight as p/q");
  gen_cmd->add_option("--n,--count", gen_o.count, "number of measures")->required();
  gen_cmd->add_option("--out", gen_o.out, "output path or - for stdout");

  VerifyOpts ver_o;
  auto* ver_cmd = app.add_subcommand("verify", "norms, half balance, weak-star decay");
  add_input_opts(ver_cmd, ver_o.in);
  ver_cmd->add_option("--horizon,--N", ver_o.horizon, "indices to check");
  ver_cmd->add_option("--eps", ver_o.eps, "tail decay bound as p/q");
  ver_cmd->add_option("--half-tol", ver_o.half_tol, "half balance tolerance as p/q");
  ver_cmd->add_option("--jobs", ver_o.jobs, "worker threads");
  ver_cmd->add_option("--json", ver_o.json_out, "write certificate JSON here");
  ver_cmd->add_option("--csv", ver_o.csv_out, "write per-row decay CSV here");

  AnalyzeOpts ana_o;
  auto* ana_cmd = app.add_subcommand("analyze", "pointwise classification and limit mass");
  add_input_opts(ana_cmd, ana_o.in);
  ana_cmd->add_option("--horizon,--N", ana_o.horizon, "indices to scan");
  ana_cmd->add_option("--window", ana_o.window, "trailing stability window");
  ana_cmd->add_option("--tau", ana_o.tau, "coefficient threshold as p/q");
  ana_cmd->add_option("--min-keep", ana_o.min_keep, "smallest admissible subsequence");
  ana_cmd->add_flag("--extract", ana_o.extract, "also extract a pointwise-convergent subsequence");
  ana_cmd->add_option("--json", ana_o.json_out, "write report JSON here");
  ana_cmd->add_option("--csv", ana_o.csv_out, "write per-point classification CSV here");

  TransformOpts tr_o;
  auto* tr_cmd = app.add_subcommand("transform", "sequence-to-sequence constructions");
  add_input_opts(tr_cmd, tr_o.in);
  tr_cmd->add_option("--op", tr_o.op, "split|disjointify|discretize|constcoef|pairs|renorm-half")
      ->required();
  tr_cmd->add_option("--horizon,--N", tr_o.horizon, "indices to scan");
  tr_cmd->add_option("--window", tr_o.window, "stability window (split/disjointify)");
  tr_cmd->add_option("--tau", tr_o.tau, "coefficient threshold as p/q");
  tr_cmd->add_option("--count,-K", tr_o.count, "split rounds / disjoint output count");
  tr_cmd->add_option("--eps-floor", tr_o.eps_floor, "peel norm floor as p/q");
  tr_cmd->add_option("--levels,-I", tr_o.levels, "discretization levels");
  tr_cmd->add_option("--scan", tr_o.scan, "discretization scan horizon");
  tr_cmd->add_option("--min-candidates,-Q", tr_o.min_candidates,
                     "candidate pool floor per level");
  tr_cmd->add_option("--max-size,-M", tr_o.max_size, "pair reduction support bound");
  tr_cmd->add_option("--tol", tr_o.tol, "clustering tolerance as p/q");
  tr_cmd->add_option("--eps", tr_o.eps, "pair corpus refutation bound as p/q");
  tr_cmd->add_option("--out", tr_o.out, "output sequence path or -");
  tr_cmd->add_option("--json", tr_o.json_out, "write transform report JSON here");
  tr_cmd->add_option("--witnesses", tr_o.witness_out, "write g-witness function trees here");

  WitnessOpts wit_o;
  auto* wit_cmd = app.add_subcommand("witness", "obstruction witness for two-point families");
  wit_cmd->add_option("--pairs", wit_o.pairs_path, "pairs file: one 'x y' per line")->required();
  wit_cmd->add_option("--N,--checkpoint", wit_o.checkpoint, "density checkpoint");
  wit_cmd->add_option("--json", wit_o.json_out, "write witness JSON here");

  PipelineOpts pipe_o;
  auto* pipe_cmd =
      app.add_subcommand("pipeline", "generate -> certify -> disjointify -> discretize");
  add_input_opts(pipe_cmd, pipe_o.in);
  pipe_cmd->add_option("--N,--horizon", pipe_o.horizon, "indices to generate and certify");
  pipe_cmd->add_option("--window", pipe_o.window, "stability window");
  pipe_cmd->add_option("--tau", pipe_o.tau, "coefficient threshold as p/q");
  pipe_cmd->add_option("--eps", pipe_o.eps, "decay bound as p/q");
  pipe_cmd->add_option("--half-tol", pipe_o.half_tol, "half balance tolerance as p/q");
  pipe_cmd->add_option("--jobs", pipe_o.jobs, "worker threads");
  pipe_cmd->add_option("--count,-K", pipe_o.count, "disjointified output count");
  pipe_cmd->add_option("--levels,-I", pipe_o.levels, "discretization levels");
  pipe_cmd->add_option("--scan", pipe_o.scan, "discretization scan horizon");
  pipe_cmd->add_option("--min-candidates,-Q", pipe_o.min_candidates,
                       "candidate pool floor per level");
  pipe_cmd->add_option("--eps-floor", pipe_o.eps_floor, "peel norm floor as p/q");
  pipe_cmd->add_flag("--no-disjointify", pipe_o.no_disjointify, "skip disjointification");
  pipe_cmd->add_flag("--no-discretize", pipe_o.no_discretize, "skip discretization");
  pipe_cmd->add_flag("--renormalize", pipe_o.renormalize, "push measures to the half/half sphere");
  pipe_cmd->add_option("--out-dir", pipe_o.out_dir, "artifact directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen_o);
    if (ver_cmd->parsed()) return run_verify(ver_o);
    if (ana_cmd->parsed()) return run_analyze(ana_o);
    if (tr_cmd->parsed()) return run_transform(tr_o);
    if (wit_cmd->parsed()) return run_witness(wit_o);
    if (pipe_cmd->parsed()) return run_pipeline_cmd(pipe_o);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const horizon_error& e) {
    std::cerr << "not concluded at this horizon: " << e.what() << "\n";
    return 1;
  } catch (const jn_error& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
