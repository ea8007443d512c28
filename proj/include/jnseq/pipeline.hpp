#pragma once

// End-to-end orchestration: generate (or accept) a sequence, certify the
// weak-star decay claims against a deterministic corpus, classify pointwise
// behavior, then run the structural chain (disjointify, discretize) and emit
// byte-stable artifacts. Every stage can be toggled; failures are recorded,
// not papered over.

#include "jnseq/density.hpp"
#include "jnseq/generators.hpp"
#include "jnseq/io.hpp"
#include "jnseq/transforms.hpp"

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace jnseq {

struct RunConfig {
  std::string command = "pipeline";
  std::string variant = "square1";  // generator name; ignored when a sequence is supplied
  Rational alpha = Rational(1, 2);  // square3 weight
  std::size_t horizon = 120;
  std::size_t window = 30;
  Rational tau = pow2_inv(20);
  std::size_t min_keep = 8;
  Rational eps = pow2_inv(10);
  Rational half_tol = pow2_inv(8);
  unsigned jobs = 1;
  CorpusConfig corpus;
  bool do_disjointify = true;
  std::size_t disjoint_count = 16;
  Rational eps_floor = Rational(1, 4);
  bool do_discretize = true;
  std::size_t discretize_levels = 4;
  std::size_t discretize_scan = 0;  // 0 = all disjointified measures
  std::size_t discretize_min_candidates = 8;
  bool do_renormalize = false;
  Rational density_delta = Rational(1, 64);  // density verdict margin

  AnalysisParams analysis() const { return AnalysisParams{horizon, window, tau, min_keep}; }
};

inline Json run_config_to_json(const RunConfig& c) {
  Json j = Json::object();
  j["command"] = c.command;
  j["variant"] = c.variant;
  j["alpha"] = rational_to_json(c.alpha);
  j["horizon"] = c.horizon;
  j["window"] = c.window;
  j["tau"] = rational_to_json(c.tau);
  j["min_keep"] = c.min_keep;
  j["eps"] = rational_to_json(c.eps);
  j["half_tol"] = rational_to_json(c.half_tol);
  j["jobs"] = c.jobs;
  j["corpus"] = corpus_config_to_json(c.corpus);
  j["do_disjointify"] = c.do_disjointify;
  j["disjoint_count"] = c.disjoint_count;
  j["eps_floor"] = rational_to_json(c.eps_floor);
  j["do_discretize"] = c.do_discretize;
  j["discretize_levels"] = c.discretize_levels;
  j["discretize_scan"] = c.discretize_scan;
  j["discretize_min_candidates"] = c.discretize_min_candidates;
  j["do_renormalize"] = c.do_renormalize;
  j["density_delta"] = rational_to_json(c.density_delta);
  return j;
}

// ------------------------------------------------------- report -> JSON/CSV

inline Json value_to_json(double approx, const std::optional<Rational>& exact) {
  Json j = Json::object();
  j["approx"] = approx;
  if (exact)
    j["exact"] = rational_to_json(*exact);
  else
    j["exact"] = nullptr;
  return j;
}

inline Json decay_report_to_json(const DecayReport& rep, bool include_rows = true) {
  Json j = Json::object();
  j["eps"] = rational_to_json(rep.eps);
  j["tail_start"] = rep.tail_start;
  j["refuted"] = rep.refuted;
  if (rep.witness) {
    Json w = Json::object();
    w["n"] = rep.witness->n;
    w["function"] = rep.witness->label;
    w["value"] = value_to_json(rep.witness->value, rep.witness->exact);
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  j["sup_tail"] = rep.sup_tail;
  if (rep.fitted_exponent)
    j["fitted_exponent"] = *rep.fitted_exponent;
  else
    j["fitted_exponent"] = nullptr;
  if (include_rows) {
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
      Json row = Json::object();
      row["n"] = r.n;
      row["max_abs"] = value_to_json(r.max_abs, r.max_abs_exact);
      row["argmax"] = r.argmax;
      row["norm_defect"] = rational_to_json(r.norm_defect);
      row["support_size"] = r.support_size;
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
  }
  return j;
}

inline Json certificate_to_json(const Certificate& cert, bool include_rows = true) {
  Json j = Json::object();
  j["ok"] = cert.ok;
  j["norms_ok"] = cert.norms_ok;
  if (cert.first_norm_defect) {
    Json d = Json::object();
    d["n"] = cert.first_norm_defect->n;
    d["total_variation"] = rational_to_json(cert.first_norm_defect->total_variation);
    j["first_norm_defect"] = std::move(d);
  } else {
    j["first_norm_defect"] = nullptr;
  }
  j["half_balance_ok"] = cert.half_balance_ok;
  j["half_tolerance"] = rational_to_json(cert.half_tolerance);
  if (cert.first_half_violation) {
    Json h = Json::object();
    h["n"] = cert.first_half_violation->n;
    h["pos_mass"] = rational_to_json(cert.first_half_violation->pos_mass);
    h["neg_mass"] = rational_to_json(cert.first_half_violation->neg_mass);
    j["first_half_violation"] = std::move(h);
  } else {
    j["first_half_violation"] = nullptr;
  }
  j["decay"] = decay_report_to_json(cert.decay, include_rows);
  return j;
}

inline Json classification_to_json(const Classification& cls) {
  Json j = Json::object();
  j["horizon"] = cls.horizon;
  j["window"] = cls.window;
  j["tau"] = rational_to_json(cls.tau);
  std::size_t l = 0, li = 0, ls = 0, tr = 0;
  for (const auto& [pt, rep] : cls.points) {
    switch (rep.label) {
      case PointLabel::limit: ++l; break;
      case PointLabel::liminf_only: ++li; break;
      case PointLabel::limsup_only: ++ls; break;
      case PointLabel::transient: ++tr; break;
    }
  }
  j["counts"] = Json{{"L", l}, {"LI-only", li}, {"LS-only", ls}, {"transient", tr}};
  Json atoms_json = Json::array();
  for (const auto& [pt, est] : cls.limit_atoms) {
    Json a = Json::object();
    a["point"] = point_to_json(pt);
    a["estimate"] = rational_to_json(est);
    atoms_json.push_back(std::move(a));
  }
  j["limit_atoms"] = std::move(atoms_json);
  return j;
}

inline std::vector<std::vector<std::string>> classification_csv_rows(const Classification& cls) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [pt, rep] : cls.points)
    rows.push_back({pt.str(), label_name(rep.label), to_string(rep.estimate),
                    to_string(rep.window_min), to_string(rep.window_max)});
  return rows;
}

inline Json limit_mass_to_json(const LimitMassReport& rep) {
  Json j = Json::object();
  j["mass_sum"] = rational_to_json(rep.mass_sum);
  j["limit_count"] = rep.limit_count;
  j["bound"] = rational_to_json(rep.bound);
  j["violated"] = rep.violated;
  return j;
}

inline Json disjointness_to_json(const DisjointnessReport& rep) {
  Json j = Json::object();
  j["ok"] = rep.ok;
  if (rep.collision) {
    j["collision_point"] = point_to_json(*rep.collision);
    j["first_index"] = rep.first_index;
    j["second_index"] = rep.second_index;
  }
  return j;
}

inline Json split_to_json(const SplitResult& s) {
  Json j = Json::object();
  j["subsequence"] = s.subsequence;
  j["limit"] = measure_to_json(s.limit);
  j["chosen"] = s.chosen;
  Json inner = Json::array(), residual = Json::array();
  for (const auto& d : s.inner_distances) inner.push_back(to_string(d));
  for (const auto& r : s.residual_norms) residual.push_back(to_string(r));
  j["inner_distances"] = std::move(inner);
  j["residual_norms"] = std::move(residual);
  return j;
}

inline Json discretize_to_json(const DiscretizeResult& d, const DiscretenessReport& cert) {
  Json j = Json::object();
  j["level_indices"] = d.level_indices;
  j["band_choices"] = d.band_choices;
  Json norms = Json::array();
  for (const auto& n : d.lambda_norms) norms.push_back(to_string(n));
  j["lambda_norms"] = std::move(norms);
  Json wits = Json::array();
  for (const auto& w : d.witnesses) wits.push_back(function_to_json(w));
  j["witnesses"] = std::move(wits);
  Json c = Json::object();
  c["ok"] = cert.ok;
  c["failures"] = cert.failures;
  if (cert.min_support_dist2)
    c["min_support_dist2"] = rational_to_json(*cert.min_support_dist2);
  else
    c["min_support_dist2"] = nullptr;
  j["certificate"] = std::move(c);
  return j;
}

inline Json witness_to_json(const ObstructionWitness& w) {
  Json j = Json::object();
  j["set"] = w.set->str();
  j["source"] = w.source;
  j["orientation_positive"] = w.orientation_positive;
  j["separated_indices"] = w.separated;
  j["scanned"] = w.scanned;
  j["checkpoint"] = w.checkpoint;
  j["density_at_checkpoint"] = rational_to_json(w.density_at_checkpoint);
  Json prof = Json::object();
  prof["verdict"] = verdict_name(w.profile.verdict);
  prof["delta"] = rational_to_json(w.profile.delta);
  Json rows = Json::array();
  for (const auto& r : w.profile.rows) {
    Json row = Json::object();
    row["checkpoint"] = r.checkpoint;
    row["count"] = r.count;
    row["density"] = rational_to_json(r.density);
    rows.push_back(std::move(row));
  }
  prof["rows"] = std::move(rows);
  j["profile"] = std::move(prof);
  return j;
}

// ---------------------------------------------------------------- the chain

struct StageNote {
  std::string status;  // "ok", "skipped", or "failed"
  std::string detail;
};

struct PipelineResult {
  MeasureSequence sequence;
  Certificate certificate;
  Classification classification;
  LimitMassReport limit_mass;
  std::optional<RenormalizeResult> renormalized;
  std::optional<DisjointifyResult> disjoint;
  std::optional<DisjointnessReport> disjointness;  // exact, on the disjointified output
  std::optional<DecayReport> disjoint_decay;       // weak-star on the disjointified output
  std::optional<DiscretizeResult> discrete;
  std::optional<DiscretenessReport> discreteness;
  std::map<std::string, StageNote> stages;
  bool ok = false;
};

inline PipelineResult run_pipeline(const MeasureSequence& input, const RunConfig& cfg) {
  if (cfg.window == 0 || cfg.window > cfg.horizon)
    throw validation_error("window must lie in [1, horizon]");
  PipelineResult res;
  MeasureSequence seq = memoize_prefix(input, cfg.horizon);
  res.sequence = seq;
  res.stages["generate"] = {"ok", seq.meta().name};

  std::vector<TestFunction> fns = corpus(seq.space(), cfg.corpus);
  res.certificate = jn_certificate(seq, fns, cfg.horizon, cfg.eps, cfg.half_tol, cfg.jobs);
  res.stages["certificate"] = {res.certificate.ok ? "ok" : "failed",
                               res.certificate.decay.refuted ? "decay refuted" : ""};

  AnalysisParams params = cfg.analysis();
  res.classification = classify_points(seq, params);
  res.stages["classify"] = {"ok", ""};
  res.limit_mass = limit_mass_bound(res.classification, params);
  res.stages["limit_mass"] = {res.limit_mass.violated ? "failed" : "ok",
                              "mass " + to_string(res.limit_mass.mass_sum) + " vs bound " +
                                  to_string(res.limit_mass.bound)};

  if (cfg.do_renormalize) {
    res.renormalized = renormalize_half(seq, cfg.horizon);
    res.stages["renormalize"] = {"ok", std::to_string(res.renormalized->kept_indices.size()) +
                                           " kept, " +
                                           std::to_string(res.renormalized->skipped_one_signed.size()) +
                                           " skipped"};
  } else {
    res.stages["renormalize"] = {"skipped", "disabled"};
  }

  if (cfg.do_disjointify) {
    try {
      res.disjoint = disjointify(seq, cfg.disjoint_count, params, cfg.eps_floor);
      res.stages["disjointify"] = {"ok",
                                   std::to_string(cfg.disjoint_count) + " disjoint measures"};
      res.disjointness = disjointness_check(res.disjoint->sequence, cfg.disjoint_count);
      res.disjoint_decay =
          weak_star_report(res.disjoint->sequence, fns, cfg.disjoint_count, cfg.eps, cfg.jobs);
      bool verify_ok = res.disjointness->ok && !res.disjoint_decay->refuted;
      res.stages["verify_disjoint"] = {
          verify_ok ? "ok" : "failed",
          !res.disjointness->ok      ? "support collision"
          : res.disjoint_decay->refuted ? "decay refuted on disjointified output"
                                        : "disjoint and not refuted"};
    } catch (const jn_error& e) {
      res.stages["disjointify"] = {"failed", e.what()};
    }
  } else {
    res.stages["disjointify"] = {"skipped", "disabled"};
  }

  if (cfg.do_discretize && res.disjoint) {
    std::size_t scan = cfg.discretize_scan ? cfg.discretize_scan : cfg.disjoint_count;
    scan = std::min(scan, cfg.disjoint_count);
    try {
      res.discrete = discretize(res.disjoint->sequence, cfg.discretize_levels, scan,
                                cfg.discretize_min_candidates);
      res.discreteness = discreteness_certificate(*res.discrete);
      res.stages["discretize"] = {res.discreteness->ok ? "ok" : "failed",
                                  res.discreteness->ok
                                      ? std::to_string(cfg.discretize_levels) + " levels"
                                      : res.discreteness->failures.front()};
    } catch (const jn_error& e) {
      res.stages["discretize"] = {"failed", e.what()};
    }
  } else if (cfg.do_discretize) {
    res.stages["discretize"] = {"skipped", "no disjointified input"};
  } else {
    res.stages["discretize"] = {"skipped", "disabled"};
  }

  res.ok = true;
  for (const auto& [name, note] : res.stages)
    if (note.status == "failed") res.ok = false;
  return res;
}

inline PipelineResult run_pipeline(const RunConfig& cfg) {
  return run_pipeline(generator_by_name(cfg.variant, cfg.alpha), cfg);
}

inline Json pipeline_summary_json(const RunConfig& cfg, const PipelineResult& res) {
  Json j = Json::object();
  j["config"] = run_config_to_json(cfg);
  Json stages = Json::object();
  for (const auto& [name, note] : res.stages) {
    Json s = Json::object();
    s["status"] = note.status;
    s["detail"] = note.detail;
    stages[name] = std::move(s);
  }
  j["stages"] = std::move(stages);
  j["certificate"] = certificate_to_json(res.certificate, /*include_rows=*/false);
  j["classification"] = classification_to_json(res.classification);
  j["limit_mass"] = limit_mass_to_json(res.limit_mass);
  if (res.disjoint) j["split"] = split_to_json(res.disjoint->split);
  if (res.disjointness) j["disjointness"] = disjointness_to_json(*res.disjointness);
  if (res.disjoint_decay) j["disjoint_decay"] = decay_report_to_json(*res.disjoint_decay, false);
  if (res.discrete && res.discreteness)
    j["discretize"] = discretize_to_json(*res.discrete, *res.discreteness);
  j["ok"] = res.ok;
  return j;
}

inline void write_pipeline_artifacts(const std::string& dir, const RunConfig& cfg,
                                     const PipelineResult& res) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto at = [&](const char* name) { return (fs::path(dir) / name).string(); };

  {
    std::ostringstream ss;
    write_sequence(ss, res.sequence, cfg.horizon);
    write_text_atomic(at("sequence.jsonl"), ss.str());
  }
  {
    Json j = certificate_to_json(res.certificate);
    j["config"] = run_config_to_json(cfg);
    write_text_atomic(at("certificate.json"), j.dump(2) + "\n");
  }
  {
    std::ostringstream ss;
    std::vector<std::string> config_lines = {"columns: point,label,estimate,window_min,window_max",
                                             "tau: " + to_string(cfg.tau),
                                             "window: " + std::to_string(cfg.window)};
    write_csv(ss, config_lines, {"point", "label", "estimate", "window_min", "window_max"},
              classification_csv_rows(res.classification));
    write_text_atomic(at("classification.csv"), ss.str());
  }
  {
    std::ostringstream ss;
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : half_split_profile(res.sequence, cfg.horizon))
      rows.push_back({std::to_string(r.n), to_string(r.pos_mass), to_string(r.neg_mass),
                      to_string(r.total_mass), std::to_string(r.support_size)});
    write_csv(ss, {"variant: " + cfg.variant},
              {"n", "pos_mass", "neg_mass", "total_mass", "support_size"}, rows);
    write_text_atomic(at("halfsplit.csv"), ss.str());
  }
  if (res.disjoint) {
    std::ostringstream ss;
    write_sequence(ss, res.disjoint->sequence, cfg.disjoint_count);
    write_text_atomic(at("disjoint.jsonl"), ss.str());
  }
  if (res.discrete && res.discreteness) {
    std::ostringstream ss;
    write_sequence(ss, res.discrete->sequence, cfg.discretize_levels);
    write_text_atomic(at("discrete.jsonl"), ss.str());
    write_text_atomic(at("witnesses.json"),
                      discretize_to_json(*res.discrete, *res.discreteness).dump(2) + "\n");
  }
  write_text_atomic(at("summary.json"), pipeline_summary_json(cfg, res).dump(2) + "\n");
}

}  // namespace jnseq
