#pragma once

// Sequence-to-sequence transforms: peeling off a pointwise limit round by
// round, disjointification, small-set selection and neighborhood escape,
// discretization with clopen-style witness functions, constant-coefficient
// extraction, and reduction to two-point measures. Every certificate emitted
// here is an exact rational statement.

#include "jnseq/analysis.hpp"
#include "jnseq/verify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace jnseq {

struct SplitResult {
  std::vector<std::size_t> subsequence;     // pointwise-convergent index pool
  FinSuppMeasure limit;                     // its assembled pointwise limit
  std::vector<std::size_t> chosen;          // n_k, one per round, increasing
  std::vector<std::vector<Point>> peel_sets;  // A_k = supp(mu_{n_k}) \ B_k
  std::vector<FinSuppMeasure> peels;        // mu_{n_k} restricted to A_k
  std::vector<Rational> inner_distances;    // ||(mu_{n_k} - limit) on B_k||, < 1/(2k+2)
  std::vector<Rational> residual_norms;     // ||mu_{n_k} off A_k - limit||, < 1/(k+1)
};

// Round-by-round splitting: after extracting a pointwise-convergent
// subsequence with limit m*, round k fixes the finite set B_k = (all previous
// peel sets) ∪ supp(m*), picks the next index whose restriction to B_k is
// within 1/(2k+2) of m* in exact total variation, and peels the complement.
inline SplitResult kpr_split(const MeasureSequence& input, std::size_t rounds,
                             const AnalysisParams& params) {
  if (rounds == 0) throw validation_error("splitting needs at least one round");
  MeasureSequence seq = memoize_prefix(input, params.horizon);
  ExtractResult ex = extract_pointwise_convergent(seq, params);
  std::size_t support_size = prefix_support(seq, params.horizon).size();
  // limit coefficients are only tau-accurate per point; the round-K inner
  // bound must dominate the accumulated slack before any round is attempted
  if (params.tau * Rational(static_cast<long long>(support_size)) >=
      Rational(1, 2 * static_cast<long long>(rounds) + 2))
    throw validation_error(
        "limit accuracy too coarse for " + std::to_string(rounds) +
        " rounds: tau * |prefix support| must stay below 1/(2K+2)");

  SplitResult res;
  res.subsequence = ex.indices;
  res.limit = ex.limit;

  std::set<Point> b_set;
  for (const auto& [pt, c] : res.limit.atoms()) b_set.insert(pt);
  std::set<Point> peeled;  // union of previous A_k

  std::size_t cursor = 0;
  for (std::size_t k = 0; k < rounds; ++k) {
    std::set<Point> bk = peeled;
    bk.insert(b_set.begin(), b_set.end());
    Rational inner_bound(1, 2 * static_cast<long long>(k) + 2);
    std::optional<std::size_t> pick;
    Rational pick_dist;
    while (cursor < res.subsequence.size()) {
      std::size_t n = res.subsequence[cursor];
      FinSuppMeasure mu = seq.at(n);
      Rational d = tv_distance(mu.restrict(bk), res.limit.restrict(bk));
      if (d < inner_bound) {
        pick = n;
        pick_dist = d;
        ++cursor;
        break;
      }
      ++cursor;
    }
    if (!pick)
      throw horizon_error("round " + std::to_string(k) +
                          ": no remaining index meets the inner tolerance " +
                          to_string(inner_bound));
    FinSuppMeasure mu = seq.at(*pick);
    std::vector<Point> ak;
    for (const auto& [pt, c] : mu.atoms())
      if (!bk.count(pt)) ak.push_back(pt);
    std::set<Point> ak_set(ak.begin(), ak.end());
    FinSuppMeasure peel = mu.restrict(ak_set);
    Rational residual = tv_distance(mu - peel, res.limit);
    if (residual >= Rational(1, static_cast<long long>(k) + 1))
      throw jn_error("round " + std::to_string(k) + " residual " + to_string(residual) +
                     " breaches the certificate bound");
    res.chosen.push_back(*pick);
    res.peel_sets.push_back(std::move(ak));
    res.peels.push_back(std::move(peel));
    res.inner_distances.push_back(pick_dist);
    res.residual_norms.push_back(residual);
    peeled.insert(ak_set.begin(), ak_set.end());
  }
  return res;
}

struct DisjointifyResult {
  MeasureSequence sequence;  // normalized differences of consecutive peels
  SplitResult split;         // the underlying 2K-round splitting
  std::vector<Rational> peel_norms;
  Rational eps_floor;
};

// Pair consecutive peels and normalize their difference; peel norms below the
// floor abort loudly (a norm-convergent subsequence gives no disjoint family).
inline DisjointifyResult disjointify(const MeasureSequence& seq, std::size_t count,
                                     const AnalysisParams& params,
                                     const Rational& eps_floor = Rational(1, 4)) {
  if (count == 0) throw validation_error("disjointify needs count >= 1");
  if (eps_floor <= 0) throw validation_error("eps floor must be positive");
  DisjointifyResult res{MeasureSequence{}, kpr_split(seq, 2 * count, params), {}, eps_floor};
  std::vector<FinSuppMeasure> rhos;
  for (std::size_t k = 0; k < 2 * count; ++k) {
    Rational norm = res.split.peels[k].total_variation();
    res.peel_norms.push_back(norm);
    if (norm <= eps_floor)
      throw jn_error("peel " + std::to_string(k) + " has norm " + to_string(norm) +
                     " <= floor " + to_string(eps_floor) +
                     "; norm-convergent subsequence suspected");
  }
  for (std::size_t k = 0; k < count; ++k)
    rhos.push_back((res.split.peels[2 * k] - res.split.peels[2 * k + 1]).normalized());
  for (std::size_t a = 0; a < rhos.size(); ++a)
    for (std::size_t b = a + 1; b < rhos.size(); ++b)
      if (!supports_disjoint(rhos[a], rhos[b]))
        throw jn_error("disjointification produced overlapping supports at " +
                       std::to_string(a) + "," + std::to_string(b));
  SequenceMeta meta = seq.meta();
  meta.name += "/disjoint";
  meta.claimed_jn = true;
  meta.claimed_disjoint = true;
  meta.support_bound.reset();
  meta.provenance.push_back("disjointified: " + std::to_string(count) +
                            " normalized peel differences (eps floor " + to_string(eps_floor) +
                            ")");
  res.sequence = from_measures(seq.space(), std::move(rhos), std::move(meta));
  return res;
}

struct SmallSetSelection {
  std::size_t region_index = 0;
  std::vector<std::size_t> indices;            // first K qualifying indices
  std::vector<std::vector<Rational>> tallies;  // per scanned index, per region
};

// Pigeonhole selection: with m pairwise disjoint regions and norm-one
// measures, every index has some region of variation mass <= 1/m; return the
// first region that collects K qualifying indices.
inline SmallSetSelection select_small_set(const MeasureSequence& seq,
                                          const std::vector<Region>& regions, std::size_t K,
                                          std::size_t horizon) {
  if (regions.empty()) throw validation_error("need at least one region");
  if (K == 0) throw validation_error("need K >= 1 indices");
  for (const auto& r : regions)
    if (r.space != seq.space()) throw validation_error("region/sequence space mismatch");
  // structural separation when all regions are ball unions
  for (std::size_t a = 0; a < regions.size(); ++a)
    for (std::size_t b = a + 1; b < regions.size(); ++b) {
      if (regions[a].clopen || regions[b].clopen) continue;
      for (const auto& ba : regions[a].balls)
        for (const auto& bb : regions[b].balls) {
          Rational rsum = ba.radius + bb.radius;
          if (dist2(ba.center, bb.center) < rsum * rsum)
            throw validation_error("regions " + std::to_string(a) + "," + std::to_string(b) +
                                   " are not ball-separated");
        }
    }
  Rational threshold(1, static_cast<long long>(regions.size()));
  std::vector<std::vector<std::size_t>> hits(regions.size());
  SmallSetSelection sel;
  for (std::size_t n = 0; n < horizon; ++n) {
    FinSuppMeasure mu = seq.at(n);
    if (mu.total_variation() > 1)
      throw validation_error("index " + std::to_string(n) + " has total variation above one");
    std::vector<Rational> tally(regions.size(), Rational(0));
    for (const auto& [pt, c] : mu.atoms()) {
      int owner = -1;
      for (std::size_t i = 0; i < regions.size(); ++i) {
        if (!regions[i].contains(pt)) continue;
        if (owner >= 0)
          throw validation_error("regions " + std::to_string(owner) + "," + std::to_string(i) +
                                 " overlap at support point " + pt.str());
        owner = static_cast<int>(i);
        tally[i] += abs_r(c);
      }
    }
    sel.tallies.push_back(tally);
    for (std::size_t i = 0; i < regions.size(); ++i) {
      if (tally[i] <= threshold) {
        hits[i].push_back(n);
        if (hits[i].size() >= K) {
          sel.region_index = i;
          sel.indices = hits[i];
          return sel;
        }
      }
    }
  }
  std::string counts;
  for (const auto& h : hits) counts += (counts.empty() ? "" : ",") + std::to_string(h.size());
  throw horizon_error("no region collected " + std::to_string(K) +
                      " small-mass indices in the horizon (per-region hits: " + counts + ")");
}

struct EscapeStep {
  std::size_t base_index = 0;
  Region neighborhood;
  std::vector<std::size_t> indices;  // the K scanned successors
  std::vector<Rational> masses;      // their variation masses on the neighborhood
};

// Wrap an open neighborhood around supp(mu_base) that the next K measures
// escape: radius = a rational lower bound of half the minimum distance to
// their supports, so the certified masses are exactly zero.
inline EscapeStep escape_step(const MeasureSequence& seq, const Rational& eps, std::size_t K,
                              std::size_t base_index = 0) {
  if (eps <= 0) throw validation_error("escape bound eps must be positive");
  if (K == 0) throw validation_error("need K >= 1 successors");
  FinSuppMeasure base = seq.at(base_index);
  if (base.empty()) throw validation_error("base measure is zero");
  std::vector<Point> base_pts = base.support();
  std::vector<FinSuppMeasure> later;
  std::optional<Rational> min_d2;
  for (std::size_t j = 1; j <= K; ++j) {
    later.push_back(seq.at(base_index + j));
    for (const auto& [pt, c] : later.back().atoms())
      for (const auto& bp : base_pts) {
        Rational d2v = dist2(pt, bp);
        if (d2v == 0)
          throw validation_error("sequence is not disjointly supported: point " + pt.str() +
                                 " recurs at indices " + std::to_string(base_index) + "," +
                                 std::to_string(base_index + j));
        if (!min_d2 || rless(d2v, *min_d2)) min_d2 = d2v;
      }
  }
  Rational radius = sqrt_lower_bound(*min_d2) / 2;
  std::vector<Ball> balls;
  for (const auto& bp : base_pts) balls.push_back(Ball{bp, radius});
  EscapeStep step;
  step.base_index = base_index;
  step.neighborhood = Region::of_balls(seq.space(), std::move(balls));
  for (std::size_t j = 1; j <= K; ++j) {
    Rational mass = later[j - 1].variation_mass(step.neighborhood);
    if (mass >= eps)
      throw jn_error("successor " + std::to_string(base_index + j) + " keeps mass " +
                     to_string(mass) + " inside the neighborhood");
    step.indices.push_back(base_index + j);
    step.masses.push_back(mass);
  }
  return step;
}

struct DiscretizeResult {
  MeasureSequence sequence;             // rho_i, exactly normalized
  std::vector<std::size_t> level_indices;  // k_i into the scanned input
  std::vector<FinSuppMeasure> lambdas;
  std::vector<Rational> lambda_norms;   // each > 1/2, exact
  std::vector<TestFunction> witnesses;  // g_i, exactly 0 on levels <= i, > 0 beyond
  std::vector<Region> neighborhoods;    // U_n around each scanned support
  std::vector<std::size_t> band_choices;
};

namespace detail {

// Band index of an exact value v in the open bands (m/denom, (m+1)/denom).
inline std::optional<std::uint64_t> exact_band(const Rational& v, std::uint64_t denom) {
  if (v <= 0 || v >= 1) return std::nullopt;
  Rational scaled = v * Rational(static_cast<long long>(denom));
  Int m = num(scaled) / den(scaled);
  if (Rational(m) == scaled) return std::nullopt;  // exactly on an edge
  return static_cast<std::uint64_t>(m);
}

// Same, but for irrational values: binary search with exact comparisons.
inline std::optional<std::uint64_t> searched_band(const TestFunction& g, const Point& pt,
                                                  std::uint64_t denom) {
  if (g.cmp(pt, Rational(0)) <= 0) return std::nullopt;
  if (g.cmp(pt, Rational(1)) >= 0) return std::nullopt;
  std::uint64_t lo = 0, hi = denom;  // value in (lo/denom, hi/denom]
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    int c = g.cmp(pt, Rational(static_cast<long long>(mid), static_cast<long long>(denom)));
    if (c == 0) return std::nullopt;  // exactly on an edge
    (c > 0 ? lo : hi) = mid;
  }
  int ctop = g.cmp(pt, Rational(static_cast<long long>(hi), static_cast<long long>(denom)));
  if (ctop == 0) return std::nullopt;
  return lo;
}

inline std::optional<std::uint64_t> band_of(const TestFunction& g, const Point& pt,
                                            std::uint64_t denom) {
  Value v = g.eval(pt);
  if (v.exact) return exact_band(*v.exact, denom);
  return searched_band(g, pt, denom);
}

}  // namespace detail

// Lower each measure of a disjointly supported sequence onto a chain of
// witness functions g_0, g_1, ... such that g_i vanishes exactly on the
// supports of levels <= i and stays strictly positive on all later levels;
// the emitted rho_i are the normalized restrictions off the previous zero set.
inline DiscretizeResult discretize(const MeasureSequence& seq, std::size_t levels,
                                   std::size_t scan_horizon, std::size_t min_candidates = 8) {
  if (levels == 0) throw validation_error("discretize needs at least one level");
  if (!seq.meta().claimed_disjoint)
    throw validation_error("discretize requires a disjointly supported input (disjointify first)");
  if (scan_horizon <= levels)
    throw validation_error("scan horizon must exceed the level count");

  std::vector<FinSuppMeasure> nus = seq.prefix(scan_horizon);
  {
    std::map<Point, std::size_t> owner;
    for (std::size_t n = 0; n < nus.size(); ++n)
      for (const auto& [pt, c] : nus[n].atoms()) {
        auto [it, fresh] = owner.emplace(pt, n);
        if (!fresh)
          throw validation_error("input not disjointly supported: " + pt.str() +
                                 " at indices " + std::to_string(it->second) + "," +
                                 std::to_string(n));
      }
  }

  // neighborhoods: balls of radius below half the distance to every other
  // support; a double pass finds the contenders, exact arithmetic decides
  std::vector<std::vector<Point>> supports;
  for (const auto& nu : nus) supports.push_back(nu.support());
  std::vector<std::vector<double>> flats;
  flats.reserve(supports.size());
  for (const auto& s : supports) flats.push_back(flatten_points(s));
  std::vector<Region> regions;
  std::vector<TestFunction> bumps;
  for (std::size_t n = 0; n < nus.size(); ++n) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < nus.size(); ++m) {
      if (m == n) continue;
      for (std::size_t i = 0; i < supports[n].size(); ++i)
        for (std::size_t j = 0; j < supports[m].size(); ++j) {
          double dx = flats[n][2 * i] - flats[m][2 * j];
          double dy = flats[n][2 * i + 1] - flats[m][2 * j + 1];
          best = std::min(best, dx * dx + dy * dy);
        }
    }
    std::optional<Rational> min_d2;
    if (best < std::numeric_limits<double>::infinity()) {
      double cut = survivor_cut(best);
      for (std::size_t m = 0; m < nus.size(); ++m) {
        if (m == n) continue;
        for (std::size_t i = 0; i < supports[n].size(); ++i)
          for (std::size_t j = 0; j < supports[m].size(); ++j) {
            double dx = flats[n][2 * i] - flats[m][2 * j];
            double dy = flats[n][2 * i + 1] - flats[m][2 * j + 1];
            if (dx * dx + dy * dy > cut) continue;
            Rational d = dist2(supports[n][i], supports[m][j]);
            if (!min_d2 || rless(d, *min_d2)) min_d2 = d;
          }
      }
    }
    Rational radius = min_d2 ? sqrt_lower_bound(*min_d2) / 2 : Rational(1, 2);
    std::vector<Ball> balls;
    for (const auto& p : supports[n]) balls.push_back(Ball{p, radius});
    regions.push_back(Region::of_balls(seq.space(), std::move(balls)));
    bumps.push_back(urysohn_fn(supports[n], regions.back(), "h" + std::to_string(n)));
  }

  DiscretizeResult res;
  res.neighborhoods = regions;

  std::size_t k0 = 0;
  res.level_indices.push_back(k0);
  TestFunction g = bumps[k0];
  res.witnesses.push_back(g);
  res.band_choices.push_back(0);

  // slope-region masses |nu_l|(g^{-1}((0,1))) < 1 admit a level-0 candidate
  std::vector<std::size_t> cands;
  for (std::size_t l = k0 + 1; l < nus.size(); ++l) {
    Rational mass(0);
    for (const auto& [pt, c] : nus[l].atoms())
      if (g.cmp(pt, Rational(0)) > 0 && g.cmp(pt, Rational(1)) < 0) mass += abs_r(c);
    if (mass < 1) cands.push_back(l);
  }

  for (std::size_t i = 1; i < levels; ++i) {
    if (cands.empty())
      throw horizon_error("level " + std::to_string(i) + ": candidate pool exhausted");
    std::size_t ki = cands.front();
    TestFunction gp = min_combine(g, bumps[ki], "g" + std::to_string(i) + "'");
    std::uint64_t denom = (std::uint64_t(1) << i) + 1;
    Rational threshold = pow2_inv(static_cast<unsigned>(i));

    std::vector<std::size_t> pool;
    for (std::size_t l : cands)
      if (l > ki) pool.push_back(l);
    if (pool.size() < min_candidates)
      throw horizon_error("level " + std::to_string(i) + ": only " +
                          std::to_string(pool.size()) + " candidates beyond index " +
                          std::to_string(ki));

    // per-candidate interior band masses (sparse: off-support mass is zero)
    std::vector<std::map<std::uint64_t, Rational>> tallies(pool.size());
    std::map<std::uint64_t, std::size_t> bad_count;
    for (std::size_t c = 0; c < pool.size(); ++c) {
      for (const auto& [pt, coef] : nus[pool[c]].atoms()) {
        auto band = detail::band_of(gp, pt, denom);
        if (band) tallies[c][*band] += abs_r(coef);
      }
      for (const auto& [band, mass] : tallies[c])
        if (mass >= threshold) ++bad_count[band];
    }
    std::optional<std::uint64_t> chosen;
    for (std::uint64_t m = 0; m < denom; ++m) {
      auto it = bad_count.find(m);
      std::size_t good = pool.size() - (it == bad_count.end() ? 0 : it->second);
      if (good >= min_candidates) {
        chosen = m;
        break;
      }
    }
    if (!chosen)
      throw horizon_error("level " + std::to_string(i) +
                          ": no band keeps enough low-mass candidates");
    Rational lo(static_cast<long long>(*chosen), static_cast<long long>(denom));
    Rational hi(static_cast<long long>(*chosen) + 1, static_cast<long long>(denom));
    g = reparam(lo, hi, gp, "g" + std::to_string(i));

    std::vector<std::size_t> next;
    for (std::size_t c = 0; c < pool.size(); ++c) {
      auto it = tallies[c].find(*chosen);
      Rational mass = it == tallies[c].end() ? Rational(0) : it->second;
      if (mass < threshold) next.push_back(pool[c]);
    }
    res.level_indices.push_back(ki);
    res.witnesses.push_back(g);
    res.band_choices.push_back(*chosen);
    cands = std::move(next);
  }

  std::vector<FinSuppMeasure> rhos;
  for (std::size_t i = 0; i < levels; ++i) {
    const FinSuppMeasure& nu = nus[res.level_indices[i]];
    FinSuppMeasure lambda =
        i == 0 ? nu : nu.restrict_if([&](const Point& pt) {
          return res.witnesses[i - 1].cmp(pt, Rational(0)) > 0;
        });
    Rational norm = lambda.total_variation();
    if (norm <= Rational(1, 2))
      throw jn_error("level " + std::to_string(i) + " keeps only mass " + to_string(norm) +
                     " off the previous zero set");
    res.lambda_norms.push_back(norm);
    res.lambdas.push_back(lambda);
    rhos.push_back(lambda.normalized());
  }
  SequenceMeta meta = seq.meta();
  meta.name += "/discrete";
  meta.claimed_disjoint = true;
  meta.provenance.push_back("discretized onto " + std::to_string(levels) +
                            " witness levels (scan horizon " + std::to_string(scan_horizon) +
                            ")");
  res.sequence = from_measures(seq.space(), std::move(rhos), std::move(meta));
  return res;
}

struct DiscretenessReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::optional<Rational> min_support_dist2;  // over points of distinct levels
};

// Exact zero/positivity table of the witnesses against the emitted supports.
inline DiscretenessReport discreteness_certificate(const DiscretizeResult& d) {
  DiscretenessReport rep;
  std::size_t L = d.witnesses.size();
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j)
      for (const auto& [pt, c] : d.lambdas[j].atoms()) {
        int cmp = d.witnesses[i].cmp(pt, Rational(0));
        if (j <= i && cmp != 0) {
          rep.ok = false;
          rep.failures.push_back("g" + std::to_string(i) + " not zero at level " +
                                 std::to_string(j) + " point " + pt.str());
        }
        if (j > i && cmp <= 0) {
          rep.ok = false;
          rep.failures.push_back("g" + std::to_string(i) + " not positive at level " +
                                 std::to_string(j) + " point " + pt.str());
        }
      }
  for (std::size_t a = 0; a < L; ++a)
    for (std::size_t b = a + 1; b < L; ++b)
      for (const auto& [pa, ca] : d.lambdas[a].atoms())
        for (const auto& [pb, cb] : d.lambdas[b].atoms()) {
          Rational dd = dist2(pa, pb);
          if (!rep.min_support_dist2 || dd < *rep.min_support_dist2)
            rep.min_support_dist2 = dd;
        }
  if (rep.min_support_dist2 && *rep.min_support_dist2 == 0) rep.ok = false;
  return rep;
}

struct ClusterResult {
  std::vector<Rational> alpha;          // canonical descending coefficients
  std::vector<std::size_t> members;     // positions of the densest tau-ball
  std::vector<FinSuppMeasure> nus;      // member supports rebuilt with alpha
  std::vector<Rational> distances;      // ||nu - mu||, each <= 2*tau
};

namespace detail {

struct CanonicalAtoms {
  std::vector<Rational> coefs;  // sorted descending, ties by ascending point
  std::vector<Point> points;
};

inline CanonicalAtoms canonical_atoms(const FinSuppMeasure& mu) {
  std::vector<std::pair<Rational, Point>> entries;
  for (const auto& [pt, c] : mu.atoms()) entries.emplace_back(c, pt);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  CanonicalAtoms out;
  for (auto& [c, p] : entries) {
    out.coefs.push_back(c);
    out.points.push_back(p);
  }
  return out;
}

inline Rational l1_distance(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += abs_r(a[i] - b[i]);
  return s;
}

}  // namespace detail

inline ClusterResult cluster_constant_coefficients(const std::vector<FinSuppMeasure>& ms,
                                                   std::size_t M, const Rational& tau) {
  if (ms.empty()) throw validation_error("empty scan for coefficient clustering");
  if (M == 0) throw validation_error("support size must be >= 1");
  std::vector<detail::CanonicalAtoms> canon;
  for (std::size_t n = 0; n < ms.size(); ++n) {
    if (ms[n].support_size() != M)
      throw validation_error("index " + std::to_string(n) + " has support size " +
                             std::to_string(ms[n].support_size()) + ", expected " +
                             std::to_string(M));
    if (ms[n].total_variation() != 1)
      throw validation_error("index " + std::to_string(n) + " is not on the unit sphere");
    canon.push_back(detail::canonical_atoms(ms[n]));
  }
  std::size_t best_center = 0, best_count = 0;
  for (std::size_t n = 0; n < canon.size(); ++n) {
    std::size_t count = 0;
    for (std::size_t m = 0; m < canon.size(); ++m)
      if (detail::l1_distance(canon[n].coefs, canon[m].coefs) <= tau) ++count;
    if (count > best_count) {
      best_count = count;
      best_center = n;
    }
  }
  ClusterResult res;
  for (std::size_t m = 0; m < canon.size(); ++m)
    if (detail::l1_distance(canon[best_center].coefs, canon[m].coefs) <= tau)
      res.members.push_back(m);
  res.alpha = canon[res.members.front()].coefs;  // snapped: exact unit l1 norm
  for (std::size_t m : res.members) {
    std::vector<std::pair<Point, Rational>> atoms;
    for (std::size_t i = 0; i < M; ++i) atoms.emplace_back(canon[m].points[i], res.alpha[i]);
    FinSuppMeasure nu = FinSuppMeasure::make(ms[m].space(), atoms);
    res.distances.push_back(tv_distance(nu, ms[m]));
    res.nus.push_back(std::move(nu));
  }
  return res;
}

struct ConstantCoefficientsResult {
  std::vector<Rational> alpha;
  std::vector<std::size_t> indices;  // into the original sequence
  MeasureSequence sequence;
  std::vector<Rational> distances;
};

inline ConstantCoefficientsResult constant_coefficients(const MeasureSequence& seq,
                                                        std::size_t M, const Rational& tau,
                                                        std::size_t horizon) {
  ClusterResult cl = cluster_constant_coefficients(seq.prefix(horizon), M, tau);
  Rational cap = tau * Rational(static_cast<long long>(M));
  for (const auto& d : cl.distances)
    if (M >= 2 && d >= cap)
      throw jn_error("cluster member strays " + to_string(d) + " from alpha (cap " +
                     to_string(cap) + ")");
  Rational sum(0);
  for (const auto& a : cl.alpha) sum += abs_r(a);
  if (sum != 1) throw jn_error("alpha lost the unit sphere: " + to_string(sum));
  SequenceMeta meta = seq.meta();
  meta.name += "/constcoef";
  meta.support_bound = M;
  meta.provenance.push_back("constant-coefficient cluster of " +
                            std::to_string(cl.members.size()) + " of " +
                            std::to_string(horizon) + " indices");
  ConstantCoefficientsResult out{std::move(cl.alpha), std::move(cl.members),
                                 from_measures(seq.space(), std::move(cl.nus), std::move(meta)),
                                 std::move(cl.distances)};
  return out;
}

struct PairsResult {
  MeasureSequence sequence;  // nu_j = delta_x/2 - delta_y/2
  std::vector<Point> xs, ys;
  std::string strategy;      // "disjoint-subfamily" or "transient-chain"
  std::size_t uniform_size = 0;
  std::vector<Rational> alpha;
  DecayReport decay;         // corpus validation of the emitted pairs
};

// Reduce a bounded-support sequence to two-point measures: uniformize the
// support size, drop vanishing atoms, cluster coefficients, take the extreme
// positive/negative points of each member, then select a disjoint family
// (directly, or by chaining once-occurring points when anchors repeat).
inline PairsResult reduce_to_pairs(const MeasureSequence& seq, std::size_t max_size,
                                   std::size_t horizon, const Rational& tau,
                                   const Rational& eps = pow2_inv(10)) {
  if (max_size < 2) throw validation_error("pair reduction needs max support size >= 2");
  std::vector<FinSuppMeasure> ms = seq.prefix(horizon);
  std::vector<std::size_t> origin(ms.size());
  for (std::size_t i = 0; i < origin.size(); ++i) origin[i] = i;

  for (std::size_t n = 0; n < ms.size(); ++n)
    if (ms[n].support_size() > max_size)
      throw validation_error("index " + std::to_string(n) + " exceeds the support bound");

  for (int pass = 0; pass < 2; ++pass) {
    // (a) keep the most common support size (ties toward the smaller size)
    std::map<std::size_t, std::size_t> hist;
    for (const auto& m : ms) ++hist[m.support_size()];
    std::size_t mode = 0, mode_count = 0;
    for (const auto& [size, count] : hist)
      if (count > mode_count) {
        mode = size;
        mode_count = count;
      }
    std::vector<FinSuppMeasure> kept;
    std::vector<std::size_t> kept_origin;
    for (std::size_t n = 0; n < ms.size(); ++n)
      if (ms[n].support_size() == mode) {
        kept.push_back(ms[n]);
        kept_origin.push_back(origin[n]);
      }
    ms = std::move(kept);
    origin = std::move(kept_origin);

    // (b) drop vanishing atoms and renormalize; if nothing dropped we are done
    bool dropped = false;
    for (auto& m : ms) {
      FinSuppMeasure cut = m.restrict_if([&](const Point& pt) { return abs_r(m.at(pt)) >= tau; });
      if (cut.support_size() != m.support_size()) {
        dropped = true;
        if (cut.empty())
          throw validation_error("a member vanished entirely below the drop threshold");
        m = cut.normalized();
      }
    }
    if (!dropped) break;
  }
  if (ms.size() < 2) throw horizon_error("fewer than two members after size uniformization");
  std::size_t M = ms.front().support_size();

  ClusterResult cl = cluster_constant_coefficients(ms, M, tau);
  if (cl.alpha.front() <= 0 || cl.alpha.back() >= 0)
    throw jn_error("cluster coefficients are one-signed; no pair can be extracted");

  // (d) anchor points: the extreme positive and negative atoms of each member
  std::vector<Point> xs, ys;
  for (std::size_t m : cl.members) {
    detail::CanonicalAtoms ca = detail::canonical_atoms(ms[m]);
    xs.push_back(ca.points.front());
    ys.push_back(ca.points.back());
  }

  // (e) disjoint family: greedy selection, else chain the once-occurring points
  std::vector<std::size_t> kept;
  {
    std::set<Point> used;
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (!used.count(xs[j]) && !used.count(ys[j])) {
        kept.push_back(j);
        used.insert(xs[j]);
        used.insert(ys[j]);
      }
  }
  std::string strategy = "disjoint-subfamily";
  std::vector<Point> px, py;
  std::size_t min_family = std::max<std::size_t>(8, xs.size() / 4);
  if (kept.size() >= min_family || kept.size() == xs.size()) {
    for (std::size_t j : kept) {
      px.push_back(xs[j]);
      py.push_back(ys[j]);
    }
  } else {
    strategy = "transient-chain";
    std::map<Point, std::size_t> occurrences;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      ++occurrences[xs[j]];
      ++occurrences[ys[j]];
    }
    std::vector<Point> chain;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (occurrences[xs[j]] == 1) chain.push_back(xs[j]);
      if (occurrences[ys[j]] == 1) chain.push_back(ys[j]);
    }
    if (chain.size() < 2)
      throw jn_error("pair anchors repeat and no transient point chain exists");
    for (std::size_t j = 0; j + 1 < chain.size(); j += 2) {
      px.push_back(chain[j]);
      py.push_back(chain[j + 1]);
    }
  }

  std::vector<FinSuppMeasure> pairs;
  for (std::size_t j = 0; j < px.size(); ++j) {
    if (px[j] == py[j]) throw jn_error("degenerate pair at position " + std::to_string(j));
    pairs.push_back(FinSuppMeasure::make(
        seq.space(), {{px[j], Rational(1, 2)}, {py[j], Rational(-1, 2)}}));
  }
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a + 1; b < pairs.size(); ++b)
      if (!supports_disjoint(pairs[a], pairs[b]))
        throw jn_error("emitted pairs overlap at positions " + std::to_string(a) + "," +
                       std::to_string(b));

  SequenceMeta meta = seq.meta();
  meta.name += "/pairs";
  meta.claimed_jn = true;
  meta.claimed_disjoint = true;
  meta.support_bound = 2;
  meta.provenance.push_back("reduced to two-point measures (" + strategy + ", " +
                            std::to_string(pairs.size()) + " pairs)");
  PairsResult out;
  out.xs = px;
  out.ys = py;
  out.strategy = strategy;
  out.uniform_size = M;
  out.alpha = cl.alpha;
  out.sequence = from_measures(seq.space(), std::move(pairs), std::move(meta));
  out.decay = weak_star_report(out.sequence, corpus(seq.space()), *out.sequence.length(), eps);
  if (out.decay.refuted) {
    const auto& w = *out.decay.witness;
    throw jn_error("emitted pairs are refuted by corpus member " + w.label + " at index " +
                   std::to_string(w.n));
  }
  return out;
}

}  // namespace jnseq
