#pragma once

// Lazy sequences of finitely supported measures. Producers are pure functions
// of the index (safe to evaluate from worker threads); metadata records what
// the sequence claims about itself plus a provenance chain of the transforms
// that produced it.

#include "jnseq/measure.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace jnseq {

struct SequenceMeta {
  std::string name;
  bool claimed_jn = false;        // claims weak-star null with norm one
  bool claimed_disjoint = false;  // claims pairwise disjoint supports
  std::optional<std::size_t> support_bound;
  std::optional<Rational> alpha;
  std::string enumeration;  // rational-enumeration id, when one is involved
  std::vector<std::string> provenance;
};

class MeasureSequence {
 public:
  using Producer = std::function<FinSuppMeasure(std::size_t)>;

  MeasureSequence() = default;
  MeasureSequence(SpaceKind space, Producer producer, SequenceMeta meta,
                  std::optional<std::size_t> length = std::nullopt)
      : space_(space), producer_(std::move(producer)), meta_(std::move(meta)),
        length_(length) {}

  SpaceKind space() const { return space_; }
  const SequenceMeta& meta() const { return meta_; }
  SequenceMeta& meta() { return meta_; }
  std::optional<std::size_t> length() const { return length_; }

  FinSuppMeasure at(std::size_t n) const {
    if (!producer_) throw validation_error("empty measure sequence");
    if (length_ && n >= *length_)
      throw validation_error("index " + std::to_string(n) + " beyond sequence length " +
                             std::to_string(*length_));
    return producer_(n);
  }

  // First `count` measures, materialized.
  std::vector<FinSuppMeasure> prefix(std::size_t count) const {
    std::vector<FinSuppMeasure> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) out.push_back(at(n));
    return out;
  }

 private:
  SpaceKind space_ = SpaceKind::unit_interval;
  Producer producer_;
  SequenceMeta meta_;
  std::optional<std::size_t> length_;
};

// Reindex along an explicit index list.
inline MeasureSequence subsequence(const MeasureSequence& seq, std::vector<std::size_t> indices,
                                   const std::string& note) {
  SequenceMeta meta = seq.meta();
  meta.provenance.push_back(note + " [" + std::to_string(indices.size()) + " indices]");
  std::size_t len = indices.size();
  auto base = seq;
  return MeasureSequence(
      seq.space(),
      [base, idx = std::move(indices)](std::size_t n) {
        if (n >= idx.size())
          throw validation_error("subsequence index " + std::to_string(n) + " out of range");
        return base.at(idx[n]);
      },
      std::move(meta), len);
}

// Materialized sequence from explicit measures.
inline MeasureSequence from_measures(SpaceKind space, std::vector<FinSuppMeasure> ms,
                                     SequenceMeta meta) {
  for (const auto& m : ms)
    if (m.space() != space)
      throw validation_error("sequence/measure space mismatch");
  std::size_t len = ms.size();
  return MeasureSequence(
      space,
      [store = std::move(ms)](std::size_t n) { return store.at(n); },
      std::move(meta), len);
}

// Cache the first `cap` measures on first touch. Producers are pure, so this
// is transparent; it only saves recomputation when the same index is visited
// repeatedly (classification windows, split cursor scans). Lazy on purpose:
// sequences whose measures grow quickly stay cheap as long as the caller
// never touches the expensive indices.
inline MeasureSequence memoize_prefix(const MeasureSequence& seq, std::size_t cap) {
  struct Cache {
    std::mutex mu;
    std::vector<std::optional<FinSuppMeasure>> slots;
  };
  auto cache = std::make_shared<Cache>();
  cache->slots.resize(cap);
  auto base = seq;
  return MeasureSequence(
      seq.space(),
      [base, cache](std::size_t n) {
        if (n >= cache->slots.size()) return base.at(n);
        {
          std::scoped_lock lock(cache->mu);
          if (cache->slots[n]) return *cache->slots[n];
        }
        FinSuppMeasure m = base.at(n);  // computed outside the lock
        std::scoped_lock lock(cache->mu);
        if (!cache->slots[n]) cache->slots[n] = std::move(m);
        return *cache->slots[n];
      },
      seq.meta(), seq.length());
}

// Union of the supports of the first `horizon` measures, in point order.
inline std::vector<Point> prefix_support(const MeasureSequence& seq, std::size_t horizon) {
  std::set<Point> pts;
  for (std::size_t n = 0; n < horizon; ++n) {
    FinSuppMeasure m = seq.at(n);  // keep alive: atoms() refers into the measure
    for (const auto& [p, c] : m.atoms()) pts.insert(p);
  }
  return {pts.begin(), pts.end()};
}

}  // namespace jnseq
