#pragma once

// Symbolic subsets of the naturals with decidable membership and exact
// counting. Grammar:
//   set  := atom | '!' set | set '&' set | set '|' set | '(' set ')'
//   atom := 'squares' | 'factorials' | 'ap(a,b)' | 'finite{n1,n2,...}'
//         | 'seq(name)'
// '&' binds tighter than '|'; '!' is prefix. seq(name) denotes a named
// explicit index image registered at parse/build time.

#include "jnseq/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace jnseq {

class SetDescriptor;
using SetPtr = std::shared_ptr<const SetDescriptor>;

class SetDescriptor {
 public:
  enum class Kind { squares, factorials, ap, finite, image, complement, intersection, union_ };

  Kind kind;
  // ap(a, b): {a + b*j : j >= 0}, b >= 1.
  std::uint64_t ap_a = 0, ap_b = 1;
  std::vector<std::uint64_t> elems;  // finite / image (sorted, deduped)
  std::string image_name;
  SetPtr lhs, rhs;  // complement uses lhs only

  static SetPtr squares() { return make(Kind::squares); }
  static SetPtr factorials() { return make(Kind::factorials); }
  static SetPtr ap(std::uint64_t a, std::uint64_t b) {
    if (b == 0) throw validation_error("ap(a,b) requires b >= 1");
    auto d = make(Kind::ap);
    d->ap_a = a;
    d->ap_b = b;
    return d;
  }
  static SetPtr finite(std::vector<std::uint64_t> xs) {
    auto d = make(Kind::finite);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    d->elems = std::move(xs);
    return d;
  }
  static SetPtr image(std::string name, std::vector<std::uint64_t> xs) {
    auto d = make(Kind::image);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    d->elems = std::move(xs);
    d->image_name = std::move(name);
    return d;
  }
  static SetPtr complement(SetPtr a) {
    auto d = make(Kind::complement);
    d->lhs = std::move(a);
    return d;
  }
  static SetPtr intersect(SetPtr a, SetPtr b) {
    auto d = make(Kind::intersection);
    d->lhs = std::move(a);
    d->rhs = std::move(b);
    return d;
  }
  static SetPtr unite(SetPtr a, SetPtr b) {
    auto d = make(Kind::union_);
    d->lhs = std::move(a);
    d->rhs = std::move(b);
    return d;
  }

  bool contains(std::uint64_t n) const {
    switch (kind) {
      case Kind::squares: {
        std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
        while (r > 0 && r * r > n) --r;
        while ((r + 1) * (r + 1) <= n) ++r;
        return r * r == n;
      }
      case Kind::factorials: {
        std::uint64_t f = 1, k = 1;
        while (f < n && f <= n / k) {
          f *= k;
          ++k;
          if (f == n) return true;
        }
        return f == n;  // covers n = 1 (= 0! = 1!)
      }
      case Kind::ap:
        return n >= ap_a && (n - ap_a) % ap_b == 0;
      case Kind::finite:
      case Kind::image:
        return std::binary_search(elems.begin(), elems.end(), n);
      case Kind::complement:
        return !lhs->contains(n);
      case Kind::intersection:
        return lhs->contains(n) && rhs->contains(n);
      case Kind::union_:
        return lhs->contains(n) || rhs->contains(n);
    }
    return false;
  }

  // Exact |A ∩ [0, N)|. Closed forms for primitives; boolean nodes fall back
  // to a membership sweep (N at desk scale, membership is O(log)).
  std::uint64_t count_below(std::uint64_t N) const {
    switch (kind) {
      case Kind::squares: {
        if (N == 0) return 0;
        // #{k >= 0 : k^2 < N} = ceil(sqrt(N)) (largest k is ceil(sqrt(N))-1).
        std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(N)));
        while (r * r >= N) --r;
        while ((r + 1) * (r + 1) < N) ++r;
        return r + 1;
      }
      case Kind::factorials: {
        // factorial values 1, 2, 6, 24, ... with the duplicate 0! = 1! counted once
        std::uint64_t count = 0, fac = 1, last = 0;
        for (std::uint64_t i = 1;; ++i) {
          if (fac < N && fac != last) {
            ++count;
            last = fac;
          }
          if (fac >= N || fac > N / i) break;
          fac *= i;
        }
        return count;
      }
      case Kind::ap:
        if (N <= ap_a) return 0;
        return (N - 1 - ap_a) / ap_b + 1;
      case Kind::finite:
      case Kind::image:
        return static_cast<std::uint64_t>(
            std::lower_bound(elems.begin(), elems.end(), N) - elems.begin());
      case Kind::complement:
        return N - lhs->count_below(N);
      case Kind::intersection:
      case Kind::union_: {
        std::uint64_t c = 0;
        for (std::uint64_t n = 0; n < N; ++n)
          if (contains(n)) ++c;
        return c;
      }
    }
    return 0;
  }

  std::string str() const {
    switch (kind) {
      case Kind::squares: return "squares";
      case Kind::factorials: return "factorials";
      case Kind::ap: return "ap(" + std::to_string(ap_a) + "," + std::to_string(ap_b) + ")";
      case Kind::finite: {
        std::string s = "finite{";
        for (std::size_t i = 0; i < elems.size(); ++i)
          s += (i ? "," : "") + std::to_string(elems[i]);
        return s + "}";
      }
      case Kind::image: return "seq(" + image_name + ")";
      case Kind::complement: return "!" + parenthesized(lhs);
      case Kind::intersection: return parenthesized(lhs) + "&" + parenthesized(rhs);
      case Kind::union_: return parenthesized(lhs) + "|" + parenthesized(rhs);
    }
    return "?";
  }

 private:
  static std::shared_ptr<SetDescriptor> make(Kind k) {
    auto d = std::make_shared<SetDescriptor>();
    d->kind = k;
    return d;
  }
  static std::string parenthesized(const SetPtr& d) {
    bool atom = d->kind != Kind::intersection && d->kind != Kind::union_;
    return atom ? d->str() : "(" + d->str() + ")";
  }
};

// Recursive-descent parser for the grammar above. `images` supplies the
// payloads of seq(name) atoms.
class SetDescriptorParser {
 public:
  explicit SetDescriptorParser(
      std::map<std::string, std::vector<std::uint64_t>> images = {})
      : images_(std::move(images)) {}

  SetPtr parse(const std::string& text) {
    text_ = text;
    pos_ = 0;
    SetPtr result = parse_union();
    skip_ws();
    if (pos_ != text_.size())
      throw validation_error("trailing characters in set descriptor '" + text + "'");
    return result;
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;
  std::map<std::string, std::vector<std::uint64_t>> images_;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw validation_error(std::string("expected '") + c + "' at offset " +
                             std::to_string(pos_) + " in set descriptor");
  }

  SetPtr parse_union() {
    SetPtr left = parse_intersection();
    while (eat('|')) left = SetDescriptor::unite(left, parse_intersection());
    return left;
  }
  SetPtr parse_intersection() {
    SetPtr left = parse_atom();
    while (eat('&')) left = SetDescriptor::intersect(left, parse_atom());
    return left;
  }
  std::uint64_t parse_nat() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_)
      throw validation_error("expected natural number at offset " + std::to_string(start));
    return std::stoull(text_.substr(start, pos_ - start));
  }
  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  SetPtr parse_atom() {
    if (eat('!')) return SetDescriptor::complement(parse_atom());
    if (eat('(')) {
      SetPtr inner = parse_union();
      expect(')');
      return inner;
    }
    std::string word = parse_ident();
    if (word == "squares") return SetDescriptor::squares();
    if (word == "factorials") return SetDescriptor::factorials();
    if (word == "ap") {
      expect('(');
      std::uint64_t a = parse_nat();
      expect(',');
      std::uint64_t b = parse_nat();
      expect(')');
      return SetDescriptor::ap(a, b);
    }
    if (word == "finite") {
      expect('{');
      std::vector<std::uint64_t> xs;
      skip_ws();
      if (!eat('}')) {
        xs.push_back(parse_nat());
        while (eat(',')) xs.push_back(parse_nat());
        expect('}');
      }
      return SetDescriptor::finite(std::move(xs));
    }
    if (word == "seq") {
      expect('(');
      std::string name = parse_ident();
      expect(')');
      auto it = images_.find(name);
      if (it == images_.end())
        throw validation_error("unknown sequence image '" + name + "' in set descriptor");
      return SetDescriptor::image(name, it->second);
    }
    throw validation_error("unknown set descriptor atom '" + word + "' at offset " +
                           std::to_string(pos_));
  }
};

}  // namespace jnseq
