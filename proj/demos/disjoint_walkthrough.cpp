// Walks one sequence through the disjointification construction and shows
// the pieces: which indices the split keeps, the peel norms, the resulting
// two-signed unit measures, and the escape ball around the base support.

#include "jnseq/generators.hpp"
#include "jnseq/transforms.hpp"

#include <iostream>

using namespace jnseq;

int main() {
  MeasureSequence seq = gen_convergent(ConvMode::to_limit);
  AnalysisParams params;
  params.horizon = 120;
  params.window = 30;

  DisjointifyResult d = disjointify(seq, 6, params);
  std::cout << "input:  " << seq.meta().name << "\n";
  std::cout << "chosen split indices:";
  for (auto n : d.split.chosen) std::cout << ' ' << n;
  std::cout << "\npeel norms:";
  for (const auto& p : d.peel_norms) std::cout << ' ' << to_string(p);
  std::cout << "\n\ndisjointified measures:\n";
  for (std::size_t k = 0; k < 6; ++k) {
    FinSuppMeasure rho = d.sequence.at(k);
    std::cout << "  rho_" << k << " =";
    for (const auto& [pt, c] : rho.atoms()) std::cout << "  " << to_string(c) << " @ " << pt.str();
    std::cout << "\n";
  }

  DisjointnessReport rep = disjointness_check(d.sequence, 6);
  std::cout << "\npairwise disjoint supports: " << (rep.ok ? "yes" : "NO") << "\n";

  EscapeStep esc = escape_step(d.sequence, pow2_inv(2), 5);
  Rational inside(0);
  for (const auto& m : esc.masses) inside += m;
  std::cout << "escape ball radius around rho_0's support: "
            << to_string(esc.neighborhood.balls.front().radius)
            << " (successor mass inside: " << to_string(inside) << ")\n";
  return 0;
}
