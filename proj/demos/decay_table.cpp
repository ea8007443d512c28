// Prints a weak-star decay table for two built-in sequences: the corpus
// maximum |mu_n(f)| row by row, plus the fitted decay exponent. A quick way
// to see why the slow 1/n generators and the geometric ones need different
// epsilon budgets.

#include "jnseq/verify.hpp"
#include "jnseq/generators.hpp"

#include <iomanip>
#include <iostream>

using namespace jnseq;

static void table(const MeasureSequence& seq, std::size_t horizon) {
  std::vector<TestFunction> fns = corpus(seq.space());
  DecayReport rep = weak_star_report(seq, fns, horizon, pow2_inv(10));
  std::cout << "\n" << seq.meta().name << " on " << space_name(seq.space()) << "\n";
  std::cout << std::setw(6) << "n" << std::setw(14) << "max |mu(f)|" << "  argmax\n";
  for (std::size_t i = 0; i < rep.rows.size(); i += rep.rows.size() / 8 + 1) {
    const DecayRow& r = rep.rows[i];
    std::cout << std::setw(6) << r.n << std::setw(14) << std::setprecision(5) << r.max_abs
              << "  " << r.argmax << "\n";
  }
  if (rep.fitted_exponent)
    std::cout << "fitted exponent of n:  " << *rep.fitted_exponent << "\n";
}

int main() {
  table(gen_square(1), 64);
  table(gen_square2_thinned(), 24);
  table(gen_convergent(ConvMode::to_limit), 64);
  return 0;
}
