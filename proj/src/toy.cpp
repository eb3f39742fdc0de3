#include "sceig/toy.hpp"

namespace sceig {

ProblemData toy_problem_data() {
  ProblemData d;
  d.n_basis = 2;
  d.k = 1;
  d.label = "toy";
  // 0.6593: the overlap that reproduces every other printed number
  d.overlap.resize(2, 2);
  d.overlap << 1.0, 0.6593, 0.6593, 1.0;
  d.core_hamiltonian.resize(2, 2);
  d.core_hamiltonian << -1.1204, -0.9584, -0.9584, -1.1204;

  const double e00[2][2] = {{0.7746, 0.4441}, {0.4441, 0.5697}};
  const double e01[2][2] = {{0.4441, 0.2970}, {0.2970, 0.4441}};
  const double e11[2][2] = {{0.5697, 0.4441}, {0.4441, 0.7746}};
  d.eri = EriTensor::zeros(2);
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t s = 0; s < 2; ++s) {
      d.eri(0, 0, l, s) = e00[l][s];
      d.eri(0, 1, l, s) = e01[l][s];
      d.eri(1, 0, l, s) = e01[l][s];
      d.eri(1, 1, l, s) = e11[l][s];
    }
  return d;
}

Problem toy_problem() { return validate_problem(toy_problem_data()); }

}  // namespace sceig
