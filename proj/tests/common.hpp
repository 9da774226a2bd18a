#ifndef SARID_TESTS_COMMON_HPP
#define SARID_TESTS_COMMON_HPP

#include <Eigen/Dense>

#include "sarid/model.hpp"
#include "sarid/simulator.hpp"

namespace sarid::testing {

/// Two-mode reference system used across the suites:
///   mode 1: x_k =  0.3 x_{k-1} + 1 u_{k-1}
///   mode 2: x_k = -0.5 x_{k-1} - 1 u_{k-1}
inline SarModel two_mode_model() {
  return SarModel(1, 1,
                  {SubsystemParams{{0.3}, {1.0}}, SubsystemParams{{-0.5}, {-1.0}}});
}

inline TransitionMatrix mixing_ptm() {
  Eigen::MatrixXd p(2, 2);
  p << 0.1837, 0.8163, 0.3424, 0.6576;
  return TransitionMatrix(p);
}

inline TransitionMatrix flat_ptm(int n = 2) {
  return TransitionMatrix(Eigen::MatrixXd::Constant(n, n, 1.0 / n));
}

inline Dataset simulate_two_mode(double sigma2, std::int64_t N, std::uint64_t seed,
                                 double amplitude = 1.0) {
  SimOptions opts;
  opts.N = N;
  opts.seed = seed;
  opts.input_amplitude = amplitude;
  return simulate(two_mode_model(), mixing_ptm(), NoiseSpec::normal(sigma2), opts);
}

}  // namespace sarid::testing

#endif
