// Builds the first levels on the sphere, checks each state against H, and
// integrates one classical orbit.

#include "curvosc/curvosc.hpp"

#include <iostream>

using namespace curvosc;

int main()
{
  Curvature k(Rational(1));
  Spectrum s = enumerate_levels(k, 2, 3);
  for (const auto& level : s.levels) {
    std::cout << "n=" << level.n << "  E=" << level.energy << "  degeneracy=" << level.degeneracy
              << (level.eigen_ok ? "  ok" : "  FAILED") << "\n";
  }

  WaveFunction psi = ladder_state(make_representation(k, 3), 1, 1);
  std::cout << "\n(A+)(B-) psi_0 on 2j=3:\n  " << psi << "\n";

  InitialCondition ic = initial_condition(k, 2.0, 2.0, 20.0);
  Trajectory tr = integrate(k, ic.point, 10.0, 1e-3, {.stride = 1000});
  std::cout << "\norbit status " << status_name(tr.status) << ", energy drift " << tr.drift.E << "\n";
  return 0;
}
