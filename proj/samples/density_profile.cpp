// Tabulates the limiting density of the scaled maximum with its one-term
// bracket, and shows the finite-size law closing in on it at a fixed level.
//
// Build and run:
//   cmake --build build --target density_profile && ./build/density_profile

#include <cstdio>

#include <walkmax/asymptotics.hpp>

int main() {
  using namespace walkmax;
  std::printf("%8s %18s %10s %18s %18s\n", "gamma", "density", "branch",
              "lower_bound", "upper_bound");
  for (double gamma : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0}) {
    const ThetaPoint p = limiting_density(gamma);
    const DensityBounds b = density_first_term_bounds(gamma);
    std::printf("%8.2f %18.12f %10s %18.12f %18.12f\n", gamma, p.density,
                p.branch == DensityBranch::resummed ? "resummed" : "direct",
                b.lower, b.upper);
  }

  std::printf("\nfinite-size law vs limit at gamma = 1:\n");
  std::printf("%8s %12s %18s %18s %12s\n", "a", "n", "a*Q_n(a)", "limit", "gap");
  for (int a : {10, 20, 50, 100, 200}) {
    const ConvergenceReport r = finite_size_convergence(a, 1.0);
    std::printf("%8d %12lld %18.12f %18.12f %12.6f\n", a, r.n, r.finite,
                r.limit, r.gap);
  }
  return 0;
}
