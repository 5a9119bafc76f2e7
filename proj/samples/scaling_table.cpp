// Prints how the mean and variance of the running maximum approach their
// scaled limits as the step count grows, next to the limits themselves.
//
// Build and run:
//   cmake --build build --target scaling_table && ./build/scaling_table

#include <cmath>
#include <cstdio>

#include <walkmax/asymptotics.hpp>
#include <walkmax/closed_form.hpp>

int main() {
  using namespace walkmax;
  const LimitingConstants limits = limiting_constants();
  std::printf("%10s %16s %16s %16s %16s\n", "n", "E(A_n)/sqrt(n)", "Var(A_n)/n",
              "E(S_n)/sqrt(n)", "Var(S_n)/n");
  for (long long n : {100LL, 400LL, 1600LL, 6400LL, 25600LL, 102400LL}) {
    const MaxLawMoments m = max_law_moments(n);
    const PositionMoments p = position_moments(static_cast<int>(n));
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    std::printf("%10lld %16.8f %16.8f %16.8f %16.8f\n", n,
                m.mean / sqrt_n, m.variance / static_cast<double>(n),
                p.mean.to_double() / sqrt_n,
                p.variance.to_double() / static_cast<double>(n));
  }
  std::printf("%10s %16.8f %16.8f %16.8f %16.8f\n", "limit", limits.mean_max,
              limits.var_max, limits.mean_position, limits.var_position);
  return 0;
}
