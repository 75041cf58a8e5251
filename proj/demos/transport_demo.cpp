// Exact optimal transport on the 4-cycle: plan, duals, and the W_p tower.

#include <iostream>

#include "qiso/io.hpp"
#include "qiso/transport.hpp"

using namespace qiso;
using Q = Rational;

int main() {
  auto space = validate_metric<Q>({{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}});
  auto mu = make_prob<Q>({Q(1, 2), Q(1, 4), Q(1, 4), Q(0)});
  auto nu = make_prob<Q>({Q(0), Q(1, 4), Q(1, 4), Q(1, 2)});

  auto r = solve_transport(mu, nu, power_cost(space, 1.0));
  std::cout << "W_1       = " << scalar_to_json(r.value).dump() << "\n";
  std::cout << "plan      = " << plan_to_json(r.plan.plan).dump() << "\n";
  std::cout << "f         = " << scalars_to_json(r.duals.f).dump() << "\n";
  std::cout << "g         = " << scalars_to_json(r.duals.g).dump() << "\n";
  std::cout << "KR value  = " << scalar_to_json(kantorovich_w1(space, mu, nu).value).dump() << "\n";

  for (unsigned p : {2u, 3u, 8u})
    std::cout << "W_" << p << "^" << p << "     = " << scalar_to_json(wasserstein_pp(space, mu, nu, p).value).dump()
              << "  (W_" << p << " ~ " << wasserstein_p(space, mu, nu, double(p)) << ")\n";
  std::cout << "W_inf     = " << scalar_to_json(wasserstein_inf(space, mu, nu).r).dump() << "\n";
}
