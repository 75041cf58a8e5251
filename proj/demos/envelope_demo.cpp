// Isometric envelope of every catalog action.

#include <iomanip>
#include <iostream>

#include "qiso/catalog.hpp"
#include "qiso/envelope.hpp"

using namespace qiso;
using Q = Rational;

int main() {
  std::cout << std::left << std::setw(24) << "action" << std::setw(6) << "dim" << std::setw(6) << "(D)"
            << std::setw(10) << "envelope" << "killed blocks\n";
  for (const auto& e : builtin_catalog<Q>()) {
    auto env = envelope(e.action);
    std::cout << std::setw(24) << e.name << std::setw(6) << e.action.qg().dim() << std::setw(6)
              << (check_D(e.action).holds ? "yes" : "no") << std::setw(10) << env.quotient.group->dim();
    for (auto k : env.ideal.blocks()) std::cout << k << " ";
    std::cout << "\n";
  }
}
