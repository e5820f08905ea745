#pragma once

#include <vector>

namespace phasegrating {

// Integer-order Bessel function of the first kind. Any sign of n and x is accepted via
// J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x).
double bessel_j(int n, double x);

// J_0(x) .. J_{n_max}(x) from a single normalised downward recurrence.
std::vector<double> bessel_j_table(int n_max, double x);

}  // namespace phasegrating
