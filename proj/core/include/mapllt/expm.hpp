#pragma once

// Matrix exponentials for transition semigroups. Real generators map to
// stochastic matrices; the complex variant serves frequency-twisted rate
// matrices. Both use scaling-and-squaring with a Pade core.

#include "mapllt/chain.hpp"
#include "mapllt/types.hpp"

namespace mapllt::markov {

// e^{tG} as a validated stochastic matrix. Entries in [-1e-13, 0) caused by
// rounding are clamped to 0. Throws InvalidInput when t < 0 or t*max|G|
// exceeds the scaling budget.
StochasticMatrix matrix_exp(const Generator& g, double t);

// General complex exponential, same algorithm without the stochastic clamp.
ComplexMatrix complex_exp(const ComplexMatrix& a);

}  // namespace mapllt::markov
