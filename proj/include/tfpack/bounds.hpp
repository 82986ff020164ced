#pragma once

#include <cstddef>

namespace tfpack {

/// A tail-probability bound. Values of 1 or more say nothing.
struct TailBound {
  double value = 0;
  bool vacuous = false;
};

/// P[|X - mu| > eps mu] <= 2 exp(-eps^2 mu / 3) for binomial X with mean mu.
TailBound chernoff_tail(double mu, double epsilon);

/// Which element count to put under t^2 in permutation_tail. kN matches the
/// general inequality; kNMinusOne is how the blow-up degree argument uses it
/// once one vertex's position is fixed.
enum class PermutationDenominator { kN, kNMinusOne };

/// P[|X - E X| >= t] <= 2 exp(-2 t^2 / (C^2 n)) for X determined by a uniform
/// permutation of n elements that moves by at most C per transposition.
TailBound permutation_tail(std::size_t n, double lipschitz, double deviation,
                           PermutationDenominator denominator = PermutationDenominator::kN);

}  // namespace tfpack
