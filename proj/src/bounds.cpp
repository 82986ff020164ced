#include "tfpack/bounds.hpp"

#include <cmath>

#include "tfpack/errors.hpp"

namespace tfpack {

namespace {

TailBound make_bound(double value) { return TailBound{value, value >= 1.0}; }

}  // namespace

TailBound chernoff_tail(double mu, double epsilon) {
  if (!(mu >= 0.0)) throw InvalidArgument("mu must be non-negative");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  return make_bound(2.0 * std::exp(-epsilon * epsilon * mu / 3.0));
}

TailBound permutation_tail(std::size_t n, double lipschitz, double deviation,
                           PermutationDenominator denominator) {
  if (!(lipschitz > 0.0)) throw InvalidArgument("C must be positive");
  if (!(deviation >= 0.0)) throw InvalidArgument("deviation must be non-negative");
  const std::size_t elements = denominator == PermutationDenominator::kN ? n : n - 1;
  if (n == 0 || elements == 0) throw InvalidArgument("permutation needs at least one element");
  const double exponent =
      2.0 * deviation * deviation / (lipschitz * lipschitz * static_cast<double>(elements));
  return make_bound(2.0 * std::exp(-exponent));
}

}  // namespace tfpack
