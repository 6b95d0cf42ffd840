#pragma once

#include <vector>

namespace holocycle {

/// Derivatives of a composition g(h(t)) up to order r.
/// g_at_h[k-1] = g^{(k)} evaluated at h(t); h_jets[k-1] = h^{(k)}(t).
/// Uses the partial Bell polynomial recursion, so any order works.
std::vector<double> compose_jets(const std::vector<double>& g_at_h,
                                 const std::vector<double>& h_jets);

/// Derivatives of the inverse function w = h^{-1} at a point t, given the
/// derivatives of h evaluated at w(t). h_at_w[0] must be positive.
std::vector<double> inverse_jets(const std::vector<double>& h_at_w);

}  // namespace holocycle
