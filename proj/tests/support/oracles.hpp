// Independent oracles used to freeze expected values: exact rational
// binomial tails (GMP), adaptive quadrature for the incomplete beta, and
// brute-force geometric checks. None of these share code with the library
// paths they verify.
#pragma once

#include <cstdint>
#include <vector>

#include "mb/topo_map.hpp"

namespace oracles {

/// log10 of sum_{j=k}^{n} C(n,j) p^j (1-p)^(n-j) with p = p_num/p_den,
/// evaluated in exact integer arithmetic; -inf for an exact zero.
double log10_binomial_tail_rational(long n, long k, long p_num, long p_den);

/// Same, for every k = 0..n at once (suffix sums over one term table).
std::vector<double> log10_binomial_tail_rational_all_k(long n, long p_num, long p_den);

/// Regularized incomplete beta I(x; a, b) by adaptive Simpson quadrature on
/// the substituted integrand (w = t^a removes the endpoint singularity).
double inc_beta_quadrature(double x, double a, double b, double tol = 1e-12);

/// Naive arc-length walker for the regularity: steps segment by segment
/// from the sample vertex until +-s is reached, then takes the larger chord.
std::vector<double> regularity_brute_force(const mb::LevelLine& line, double s);

/// True when two closed polylines properly intersect (any segment pair
/// crossing transversally).
bool polylines_cross(const std::vector<mb::Vec2>& a, const std::vector<mb::Vec2>& b);

/// True when the closed polyline intersects itself (non-adjacent segments).
bool self_intersects(const std::vector<mb::Vec2>& poly);

}  // namespace oracles
