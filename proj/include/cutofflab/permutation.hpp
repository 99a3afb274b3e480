#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cutofflab {

/// Permutation of {0,...,n-1} in one-line notation: p[i] is the image of i.
using Permutation = std::vector<int>;

/// (a * b)(i) = a(b(i)).
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& p);
Permutation identity_permutation(int n);
Permutation transposition(int n, int i, int j);

/// Lexicographic rank in [0, n!).
std::int64_t rank(const Permutation& p);
Permutation unrank(int n, std::int64_t r);
std::int64_t factorial(int n);

/// All permutations of size n in lexicographic order (index == rank).
std::vector<Permutation> all_permutations(int n);

/// Cycle lengths sorted in decreasing order, fixed points included as 1s.
std::vector<int> cycle_type(const Permutation& p);
int non_fixed_points(const Permutation& p);

/// Every permutation of size n whose cycle type equals `type` (padded with 1s).
std::vector<Permutation> conjugacy_class(int n, std::vector<int> type);

/// 1-based one-line notation, e.g. "2134"; entries separated by ',' when n > 9.
std::string to_string(const Permutation& p);

}  // namespace cutofflab
