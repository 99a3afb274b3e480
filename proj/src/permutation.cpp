#include "cutofflab/permutation.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "cutofflab/error.hpp"

namespace cutofflab {

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[static_cast<std::size_t>(b[i])];
  return c;
}

Permutation inverse(const Permutation& p) {
  Permutation q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return q;
}

Permutation identity_permutation(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation transposition(int n, int i, int j) {
  Permutation p = identity_permutation(n);
  std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  return p;
}

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

std::int64_t rank(const Permutation& p) {
  const int n = static_cast<int>(p.size());
  std::int64_t r = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j) smaller += p[static_cast<std::size_t>(j)] < p[static_cast<std::size_t>(i)];
    r += smaller * factorial(n - 1 - i);
  }
  return r;
}

Permutation unrank(int n, std::int64_t r) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  Permutation p;
  p.reserve(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    const std::int64_t f = factorial(i);
    const auto q = static_cast<std::size_t>(r / f);
    r %= f;
    p.push_back(pool[q]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(q));
  }
  return p;
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  out.reserve(static_cast<std::size_t>(factorial(n)));
  Permutation p = identity_permutation(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<int> cycle_type(const Permutation& p) {
  std::vector<char> seen(p.size(), 0);
  std::vector<int> type;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = 1;
      ++len;
    }
    type.push_back(len);
  }
  std::sort(type.begin(), type.end(), std::greater<>());
  return type;
}

int non_fixed_points(const Permutation& p) {
  int k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) k += p[i] != static_cast<int>(i);
  return k;
}

std::vector<Permutation> conjugacy_class(int n, std::vector<int> type) {
  int total = std::accumulate(type.begin(), type.end(), 0);
  if (total > n || std::any_of(type.begin(), type.end(), [](int c) { return c <= 0; })) {
    throw Error(ErrorCode::InvalidInput, "cycle type is not a partition of n");
  }
  type.resize(type.size() + static_cast<std::size_t>(n - total), 1);
  std::sort(type.begin(), type.end(), std::greater<>());
  std::vector<Permutation> out;
  Permutation p = identity_permutation(n);
  do {
    if (cycle_type(p) == type) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::string to_string(const Permutation& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.size() > 9 && i > 0) s += ',';
    s += std::to_string(p[i] + 1);
  }
  return s;
}

}  // namespace cutofflab
