#pragma once

// Independent oracle for extendability: enumerate every candidate witness
// h = sum_{i,n} c_{i,n} pi_i^{-n}  (n up to pole_bound, coefficients in F_q)
// over a given tower and test whether a - h^{p^N} is integral at all tracked
// places.  Candidates of this polar shape suffice: adding anything integral
// at the tracked places to h changes h^{p^N} by a p^N-th power that is again
// integral there (freshman's dream), so it cannot affect the test.  Used in
// tests against normal_form and the descent engine; never in production
// paths.

#include <vector>

#include "tower.hpp"

namespace asdescent {

inline bool brute_force_membership(const Rat& a, const ASTower& T,
                                   long pole_bound, int N = 1) {
  if (N < 1) throw Error("torsion exponent must be positive");
  if (pole_bound < 0) throw Error("pole bound must be nonnegative");
  const long q = T.field().q();
  const size_t dims = T.tracked().size() * static_cast<size_t>(pole_bound);

  long count = 1;
  for (size_t d = 0; d < dims; ++d) {
    count *= q;
    if (count > 1000000) throw SearchSpaceTooLarge();
  }

  const int L = T.levels();
  const TowerElement A = T.from_rat(a, L);
  std::vector<TowerElement> basis;
  for (size_t i = 0; i < T.tracked().size(); ++i)
    for (long n = 1; n <= pole_bound; ++n)
      basis.push_back(T.pow(T.uniformizer(i, L), -n));

  std::vector<uint16_t> idx(dims, 0);
  for (long c = 0; c < count; ++c) {
    TowerElement h = T.zero(L);
    for (size_t d = 0; d < dims; ++d)
      if (idx[d])
        h = T.add(h, T.mul_fq(Fq{&T.field(), idx[d]}, basis[d]));
    const TowerElement g = T.sub(A, T.pow_pn(h, N));
    bool ok = true;
    for (size_t i = 0; i < T.tracked().size() && ok; ++i) {
      const auto v = T.val(g, i);
      ok = !v || *v >= 0;
    }
    if (ok) return true;
    for (size_t d = 0; d < dims; ++d) {
      if (++idx[d] < q) break;
      idx[d] = 0;
    }
  }
  return false;
}

}  // namespace asdescent
