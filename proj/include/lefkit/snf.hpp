#ifndef LEFKIT_SNF_HPP
#define LEFKIT_SNF_HPP

// Exact integer linear algebra: Smith normal form and finitely generated
// abelian groups presented as cokernels. Matrices are dense row-major
// vectors of long long; everything here is small (tens of rows), so the
// classical elimination with smallest-pivot selection is plenty.

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lefkit {

using IMat = std::vector<std::vector<long long>>;

inline size_t mat_rows(const IMat &a) { return a.size(); }
inline size_t mat_cols(const IMat &a) { return a.empty() ? 0 : a[0].size(); }

inline void mat_check(const IMat &a) {
  for (const auto &row : a)
    if (row.size() != mat_cols(a))
      throw std::invalid_argument("matrix is ragged");
}

inline IMat mat_identity(size_t n) {
  IMat a(n, std::vector<long long>(n, 0));
  for (size_t i = 0; i < n; i++)
    a[i][i] = 1;
  return a;
}

inline IMat mat_mul(const IMat &a, const IMat &b) {
  if (mat_cols(a) != mat_rows(b))
    throw std::invalid_argument("matrix product shape mismatch");
  IMat r(mat_rows(a), std::vector<long long>(mat_cols(b), 0));
  for (size_t i = 0; i < mat_rows(a); i++)
    for (size_t k = 0; k < mat_cols(a); k++) {
      if (!a[i][k])
        continue;
      for (size_t j = 0; j < mat_cols(b); j++)
        r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

inline IMat mat_transpose(const IMat &a) {
  IMat r(mat_cols(a), std::vector<long long>(mat_rows(a), 0));
  for (size_t i = 0; i < mat_rows(a); i++)
    for (size_t j = 0; j < mat_cols(a); j++)
      r[j][i] = a[i][j];
  return r;
}

// Diagonal of the Smith normal form: nonnegative d_1 | d_2 | ... padded with
// zeros to min(rows, cols). Destroys a working copy only. When `u` is given
// it receives the unimodular row-operation matrix, i.e. u*a equals the
// diagonal form up to column operations — so x lies in the column span of a
// exactly when (u*x)_i is divisible by diag_i (with 0 beyond the rank).
inline std::vector<long long> smith_diagonal(IMat a, IMat *u = nullptr) {
  mat_check(a);
  size_t m = mat_rows(a), n = mat_cols(a);
  size_t dim = std::min(m, n);
  std::vector<long long> diag(dim, 0);
  if (u)
    *u = mat_identity(m);

  size_t t = 0;  // current pivot slot
  while (t < dim) {
    // Find the nonzero entry of smallest magnitude in the remaining block.
    size_t pi = t, pj = t;
    long long best = 0;
    for (size_t i = t; i < m; i++)
      for (size_t j = t; j < n; j++) {
        long long v = std::llabs(a[i][j]);
        if (v && (!best || v < best)) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (!best)
      break;  // remaining block is zero
    std::swap(a[t], a[pi]);
    if (u)
      std::swap((*u)[t], (*u)[pi]);
    for (size_t i = t; i < m; i++)
      std::swap(a[i][t], a[i][pj]);

    // Clear the pivot row and column; a failed division re-enters with a
    // smaller remainder, so this terminates.
    bool clean = true;
    for (size_t i = t + 1; i < m; i++) {
      long long q = a[i][t] / a[t][t];
      if (q) {
        for (size_t j = t; j < n; j++)
          a[i][j] -= q * a[t][j];
        if (u)
          for (size_t j = 0; j < m; j++)
            (*u)[i][j] -= q * (*u)[t][j];
      }
      if (a[i][t])
        clean = false;
    }
    for (size_t j = t + 1; j < n; j++) {
      long long q = a[t][j] / a[t][t];
      if (q)
        for (size_t i = t; i < m; i++)
          a[i][j] -= q * a[i][t];
      if (a[t][j])
        clean = false;
    }
    if (!clean)
      continue;  // pick a smaller pivot and retry this slot

    // Enforce divisibility: fold any offending entry into the pivot's row.
    bool redo = false;
    for (size_t i = t + 1; i < m && !redo; i++)
      for (size_t j = t + 1; j < n && !redo; j++)
        if (a[i][j] % a[t][t]) {
          for (size_t jj = t; jj < n; jj++)
            a[t][jj] += a[i][jj];
          if (u)
            for (size_t jj = 0; jj < m; jj++)
              (*u)[t][jj] += (*u)[i][jj];
          redo = true;
        }
    if (redo)
      continue;

    diag[t] = std::llabs(a[t][t]);
    t++;
  }
  return diag;
}

inline long long mat_rank(const IMat &a) {
  long long r = 0;
  for (long long d : smith_diagonal(a))
    if (d)
      r++;
  return r;
}

// Canonical representative of x modulo the sublattice spanned by the
// columns of gens. Deterministic: two vectors are congruent mod the lattice
// exactly when their reductions coincide, and the reduction is zero exactly
// on the lattice. With no columns the vector is returned unchanged.
inline std::vector<long long> lattice_reduce(const IMat &gens,
                                             const std::vector<long long> &x) {
  if (gens.empty() || mat_cols(gens) == 0)
    return x;
  if (mat_rows(gens) != x.size())
    throw std::invalid_argument("lattice_reduce: dimension mismatch");
  IMat u;
  std::vector<long long> d = smith_diagonal(gens, &u);
  std::vector<long long> z(x.size(), 0);
  for (size_t i = 0; i < x.size(); i++)
    for (size_t j = 0; j < x.size(); j++)
      z[i] += u[i][j] * x[j];
  for (size_t i = 0; i < d.size(); i++)
    if (d[i])
      z[i] = ((z[i] % d[i]) + d[i]) % d[i];
  return z;
}

// A finitely generated abelian group, Z^rank + sum Z/t_i with t_1 | t_2 | ...
struct AbelianGroup {
  long long rank = 0;
  std::vector<long long> torsion;  // invariant factors > 1, in divisor order

  bool operator==(const AbelianGroup &o) const {
    return rank == o.rank && torsion == o.torsion;
  }
  bool operator!=(const AbelianGroup &o) const { return !(*this == o); }

  bool is_trivial() const { return rank == 0 && torsion.empty(); }

  // "Z^2 + Z/3 + Z/6", or "0" for the trivial group.
  std::string str() const {
    std::ostringstream out;
    bool any = false;
    if (rank == 1) {
      out << "Z";
      any = true;
    } else if (rank > 1) {
      out << "Z^" << rank;
      any = true;
    }
    for (long long t : torsion) {
      if (any)
        out << " + ";
      out << "Z/" << t;
      any = true;
    }
    if (!any)
      return "0";
    return out.str();
  }
};

// Z^ambient modulo the span of the columns of a (rows of a must equal
// ambient). Relations beyond what the matrix kills stay free.
inline AbelianGroup cokernel(const IMat &a, size_t ambient) {
  if (!a.empty() && mat_rows(a) != ambient)
    throw std::invalid_argument("cokernel: relation matrix has wrong height");
  AbelianGroup g;
  if (a.empty() || mat_cols(a) == 0) {
    g.rank = (long long)ambient;
    return g;
  }
  std::vector<long long> d = smith_diagonal(a);
  long long nonzero = 0;
  for (long long v : d)
    if (v) {
      nonzero++;
      if (v > 1)
        g.torsion.push_back(v);
    }
  g.rank = (long long)ambient - nonzero;
  return g;
}

}  // namespace lefkit

#endif
