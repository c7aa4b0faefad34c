#ifndef LEFKIT_GEN_HPP
#define LEFKIT_GEN_HPP

// Seeded random generator for labeled line diagrams. All randomness comes
// from one std::mt19937_64 seeded by the caller, so identical seeds give
// identical diagrams. Labels are built by forward transport, sheet by
// sheet, so the result satisfies check_labels by construction.

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "lefkit/linediagram.hpp"

namespace lefkit {

struct GenBounds {
  int max_degree = 3;  // branched-cover degree, at least 2
  int max_sheets = 4;  // braid sheets, at least 1
  int max_bands = 4;   // half-twisted bands, at least 0

  void check() const {
    if (max_degree < 2 || max_sheets < 1 || max_bands < 0)
      throw std::invalid_argument("gen bounds must be positive");
  }
};

// Draw a diagram within the bounds. Sheet labels to the left of a band's
// upper end are final when the band is placed, so the forced label of the
// lower end is well defined; a second band ending on an already-pinned
// sheet is kept only when its transport agrees with the pinned label, which
// keeps every draw consistent (a bounded number of redraws per band).
inline LineDiagram gen_random(std::uint64_t seed, const GenBounds &bounds) {
  bounds.check();
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {  // inclusive
    return lo + (int)(rng() % (std::uint64_t)(hi - lo + 1));
  };

  LineDiagram ld;
  ld.degree = pick(2, bounds.max_degree);
  int m = pick(bounds.max_sheets > 1 ? 2 : 1, bounds.max_sheets);
  ld.bands.strands = m;
  for (int r = 0; r < m; r++) {
    int a = pick(1, ld.degree), b = pick(1, ld.degree);
    while (b == a)
      b = pick(1, ld.degree);
    ld.labels.push_back(
        Perm::transposition(ld.degree, std::min(a, b), std::max(a, b)));
  }

  std::vector<char> pinned(m + 1, 0);
  int want = m > 1 ? pick(0, bounds.max_bands) : 0;
  // the Hopf-sized box (2 sheets, 1 band) should actually produce the band
  if (m == 2 && bounds.max_bands >= 1 && bounds.max_sheets == 2)
    want = std::max(want, 1);
  // Lower ends are processed in increasing sheet order, so every transport
  // below only reads labels that are already final.
  std::vector<int> ends;
  for (int t = 0; t < want; t++)
    ends.push_back(pick(2, m));
  std::sort(ends.begin(), ends.end());
  for (int k : ends) {
    for (int tries = 0; tries < 8; tries++) {
      int j = pick(1, k - 1);
      std::vector<int> pat;
      for (int h = j + 1; h < k; h++)
        pat.push_back(rng() % 2 ? 1 : -1);
      MonotonicBand b(j, k, rng() % 2 ? 1 : -1, std::move(pat));
      Perm T = ld.transport(b);
      Perm forced = T.inv().then(ld.labels[j - 1]).then(T);
      if (pinned[k]) {
        if (ld.labels[k - 1] != forced)
          continue;  // would contradict an earlier band ending here
      } else {
        ld.labels[k - 1] = forced;
        pinned[k] = 1;
      }
      ld.bands.bands.emplace_back(b, m);
      break;
    }
  }

  ld.check();
  if (!ld.check_labels())
    throw std::logic_error("gen_random produced an inconsistent labeling");
  return ld;
}

inline LineDiagram gen_random(std::uint64_t seed) {
  return gen_random(seed, GenBounds{});
}

}  // namespace lefkit

#endif
