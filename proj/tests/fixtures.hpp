#ifndef LEFKIT_TESTS_FIXTURES_HPP
#define LEFKIT_TESTS_FIXTURES_HPP

// Shared fixtures: the running six-sheet example, a hand-drawn rectangular
// picture of a three-sheet diagram, and a seeded random-diagram builder.

#include <random>

#include "lefkit/linediagram.hpp"
#include "lefkit/rect.hpp"

namespace fx {

using namespace lefkit;

// The running six-sheet example: four bands over a 4-fold cover, the last
// band a non-monotonic conjugate (image (4 5)).
inline LineDiagram example6() {
  LineDiagram ld;
  ld.degree = 4;
  ld.bands.strands = 6;
  ld.labels = {Perm::parse_cycles(4, "(1 2)"), Perm::parse_cycles(4, "(1 2)"),
               Perm::parse_cycles(4, "(2 3)"), Perm::parse_cycles(4, "(1 3)"),
               Perm::parse_cycles(4, "(1 2)"), Perm::parse_cycles(4, "(1 3)")};
  ld.bands.bands = {
      Band(MonotonicBand(1, 2, +1, {}), 6),
      Band(MonotonicBand(2, 4, -1, {+1}), 6),
      Band(MonotonicBand(3, 6, +1, {-1, +1}), 6),
      Band(BraidWord::parse(6, "S3 S2 S2 S3 S4 s3 s2 s2 s3")),
  };
  return ld;
}

// Three horizontal sheets at y = 3, 6, 9 and one positive band from sheet 1
// to sheet 3, passing through sheet 2 and curling up east of its column to
// attach to sheet 3 from below. Drawn by hand, cell by cell, so it can
// anchor both the rectangular validators and the conversion code.
inline RectDiagram rect_three_sheet() {
  RectDiagram rd;
  rd.degree = 3;
  auto put = [&](int x, int y, CellKind k, int rot) {
    rd.cells[{x, y}] = Cell{k, rot};
  };
  for (int r = 1; r <= 3; r++) {
    put(0, 3 * r, CellKind::c, 2);
    for (int x = 1; x <= 4; x++)
      put(x, 3 * r, CellKind::a, 0);
    put(5, 3 * r, CellKind::c, 0);
  }
  put(3, 3, CellKind::d, 0);   // attach below sheet 1
  put(3, 4, CellKind::a, 1);
  put(3, 5, CellKind::a, 1);
  put(3, 6, CellKind::f, 0);   // through sheet 2
  put(3, 7, CellKind::a, 1);
  put(3, 8, CellKind::a, 1);
  put(3, 9, CellKind::e, 0);   // in front of sheet 3
  put(3, 10, CellKind::a, 1);
  put(3, 11, CellKind::b, 0);  // curl east...
  put(4, 11, CellKind::b, 1);
  put(4, 10, CellKind::a, 1);
  put(4, 9, CellKind::d, 0);   // ...and attach to sheet 3 from below
  // Regions in scan order: sheet 1 plus the band above the through-crossing,
  // sheet 2, then everything below the cut (which merges with sheet 3).
  rd.labels[0] = Perm::parse_cycles(3, "(1 2)");
  rd.labels[1] = Perm::parse_cycles(3, "(2 3)");
  rd.labels[2] = Perm::parse_cycles(3, "(1 3)");
  return rd;
}

// The line diagram the picture above depicts.
inline LineDiagram line_three_sheet() {
  LineDiagram ld;
  ld.degree = 3;
  ld.bands.strands = 3;
  ld.labels = {Perm::parse_cycles(3, "(1 2)"), Perm::parse_cycles(3, "(2 3)"),
               Perm::parse_cycles(3, "(1 3)")};
  ld.bands.bands = {Band(MonotonicBand(1, 3, +1, {+1}), 3)};
  return ld;
}

// Random labeled diagram, monotonic by construction: walk the sheets left
// to right attaching at most one band ending at each sheet, so every new
// label is forced by transport over sheets already labeled.
inline LineDiagram random_diagram(std::mt19937_64 &rng, int degree,
                                  int sheets) {
  LineDiagram ld;
  ld.degree = degree;
  ld.bands.strands = sheets;
  for (int r = 0; r < sheets; r++) {
    int a = 1 + (int)(rng() % degree);
    int b = 1 + (int)(rng() % degree);
    while (b == a)
      b = 1 + (int)(rng() % degree);
    ld.labels.push_back(
        Perm::transposition(degree, std::min(a, b), std::max(a, b)));
  }
  for (int k = 2; k <= sheets; k++) {
    if (rng() % 2)
      continue;
    int j = 1 + (int)(rng() % (k - 1));
    std::vector<int> pat;
    for (int h = j + 1; h < k; h++)
      pat.push_back(rng() % 2 ? 1 : -1);
    MonotonicBand b(j, k, rng() % 2 ? 1 : -1, std::move(pat));
    Perm T = ld.transport(b);
    ld.labels[k - 1] = T.inv().then(ld.labels[j - 1]).then(T);
    ld.bands.bands.emplace_back(b, sheets);
  }
  ld.check();
  if (!ld.check_labels())
    throw std::runtime_error("random diagram construction is broken");
  return ld;
}

}  // namespace fx

#endif
