#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "lefkit/braider.hpp"

using namespace lefkit;

TEST_CASE("flatten reproduces the hand-drawn three-sheet picture") {
  RectDiagram rd = flatten(fx::line_three_sheet());
  RectDiagram want = fx::rect_three_sheet();
  CHECK(rd.cells == want.cells);
  CHECK(rd.labels == want.labels);
  rd.check_restricted();
}

TEST_CASE("flatten draws one curl per band and sorts them by abscissa") {
  LineDiagram ld = fx::example6();
  ld.bands.bands.pop_back();  // keep the monotonic part
  RectDiagram rd = flatten(ld);
  rd.check_restricted();
  int bends = 0, attach = 0;
  for (const auto &[pos, cell] : rd.cells) {
    bends += cell.kind == CellKind::b;
    attach += cell.kind == CellKind::d;
  }
  CHECK(bends == 2 * (int)ld.bands.size());
  CHECK(attach == 2 * (int)ld.bands.size());

  // flatten refuses what it cannot draw
  CHECK_THROWS_WITH(flatten(fx::example6()),
                    Catch::Matchers::ContainsSubstring("monotonize"));
  LineDiagram bad = ld;
  bad.labels[5] = Perm::parse_cycles(4, "(1 4)");
  CHECK_THROWS_WITH(flatten(bad),
                    Catch::Matchers::ContainsSubstring("transport requires"));
}

TEST_CASE("braid_up reads the flattened picture back verbatim") {
  LineDiagram ld = fx::example6();
  ld.bands.bands.pop_back();
  LineDiagram back = braid_up(flatten(ld));
  CHECK(back.degree == ld.degree);
  CHECK(back.labels == ld.labels);
  REQUIRE(back.bands.size() == ld.bands.size());
  for (size_t i = 0; i < ld.bands.size(); i++)
    CHECK(back.bands.bands[i].w == ld.bands.bands[i].w);
}

TEST_CASE("braid_up of a single disk is one bandless sheet") {
  RectDiagram rd;
  rd.degree = 2;
  rd.cells[{0, 0}] = Cell{CellKind::c, 2};
  rd.cells[{1, 0}] = Cell{CellKind::a, 0};
  rd.cells[{2, 0}] = Cell{CellKind::c, 0};
  rd.labels[0] = Perm::parse_cycles(2, "(1 2)");
  LineDiagram ld = braid_up(rd);
  CHECK(ld.degree == 2);
  CHECK(ld.sheets() == 1);
  CHECK(ld.bands.size() == 0);
  CHECK(ld.labels[0] == Perm::parse_cycles(2, "(1 2)"));
}

TEST_CASE("round trip on random monotonic diagrams") {
  std::mt19937_64 rng(777);
  int bands_seen = 0;
  for (int trial = 0; trial < 200; trial++) {
    int degree = 2 + (int)(rng() % 3);
    int sheets = 2 + (int)(rng() % 7);
    LineDiagram ld = fx::random_diagram(rng, degree, sheets);
    bands_seen += (int)ld.bands.size();
    RectDiagram flat = flatten(ld);
    flat.check_restricted();
    LineDiagram back = braid_up(flat);
    REQUIRE(back.sheets() == ld.sheets());
    CHECK(back.degree == ld.degree);
    CHECK(back.labels == ld.labels);
    REQUIRE(back.bands.size() == ld.bands.size());
    for (size_t i = 0; i < ld.bands.size(); i++) {
      CHECK(back.bands.bands[i].w == ld.bands.bands[i].w);
      CHECK(*back.bands.bands[i].mono == *ld.bands.bands[i].mono);
    }
    // the flat picture survives its own serialization
    CHECK(from_rect(to_rect(flat)) == flat);
  }
  CHECK(bands_seen > 300);
}

// A band drawn in the other idiom: no explicit curl, the band runs around
// the east end of the lower sheet and joins it at a run-end bend.
static RectDiagram run_end_variant() {
  RectDiagram rd;
  rd.degree = 2;
  auto put = [&](int x, int y, CellKind k, int rot) {
    rd.cells[{x, y}] = Cell{k, rot};
  };
  put(0, 0, CellKind::c, 2);
  put(1, 0, CellKind::a, 0);
  put(2, 0, CellKind::d, 0);
  put(3, 0, CellKind::a, 0);
  put(4, 0, CellKind::c, 0);
  put(2, 1, CellKind::b, 0);  // band turns east below sheet 1
  put(3, 1, CellKind::a, 0);
  put(4, 1, CellKind::b, 2);  // and dives onto the end of sheet 2
  put(0, 2, CellKind::c, 2);
  put(1, 2, CellKind::a, 0);
  put(2, 2, CellKind::a, 0);
  put(3, 2, CellKind::a, 0);
  put(4, 2, CellKind::b, 1);
  rd.labels[0] = Perm::parse_cycles(2, "(1 2)");
  return rd;
}

TEST_CASE("braid_up accepts run-end curls and reads their handedness") {
  RectDiagram rd = run_end_variant();
  rd.check_restricted();
  LineDiagram ld = braid_up(rd);
  CHECK(ld.sheets() == 2);
  REQUIRE(ld.bands.size() == 1);
  REQUIRE(ld.bands.bands[0].mono.has_value());
  CHECK(*ld.bands.bands[0].mono == MonotonicBand(1, 2, -1, {}));
}

TEST_CASE("to_restricted folds a dangling vertical cap") {
  // A sheet with a finger hanging off it, ending in a downward cap.
  RectDiagram rd;
  rd.degree = 2;
  rd.cells[{0, 0}] = Cell{CellKind::c, 2};
  rd.cells[{1, 0}] = Cell{CellKind::a, 0};
  rd.cells[{2, 0}] = Cell{CellKind::d, 0};
  rd.cells[{3, 0}] = Cell{CellKind::c, 0};
  rd.cells[{2, 1}] = Cell{CellKind::a, 1};
  rd.cells[{2, 2}] = Cell{CellKind::c, 3};
  rd.labels[0] = Perm::parse_cycles(2, "(1 2)");
  rd.check();
  CHECK_THROWS(rd.check_restricted());

  RectDiagram fixed = to_restricted(rd);
  fixed.check_restricted();
  // exactly one replacement: the cap became a bend plus a horizontal cap
  CHECK(fixed.cells.size() == rd.cells.size() + 1);
  CHECK(fixed.cells.at({2, 2}) == Cell{CellKind::b, 0});
  CHECK(fixed.cells.at({3, 2}) == Cell{CellKind::c, 0});
  CHECK(fixed.region_count() == 1);
  CHECK(fixed.labels.at(0) == Perm::parse_cycles(2, "(1 2)"));
}

TEST_CASE("to_restricted is the identity on restricted pictures") {
  RectDiagram rd = fx::rect_three_sheet();
  CHECK(to_restricted(rd) == rd);
  RectDiagram flat = flatten(fx::line_three_sheet());
  CHECK(to_restricted(flat) == flat);
  // and it refuses pictures outside its vocabulary
  RectDiagram odd = fx::rect_three_sheet();
  odd.cells[{3, 9}] = Cell{CellKind::e, 1};  // sheet passes in front: no reading
  odd.check();
  CHECK_THROWS_WITH(to_restricted(odd),
                    Catch::Matchers::ContainsSubstring("restricted form"));
}

static bool same_diagram(const LineDiagram &a, const LineDiagram &b) {
  return a.degree == b.degree && a.labels == b.labels &&
         a.bands.strands == b.bands.strands && a.bands.bands == b.bands.bands;
}

TEST_CASE("monotonize leaves a monotonic diagram untouched") {
  LineDiagram ld = fx::line_three_sheet();
  auto [out, script] = monotonize(ld);
  CHECK(script.empty());
  CHECK(same_diagram(out, ld));
}

TEST_CASE("monotonize resolves a one-dip band with one stabilization") {
  LineDiagram mini;
  mini.degree = 2;
  mini.bands.strands = 3;
  mini.labels.assign(3, Perm::parse_cycles(2, "(1 2)"));
  mini.bands.bands = {Band(BraidWord::parse(3, "S2 S2 s1 s2 s2"))};
  mini.check();

  auto [out, script] = monotonize(mini);
  CHECK(out.sheets() == 4);
  REQUIRE(out.bands.size() == 2);
  CHECK(out.all_monotonic());
  CHECK(out.check_labels());
  REQUIRE(script.size() == 2);
  CHECK(script.moves[0] == Move{"stab", {4, 2, 1, 2, -1}});
  CHECK(script.moves[1] == Move{"slide", {1, -1}});
  REQUIRE(out.bands.bands[0].mono);
  REQUIRE(out.bands.bands[1].mono);
  CHECK(*out.bands.bands[0].mono == MonotonicBand(2, 4, +1, {-1}));
  CHECK(*out.bands.bands[1].mono == MonotonicBand(1, 4, +1, {+1, +1}));
  // the script replays to the same output
  CHECK(same_diagram(apply_script(mini, script), out));
}

TEST_CASE("monotonize straightens the six-sheet reference diagram") {
  LineDiagram ld = fx::example6();
  auto [out, script] = monotonize(ld);
  CHECK(out.sheets() == 7);
  REQUIRE(out.bands.size() == 5);
  CHECK(out.all_monotonic());
  CHECK(out.check_labels());
  REQUIRE(script.size() == 2);
  CHECK(script.moves[0] == Move{"stab", {2, 5, 1, 5, 1, 1}});
  CHECK(script.moves[1] == Move{"slide", {4, -1}});
  // the fourth band became the stabilizing band, the slid one follows it
  REQUIRE(out.bands.bands[3].mono);
  REQUIRE(out.bands.bands[4].mono);
  CHECK(*out.bands.bands[3].mono == MonotonicBand(2, 5, +1, {+1, +1}));
  CHECK(*out.bands.bands[4].mono == MonotonicBand(2, 6, -1, {-1, -1, -1}));
  CHECK(same_diagram(apply_script(ld, script), out));
  // the result flattens and reads back
  CHECK(same_diagram(braid_up(flatten(out)), out));
}

TEST_CASE("monotonize handles a doubly wound band") {
  LineDiagram dw;
  dw.degree = 2;
  dw.bands.strands = 3;
  dw.labels.assign(3, Perm::parse_cycles(2, "(1 2)"));
  dw.bands.bands = {Band(BraidWord::parse(3, "S2 S2 S2 S2 s1 s2 s2 s2 s2"))};
  dw.check();

  auto [out, script] = monotonize(dw);
  CHECK(out.sheets() == 6);
  CHECK(out.bands.size() == 4);
  CHECK(out.all_monotonic());
  CHECK(out.check_labels());
  int stabs = 0, slides = 0;
  bool stabs_first = true;
  for (size_t t = 0; t < script.size(); t++) {
    if (script.moves[t].op == "stab") {
      stabs++;
      if (slides > 0)
        stabs_first = false;
    } else {
      slides++;
    }
  }
  CHECK(stabs == 3);
  CHECK(slides == 3);
  CHECK(stabs_first);
  CHECK(same_diagram(apply_script(dw, script), out));
}

TEST_CASE("monotonize rejects words that are not bands") {
  LineDiagram bad;
  bad.degree = 2;
  bad.bands.strands = 3;
  bad.labels.assign(3, Perm::parse_cycles(2, "(1 2)"));
  bad.bands.bands = {Band(BraidWord::parse(3, "s1 s1 s1"))};
  CHECK_THROWS_WITH(monotonize(bad), Catch::Matchers::ContainsSubstring(
                                         "conjugated standard generator"));
}

TEST_CASE("monotonize resolves randomly slid diagrams") {
  std::mt19937_64 rng(99);
  int done = 0;
  for (int trial = 0; trial < 40 || done < 25; trial++) {
    REQUIRE(trial < 200);
    int degree = 2 + (int)(rng() % 3);
    int sheets = 3 + (int)(rng() % 5);
    LineDiagram ld = fx::random_diagram(rng, degree, sheets);
    if (ld.bands.size() < 2)
      continue;
    int k = 1 + (int)(rng() % 6);
    for (int t = 0; t < k; t++) {
      int i = 1 + (int)(rng() % (ld.bands.size() - 1));
      ld = slide(ld, i, rng() % 2 ? SlideDir::right : SlideDir::left);
    }
    auto [out, script] = monotonize(ld);
    CHECK(out.all_monotonic());
    CHECK(out.check_labels());
    CHECK(same_diagram(apply_script(ld, script), out));
    // monotonic outputs flatten and read back, even when several bands
    // share a lower sheet
    CHECK(same_diagram(braid_up(flatten(out)), out));
    done++;
  }
}
