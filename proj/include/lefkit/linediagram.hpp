#ifndef LEFKIT_LINEDIAGRAM_HPP
#define LEFKIT_LINEDIAGRAM_HPP

// Labeled line diagrams: a braided surface presented as a half-twist
// sequence on m sheets, with each sheet labeled by a transposition of the
// d-fold branched cover. Includes the label-compatibility check, the two
// stabilization moves at this level (adding a braid sheet, adding a cover
// sheet) with their inverses, and the .lfd text format.

#include <istream>
#include <ostream>
#include <sstream>

#include "lefkit/braid.hpp"

namespace lefkit {

struct LineDiagram {
  int degree = 1;            // sheets of the branched cover
  std::vector<Perm> labels;  // labels[r-1] = transposition for sheet r+...
  HalfTwistSequence bands;   // bands.strands == number of sheets

  int sheets() const { return bands.strands; }

  void check() const {
    if (degree < 2)
      throw std::runtime_error("line diagram: degree must be at least 2");
    if ((int)labels.size() != sheets())
      throw std::runtime_error("line diagram: one label per sheet required");
    for (const Perm &t : labels) {
      if (t.deg() != degree)
        throw std::runtime_error("line diagram: label degree mismatch");
      if (!t.is_transposition())
        throw std::runtime_error("line diagram: label is not a transposition");
    }
    bands.check();
  }

  // Transport along a monotonic band: the product, in increasing sheet
  // order, of the labels of the sheets the band passes through.
  Perm transport(const MonotonicBand &b) const {
    Perm T(degree);
    for (int h = b.from + 1; h < b.to; h++)
      if (b.eps(h) == +1)
        T = T.then(labels[h - 1]);
    return T;
  }

  // Label compatibility: each monotonic band from sheet j to sheet k must
  // satisfy t_k = T^-1 t_j T with T the transport above. Non-monotonic
  // bands have no through/front data, so only their shape is checkable.
  bool check_labels(std::string *why = nullptr) const {
    for (size_t i = 0; i < bands.size(); i++) {
      const Band &b = bands.bands[i];
      if (!b.mono)
        continue;
      Perm T = transport(*b.mono);
      Perm want = T.inv().then(labels[b.mono->from - 1]).then(T);
      if (labels[b.mono->to - 1] != want) {
        if (why) {
          std::ostringstream out;
          out << "band " << i + 1 << ": sheet " << b.mono->to << " has label "
              << labels[b.mono->to - 1].cycles() << ", transport requires "
              << want.cycles();
          *why = out.str();
        }
        return false;
      }
    }
    return true;
  }

  bool all_monotonic() const {
    for (const Band &b : bands.bands)
      if (!b.mono)
        return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// Braid stabilization: add a sheet below everything (index m+1) and a final
// band from `source` to it, passing in front of every intermediate sheet.
// The transport is then trivial, so the new sheet copies the source label.

inline LineDiagram braid_stabilize(const LineDiagram &ld, int source, int sign) {
  if (source < 1 || source > ld.sheets())
    throw std::runtime_error("braid stabilization: bad source sheet");
  if (sign != 1 && sign != -1)
    throw std::runtime_error("braid stabilization: sign must be +-1");
  LineDiagram r = ld;
  int m = r.sheets() + 1;
  r.bands.strands = m;
  r.labels.push_back(r.labels[source - 1]);
  for (Band &b : r.bands.bands)
    b.w.strands = m;  // letters unchanged; the new sheet is below them all
  MonotonicBand nb(source, m, sign, std::vector<int>(m - source - 1, -1));
  r.bands.bands.emplace_back(nb, m);
  return r;
}

// ---------------------------------------------------------------------------
// Elementary stabilization at an arbitrary position: insert a fresh sheet at
// position p (old sheets at and below p shift down by one) and join it to
// sheet `source` (index after the shift) by a new monotonic band with the
// given sign and pattern, placed so it becomes band number pos. Existing
// bands pass in front of the fresh sheet. The fresh sheet's label is the one
// transport along the new band forces, so label consistency is preserved.
// braid_stabilize above is the special case p = m+1 with an all-front band
// appended last.

inline LineDiagram stabilize_at(const LineDiagram &ld, int p, int source,
                                int sign, const std::vector<int> &pattern,
                                int pos) {
  int m = ld.sheets() + 1;
  if (p < 1 || p > m)
    throw std::runtime_error("stabilization: bad sheet position");
  if (source < 1 || source > m || source == p)
    throw std::runtime_error("stabilization: bad source sheet");
  if (sign != 1 && sign != -1)
    throw std::runtime_error("stabilization: sign must be +-1");
  if (pos < 1 || (size_t)pos > ld.bands.size() + 1)
    throw std::runtime_error("stabilization: bad band position");
  MonotonicBand nb(std::min(p, source), std::max(p, source), sign, pattern);

  LineDiagram r;
  r.degree = ld.degree;
  r.bands.strands = m;
  for (const Band &b : ld.bands.bands)
    r.bands.bands.emplace_back(insert_strand(b.w, p));
  r.bands.bands.insert(r.bands.bands.begin() + (pos - 1), Band(nb, m));

  r.labels = ld.labels;
  r.labels.insert(r.labels.begin() + (p - 1), Perm(ld.degree));
  Perm T = r.transport(nb);  // spans only old sheets, whose labels are set
  if (p == nb.to)
    r.labels[p - 1] = T.inv().then(r.labels[nb.from - 1]).then(T);
  else
    r.labels[p - 1] = T.then(r.labels[nb.to - 1]).then(T.inv());
  return r;
}

// Does the word mention either generator adjacent to strand s? If not, the
// band is combinatorially disjoint from that sheet.
inline bool word_touches_sheet(const BraidWord &w, int s) {
  for (int l : w.letters) {
    int i = std::abs(l);
    if (i == s || i == s - 1)
      return true;
  }
  return false;
}

// A band (at position i, skipped) may block removing `sheet`. Monotonic
// bands block when they end there or pass through it (front is fine); for
// general bands we only certify full disjointness via the letter support.
inline void check_sheet_free(const LineDiagram &ld, int sheet, int skip) {
  for (size_t i = 0; i < ld.bands.size(); i++) {
    if ((int)i == skip - 1)
      continue;
    const Band &b = ld.bands.bands[i];
    if (b.mono) {
      if (b.mono->from == sheet || b.mono->to == sheet)
        throw std::runtime_error("destabilization: sheet " +
                                 std::to_string(sheet) + " still has band " +
                                 std::to_string(i + 1));
      if (b.mono->from < sheet && sheet < b.mono->to &&
          b.mono->eps(sheet) == +1)
        throw std::runtime_error("destabilization: band " +
                                 std::to_string(i + 1) +
                                 " passes through sheet " +
                                 std::to_string(sheet));
    } else if (word_touches_sheet(b.w, sheet)) {
      throw std::runtime_error(
          "destabilization: cannot certify non-monotonic band " +
          std::to_string(i + 1) + " away from sheet " + std::to_string(sheet));
    }
  }
}

// Rebuild the surviving bands on one fewer sheet.
inline void copy_bands_without_sheet(const LineDiagram &ld, int sheet, int skip,
                                     LineDiagram &r) {
  for (size_t i = 0; i < ld.bands.size(); i++) {
    if ((int)i == skip - 1)
      continue;
    const Band &b = ld.bands.bands[i];
    if (b.mono) {
      std::vector<int> pat;
      for (int h = b.mono->from + 1; h < b.mono->to; h++)
        if (h != sheet)
          pat.push_back(b.mono->eps(h));
      MonotonicBand nb(bump_down(b.mono->from, sheet),
                       bump_down(b.mono->to, sheet), b.mono->sign,
                       std::move(pat));
      r.bands.bands.emplace_back(nb, r.bands.strands);
    } else {
      // check_sheet_free certified the word avoids generators s-1 and s.
      BraidWord w;
      w.strands = r.bands.strands;
      for (int l : b.w.letters) {
        int idx = bump_down(std::abs(l), sheet);
        w.letters.push_back(l > 0 ? idx : -idx);
      }
      r.bands.bands.emplace_back(Band(w));
    }
  }
}

// The inverse of braid stabilization: remove band `index` (1-based)
// together with its end sheet `sheet`. Allowed only when the sheet is
// otherwise untouched: no other band ends there, and none passes through
// it (passing in front is fine).
inline LineDiagram braid_destabilize(const LineDiagram &ld, int index, int sheet) {
  if (index < 1 || (size_t)index > ld.bands.size())
    throw std::runtime_error("braid destabilization: bad band index");
  const Band &victim = ld.bands.bands[index - 1];
  int a = 0, b = 0;
  if (!victim.w.perm().is_transposition(&a, &b))
    throw std::runtime_error("braid destabilization: band is not a half-twist");
  if (sheet != a && sheet != b)
    throw std::runtime_error(
        "braid destabilization: sheet is not an end of the band");
  check_sheet_free(ld, sheet, index);

  LineDiagram r;
  r.degree = ld.degree;
  r.bands.strands = ld.sheets() - 1;
  for (int s = 1; s <= ld.sheets(); s++)
    if (s != sheet)
      r.labels.push_back(ld.labels[s - 1]);
  copy_bands_without_sheet(ld, sheet, index, r);
  return r;
}

// ---------------------------------------------------------------------------
// Cover stabilization: raise the covering degree by one and add a separate
// flat sheet at the bottom labeled (i, d+1), attached to nothing.

inline LineDiagram cover_stabilize(const LineDiagram &ld, int i) {
  if (i < 1 || i > ld.degree)
    throw std::runtime_error("cover stabilization: bad cover-sheet index");
  LineDiagram r = ld;
  r.degree = ld.degree + 1;
  for (Perm &t : r.labels) {
    t.img.push_back(r.degree);  // extend each label by a fixed point
  }
  int m = r.sheets() + 1;
  r.bands.strands = m;
  for (Band &b : r.bands.bands)
    b.w.strands = m;
  r.labels.push_back(Perm::transposition(r.degree, i, r.degree));
  return r;
}

// The inverse: drop sheet `sheet`, whose label must mention cover sheet d
// with d appearing in no other label; the sheet must carry no band ends and
// no through-crossings (front crossings lose their entry).
inline LineDiagram cover_destabilize(const LineDiagram &ld, int sheet) {
  if (sheet < 1 || sheet > ld.sheets())
    throw std::runtime_error("cover destabilization: bad sheet");
  int d = ld.degree;
  if (d < 3)
    throw std::runtime_error("cover destabilization: degree would drop below 2");
  int a, b;
  if (!ld.labels[sheet - 1].is_transposition(&a, &b) || b != d)
    throw std::runtime_error(
        "cover destabilization: label does not mention the top cover sheet");
  for (int s = 1; s <= ld.sheets(); s++) {
    if (s == sheet)
      continue;
    if (ld.labels[s - 1](d) != d)
      throw std::runtime_error("cover destabilization: cover sheet " +
                               std::to_string(d) + " is still branched at sheet " +
                               std::to_string(s));
  }
  check_sheet_free(ld, sheet, 0);

  LineDiagram r;
  r.degree = d - 1;
  r.bands.strands = ld.sheets() - 1;
  for (int s = 1; s <= ld.sheets(); s++) {
    if (s == sheet)
      continue;
    Perm t = ld.labels[s - 1];
    t.img.pop_back();
    t.check();
    r.labels.push_back(t);
  }
  copy_bands_without_sheet(ld, sheet, 0, r);
  return r;
}

// Band sliding at the line-diagram level: sheets and labels stay put.
inline LineDiagram slide(const LineDiagram &ld, int i, SlideDir dir) {
  LineDiagram r = ld;
  r.bands = hurwitz_slide(ld.bands, i, dir);
  return r;
}

// ---------------------------------------------------------------------------
// .lfd text format. Only fully monotonic diagrams are serializable.
//
//   lfd 1
//   degree 3
//   sheets 4
//   label 1 (1 2)
//   ...
//   band 2 4 + tf        (pattern over {t,f}; "." when the sheets are adjacent)

inline void save_lfd(const LineDiagram &ld, std::ostream &out) {
  ld.check();
  out << "lfd 1\n";
  out << "degree " << ld.degree << "\n";
  out << "sheets " << ld.sheets() << "\n";
  for (int r = 1; r <= ld.sheets(); r++)
    out << "label " << r << " " << ld.labels[r - 1].cycles() << "\n";
  for (const Band &b : ld.bands.bands) {
    if (!b.mono)
      throw std::runtime_error(
          "lfd: non-monotonic band cannot be written (monotonize first)");
    out << "band " << b.mono->from << " " << b.mono->to << " "
        << (b.mono->sign > 0 ? '+' : '-') << " ";
    if (b.mono->pattern.empty())
      out << ".";
    else
      for (int e : b.mono->pattern)
        out << (e > 0 ? 't' : 'f');
    out << "\n";
  }
}

inline std::string to_lfd(const LineDiagram &ld) {
  std::ostringstream out;
  save_lfd(ld, out);
  return out.str();
}

inline LineDiagram load_lfd(std::istream &in) {
  LineDiagram ld;
  ld.degree = 0;
  int sheets = -1;
  std::string line;
  int lineno = 0;
  bool magic = false;
  auto fail = [&](const std::string &msg) -> void {
    throw std::invalid_argument("lfd line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    lineno++;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#')
      continue;
    if (key == "lfd") {
      int version = 0;
      if (!(ls >> version) || version != 1)
        fail("unsupported version");
      magic = true;
    } else if (key == "degree") {
      if (!(ls >> ld.degree) || ld.degree < 2)
        fail("bad degree");
    } else if (key == "sheets") {
      if (!(ls >> sheets) || sheets < 1)
        fail("bad sheet count");
      ld.bands.strands = sheets;
      ld.labels.assign(sheets, Perm(ld.degree ? ld.degree : 1));
      if (!ld.degree)
        fail("sheets before degree");
    } else if (key == "label") {
      int r;
      std::string rest;
      if (sheets < 0)
        fail("label before sheets");
      if (!(ls >> r) || r < 1 || r > sheets)
        fail("bad label sheet index");
      std::getline(ls, rest);
      ld.labels[r - 1] = Perm::parse_cycles(ld.degree, rest);
    } else if (key == "band") {
      int j, k;
      char sign;
      std::string pat;
      if (sheets < 0)
        fail("band before sheets");
      if (!(ls >> j >> k >> sign >> pat))
        fail("band needs: from to sign pattern");
      if (sign != '+' && sign != '-')
        fail("band sign must be + or -");
      if (j < 1 || k <= j || k > sheets)
        fail("bad band sheets");
      std::vector<int> pattern;
      if (pat != ".") {
        for (char c : pat) {
          if (c == 't')
            pattern.push_back(+1);
          else if (c == 'f')
            pattern.push_back(-1);
          else
            fail("band pattern must use t/f");
        }
      }
      if ((int)pattern.size() != k - j - 1)
        fail("band pattern length mismatch");
      MonotonicBand b(j, k, sign == '+' ? 1 : -1, std::move(pattern));
      ld.bands.bands.emplace_back(b, sheets);
    } else {
      fail("unknown directive '" + key + "'");
    }
  }
  if (!magic)
    throw std::invalid_argument("lfd: missing 'lfd 1' header");
  if (sheets < 0)
    throw std::invalid_argument("lfd: missing sheet count");
  ld.check();
  return ld;
}

inline LineDiagram from_lfd(const std::string &text) {
  std::istringstream in(text);
  return load_lfd(in);
}

}  // namespace lefkit

#endif
