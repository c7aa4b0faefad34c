#ifndef LEFKIT_BRAID_HPP
#define LEFKIT_BRAID_HPP

// Exact arithmetic in braid groups and symmetric groups: words, free
// reduction, permutation images, monotonic-band encodings and the Hurwitz
// (band-sliding) action on half-twist sequences.
//
// Conventions, fixed once and used everywhere:
//   * permutations and braid words compose left to right: (p*q)(x) = q(p(x));
//   * a positive half-twist is right-handed and maps to the transposition
//     (i, i+1);
//   * sheets, strands and sequences are 1-indexed.

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lefkit {

// ---------------------------------------------------------------------------
// Permutations of {1..d}, 1-based.

struct Perm {
  std::vector<int> img;  // img[i-1] = image of i

  Perm() = default;
  explicit Perm(int d) : img(d) {
    for (int i = 0; i < d; i++)
      img[i] = i + 1;
  }
  explicit Perm(std::vector<int> images) : img(std::move(images)) { check(); }

  int deg() const { return (int)img.size(); }

  int operator()(int x) const {
    if (x < 1 || x > deg())
      throw std::out_of_range("Perm: point out of range");
    return img[x - 1];
  }

  void check() const {
    std::vector<char> seen(img.size(), 0);
    for (int v : img) {
      if (v < 1 || v > deg() || seen[v - 1])
        throw std::invalid_argument("Perm: images are not a bijection");
      seen[v - 1] = 1;
    }
  }

  static Perm transposition(int d, int a, int b) {
    if (a < 1 || b < 1 || a > d || b > d || a == b)
      throw std::invalid_argument("Perm: bad transposition");
    Perm p(d);
    std::swap(p.img[a - 1], p.img[b - 1]);
    return p;
  }

  // Left-to-right composition: apply *this first, then q.
  Perm then(const Perm &q) const {
    if (q.deg() != deg())
      throw std::invalid_argument("Perm: degree mismatch in composition");
    Perm r(deg());
    for (int i = 1; i <= deg(); i++)
      r.img[i - 1] = q(img[i - 1]);
    return r;
  }

  Perm inv() const {
    Perm r(deg());
    for (int i = 1; i <= deg(); i++)
      r.img[img[i - 1] - 1] = i;
    return r;
  }

  bool is_identity() const {
    for (int i = 1; i <= deg(); i++)
      if (img[i - 1] != i)
        return false;
    return true;
  }

  // If *this is a 2-cycle (a b), a < b, report it.
  bool is_transposition(int *a = nullptr, int *b = nullptr) const {
    int x = 0, y = 0;
    for (int i = 1; i <= deg(); i++) {
      if (img[i - 1] != i) {
        if (!x)
          x = i;
        else if (!y)
          y = i;
        else
          return false;
      }
    }
    if (!y || img[x - 1] != y || img[y - 1] != x)
      return false;
    if (a)
      *a = x;
    if (b)
      *b = y;
    return true;
  }

  bool operator==(const Perm &o) const { return img == o.img; }
  bool operator!=(const Perm &o) const { return !(*this == o); }
  bool operator<(const Perm &o) const { return img < o.img; }

  // Cycle notation, e.g. "(2 4)" or "(1 3 2)(4 5)"; identity prints "()".
  std::string cycles() const {
    std::vector<char> seen(img.size(), 0);
    std::ostringstream out;
    bool any = false;
    for (int i = 1; i <= deg(); i++) {
      if (seen[i - 1] || img[i - 1] == i)
        continue;
      any = true;
      out << '(';
      int j = i;
      bool first = true;
      do {
        if (!first)
          out << ' ';
        out << j;
        first = false;
        seen[j - 1] = 1;
        j = img[j - 1];
      } while (j != i);
      out << ')';
    }
    if (!any)
      return "()";
    return out.str();
  }

  // Parse cycle notation over {1..d}. Accepts "()" for the identity.
  static Perm parse_cycles(int d, const std::string &s) {
    Perm p(d);
    size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < s.size() && isspace((unsigned char)s[pos]))
        pos++;
    };
    skip_ws();
    if (pos == s.size())
      throw std::invalid_argument("Perm: empty cycle expression");
    while (pos < s.size()) {
      skip_ws();
      if (pos == s.size())
        break;
      if (s[pos] != '(')
        throw std::invalid_argument("Perm: expected '(' in cycle notation");
      pos++;
      std::vector<int> cyc;
      for (;;) {
        skip_ws();
        if (pos < s.size() && s[pos] == ')') {
          pos++;
          break;
        }
        size_t start = pos;
        while (pos < s.size() && isdigit((unsigned char)s[pos]))
          pos++;
        if (pos == start)
          throw std::invalid_argument("Perm: expected integer in cycle");
        int v = std::stoi(s.substr(start, pos - start));
        if (v < 1 || v > d)
          throw std::invalid_argument("Perm: cycle entry out of range");
        cyc.push_back(v);
      }
      // Compose the cycle on the right of what we have so far.
      std::vector<char> used(d, 0);
      for (int v : cyc) {
        if (used[v - 1])
          throw std::invalid_argument("Perm: repeated entry in cycle");
        used[v - 1] = 1;
      }
      if (cyc.size() > 1) {
        Perm c(d);
        for (size_t i = 0; i < cyc.size(); i++)
          c.img[cyc[i] - 1] = cyc[(i + 1) % cyc.size()];
        p = p.then(c);
      }
    }
    p.check();
    return p;
  }
};

// ---------------------------------------------------------------------------
// Braid words. Letters are nonzero ints: +i is the standard generator on
// strands (i, i+1), -i its inverse. Only free reduction is ever applied; the
// braid relations are out of scope by design.

struct BraidWord {
  int strands = 1;
  std::vector<int> letters;

  BraidWord() = default;
  BraidWord(int m, std::vector<int> ls) : strands(m), letters(std::move(ls)) {
    check();
  }

  void check() const {
    if (strands < 1)
      throw std::invalid_argument("BraidWord: strand count must be positive");
    for (int l : letters)
      if (l == 0 || std::abs(l) >= strands)
        throw std::invalid_argument("BraidWord: generator index out of range");
  }

  bool empty() const { return letters.empty(); }
  size_t size() const { return letters.size(); }

  // Free reduction (cancel adjacent x x^-1 pairs); confluent, so a single
  // stack pass suffices.
  BraidWord reduced() const {
    BraidWord r;
    r.strands = strands;
    for (int l : letters) {
      if (!r.letters.empty() && r.letters.back() == -l)
        r.letters.pop_back();
      else
        r.letters.push_back(l);
    }
    return r;
  }

  BraidWord inv() const {
    BraidWord r;
    r.strands = strands;
    r.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
      r.letters.push_back(-*it);
    return r;
  }

  BraidWord operator*(const BraidWord &o) const {
    if (o.strands != strands)
      throw std::invalid_argument("BraidWord: strand count mismatch");
    BraidWord r;
    r.strands = strands;
    r.letters = letters;
    r.letters.insert(r.letters.end(), o.letters.begin(), o.letters.end());
    return r;
  }

  // Permutation image under the canonical homomorphism. Letters act in
  // reading order, so each transposition is applied on the value side.
  Perm perm() const {
    Perm p(strands);
    for (int l : letters) {
      int i = std::abs(l);
      for (int &v : p.img) {
        if (v == i)
          v = i + 1;
        else if (v == i + 1)
          v = i;
      }
    }
    return p;
  }

  bool operator==(const BraidWord &o) const {
    return strands == o.strands && letters == o.letters;
  }
  bool operator!=(const BraidWord &o) const { return !(*this == o); }

  // Tokens: s3 = generator 3, S3 = its inverse; empty word prints "e".
  std::string str() const {
    if (letters.empty())
      return "e";
    std::ostringstream out;
    for (size_t i = 0; i < letters.size(); i++) {
      if (i)
        out << ' ';
      out << (letters[i] > 0 ? 's' : 'S') << std::abs(letters[i]);
    }
    return out.str();
  }

  static BraidWord parse(int strands, const std::string &s) {
    BraidWord w;
    w.strands = strands;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
      if (tok == "e")
        continue;
      if (tok.size() < 2 || (tok[0] != 's' && tok[0] != 'S'))
        throw std::invalid_argument("BraidWord: bad token '" + tok + "'");
      int idx;
      try {
        idx = std::stoi(tok.substr(1));
      } catch (...) {
        throw std::invalid_argument("BraidWord: bad token '" + tok + "'");
      }
      w.letters.push_back(tok[0] == 's' ? idx : -idx);
    }
    w.check();
    return w;
  }
};

// Mapping an index when a strand is inserted at position `at` (everything >=
// at shifts up) or removed (everything > at shifts down).
inline int bump_up(int i, int at) { return i >= at ? i + 1 : i; }
inline int bump_down(int i, int at) { return i > at ? i - 1 : i; }

// Rewrite a word for the braid group with one more strand, inserted at
// position p (old strands >= p shift up by one). Everything existing passes
// in front of the new strand, so the generator on (p-1, p) becomes the
// half-twist on (p-1, p+1) running in front of p.
inline BraidWord insert_strand(const BraidWord &w, int p) {
  if (p < 1 || p > w.strands + 1)
    throw std::invalid_argument("insert_strand: position out of range");
  BraidWord r;
  r.strands = w.strands + 1;
  for (int l : w.letters) {
    int i = std::abs(l);
    if (i <= p - 2) {
      r.letters.push_back(l);
    } else if (i >= p) {
      r.letters.push_back(l > 0 ? i + 1 : -(i + 1));
    } else {
      r.letters.push_back(p);
      r.letters.push_back(l);
      r.letters.push_back(-p);
    }
  }
  return r.reduced();
}

// ---------------------------------------------------------------------------
// Equality in the braid group. Free reduction alone cannot see the braid
// relations, so where exact group equality matters (recognizing a band again
// after a slide, certifying isotopy rewrites) we act on the free group on
// x_1..x_m; that action is faithful, hence decides equality.

namespace artin_detail {

inline void push_reduced(std::vector<int> &out, int sym) {
  if (!out.empty() && out.back() == -sym)
    out.pop_back();
  else
    out.push_back(sym);
}

// Append the image of the free generator `sym` under one braid letter:
//   s_i: x_i -> x_i x_{i+1} x_i^-1,  x_{i+1} -> x_i,  others fixed.
inline void gen_image(int letter, int sym, std::vector<int> &out) {
  int i = std::abs(letter);
  int g = std::abs(sym);
  auto emit = [&](std::initializer_list<int> ls) {
    if (sym > 0) {
      for (int l : ls)
        push_reduced(out, l);
    } else {
      for (auto it = std::rbegin(ls); it != std::rend(ls); ++it)
        push_reduced(out, -*it);
    }
  };
  if (letter > 0) {
    if (g == i)
      emit({i, i + 1, -i});
    else if (g == i + 1)
      emit({i});
    else
      emit({g});
  } else {
    if (g == i)
      emit({i + 1});
    else if (g == i + 1)
      emit({-(i + 1), i, i + 1});
    else
      emit({g});
  }
}

}  // namespace artin_detail

// Image of the free generator x_t under the automorphism of the word's braid.
// Image lengths can grow exponentially in the word length, so the expansion
// carries a hard budget; overrunning it raises an error rather than eating
// all memory.
inline std::vector<int> artin_image(const BraidWord &w, int t) {
  std::vector<int> cur = {t};
  for (int l : w.letters) {
    std::vector<int> next;
    for (int sym : cur)
      artin_detail::gen_image(l, sym, next);
    if (next.size() > (1u << 20))
      throw std::runtime_error("braid equality: image too large");
    cur = std::move(next);
  }
  return cur;
}

// Exact equality as elements of the braid group.
inline bool artin_equal(const BraidWord &u, const BraidWord &v) {
  if (u.strands != v.strands)
    return false;
  if (u.perm() != v.perm())
    return false;
  for (int t = 1; t <= u.strands; t++)
    if (artin_image(u, t) != artin_image(v, t))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Monotonic bands: conjugates of a standard generator by a staircase,
//   x_{k-1}^{-e_{k-1}} ... x_{j+1}^{-e_{j+1}} x_j^{s} x_{j+1}^{e_{j+1}} ... x_{k-1}^{e_{k-1}}
// running monotonically from sheet j to sheet k. pattern[h - j - 1] = e_h
// for j < h < k; e_h = +1 means the band passes through sheet h, -1 in front.

struct MonotonicBand {
  int from = 1, to = 2;    // j < k
  int sign = 1;            // half-twist sign
  std::vector<int> pattern;  // size to-from-1, entries +-1

  MonotonicBand() = default;
  MonotonicBand(int j, int k, int s, std::vector<int> pat)
      : from(j), to(k), sign(s), pattern(std::move(pat)) {
    if (j < 1 || k <= j)
      throw std::invalid_argument("MonotonicBand: need 1 <= from < to");
    if (s != 1 && s != -1)
      throw std::invalid_argument("MonotonicBand: sign must be +-1");
    if ((int)pattern.size() != k - j - 1)
      throw std::invalid_argument("MonotonicBand: pattern length mismatch");
    for (int e : pattern)
      if (e != 1 && e != -1)
        throw std::invalid_argument("MonotonicBand: pattern entries must be +-1");
  }

  int eps(int h) const {  // e_h for from < h < to
    return pattern[h - from - 1];
  }

  BraidWord word(int strands) const {
    if (to > strands)
      throw std::invalid_argument("MonotonicBand: sheet index beyond strand count");
    BraidWord w;
    w.strands = strands;
    for (int h = to - 1; h > from; h--)
      w.letters.push_back(-eps(h) * h);
    w.letters.push_back(sign * from);
    for (int h = from + 1; h <= to - 1; h++)
      w.letters.push_back(eps(h) * h);
    return w;
  }

  bool operator==(const MonotonicBand &o) const {
    return from == o.from && to == o.to && sign == o.sign && pattern == o.pattern;
  }
  bool operator!=(const MonotonicBand &o) const { return !(*this == o); }
};

// Purely syntactic template match on a freely reduced word; no search over
// braid relations. Returns the unique decomposition when it exists.
inline std::optional<MonotonicBand> match_monotonic(const BraidWord &w0) {
  BraidWord w = w0.reduced();
  size_t n = w.size();
  if (n == 0 || n % 2 == 0)
    return std::nullopt;
  size_t q = n / 2;
  int j = std::abs(w.letters[q]);
  int k = j + (int)q + 1;
  if (k > w.strands)
    return std::nullopt;
  std::vector<int> pat(q);
  for (size_t t = 1; t <= q; t++) {
    int suf = w.letters[q + t], pre = w.letters[q - t];
    if (std::abs(suf) != j + (int)t || pre != -suf)
      return std::nullopt;
    pat[t - 1] = suf > 0 ? 1 : -1;
  }
  return MonotonicBand(j, k, w.letters[q] > 0 ? 1 : -1, std::move(pat));
}

// ---------------------------------------------------------------------------
// Band cores. A band word w = u^-1 x_j^s u describes a half-twisted band
// whose core is the arc carrying the little arc between sheets j, j+1 along
// u. The free-group action computes that arc exactly: the images of x_j and
// x_{j+1} under u are conjugates A x_c A^-1 and B x_d B^-1, the attachments
// land on sheets c and d, and the reduced word A^-1 B lists the crossings
// where the core passes through a sheet (positive letter: heading down).
// Crossings in front of a sheet leave no trace in the free group, so they
// are filled back in by continuity of the walk. Rotating the arc around an
// endpoint unwraps crossings of that endpoint's own sheet next to the end,
// so those are stripped. The extremal points of the core (direction
// reversals) are exactly what stabilization must remove before the diagram
// can be flattened.

struct CoreCrossing {
  int sheet = 0;
  int dir = 1;   // +1 heading down the sheet stack, -1 heading up
  int side = 1;  // +1 through the sheet, -1 in front of it
  bool operator==(const CoreCrossing &o) const {
    return sheet == o.sheet && dir == o.dir && side == o.side;
  }
};

struct BandCore {
  int top = 1, bottom = 2;  // attachment sheets, top < bottom
  int sign = 1;             // half-twist sign
  std::vector<CoreCrossing> path;  // walked from the top attachment

  // A core with no upward crossing runs straight down the stack.
  bool monotone() const {
    for (const CoreCrossing &c : path)
      if (c.dir < 0)
        return false;
    return true;
  }

  // Number of extremal points: direction reversals along the walk.
  int extrema() const {
    int n = 0;
    for (size_t t = 1; t < path.size(); t++)
      n += path[t].dir != path[t - 1].dir;
    return n;
  }
};

inline BandCore band_core(const BraidWord &w0) {
  BraidWord w = w0.reduced();
  size_t n = w.size();
  if (n % 2 == 0)
    throw std::invalid_argument(
        "band core: word is not a conjugated standard generator");
  size_t q = n / 2;
  for (size_t t = 1; t <= q; t++)
    if (w.letters[q - t] != -w.letters[q + t])
      throw std::invalid_argument(
          "band core: word is not a conjugated standard generator");
  int j0 = std::abs(w.letters[q]);
  BraidWord u;  // the conjugator, read off the word's second half
  u.strands = w.strands;
  u.letters.assign(w.letters.begin() + q + 1, w.letters.end());

  // Split a conjugate image into tail and center; images of generators
  // always reduce to this shape.
  auto peel = [](const std::vector<int> &img, int &center) {
    size_t h = img.size() / 2;
    center = img[h];
    return std::vector<int>(img.begin(), img.begin() + h);
  };
  int c = 0, d = 0;
  std::vector<int> A = peel(artin_image(u, j0), c);
  std::vector<int> B = peel(artin_image(u, j0 + 1), d);
  std::vector<int> M;
  for (auto it = A.rbegin(); it != A.rend(); ++it)
    artin_detail::push_reduced(M, -*it);
  for (int l : B)
    artin_detail::push_reduced(M, l);
  // unwrap the ends: crossings of an endpoint's own sheet next to that end
  // rotate away around the endpoint
  size_t mb = 0, me = M.size();
  while (mb < me && std::abs(M[mb]) == c)
    mb++;
  while (me > mb && std::abs(M[me - 1]) == d)
    me--;

  BandCore core;
  core.sign = w.letters[q] > 0 ? 1 : -1;
  // walk from sheet c, tracking the gap between sheets g and g+1;
  // through-crossings come from M, front-crossings from continuity
  int g = -1;  // -1: still at the start attachment
  auto go = [&](int target) {
    if (g < 0)
      g = target >= c ? c : c - 1;
    while (g < target) {
      core.path.push_back({g + 1, +1, -1});
      g++;
    }
    while (g > target) {
      core.path.push_back({g, -1, -1});
      g--;
    }
  };
  for (size_t t = mb; t < me; t++) {
    int s = std::abs(M[t]), e = M[t] > 0 ? +1 : -1;
    go(e > 0 ? s - 1 : s);
    core.path.push_back({s, e, +1});
    g = e > 0 ? s : s - 1;
  }
  if (g < 0)
    g = d > c ? c : c - 1;
  go(g >= d ? d : d - 1);  // finish beside the other attachment

  core.top = std::min(c, d);
  core.bottom = std::max(c, d);
  if (c > d) {  // orient the walk from the upper attachment
    std::reverse(core.path.begin(), core.path.end());
    for (CoreCrossing &x : core.path)
      x.dir = -x.dir;
  }
  return core;
}

// Recognize a band word that is braid-equal to a monotonic one and return
// that normal form: the core is monotonic precisely when it heads straight
// down the stack, and its crossing sides are the pattern. Words that are not
// syntactically conjugates of a generator fall back to trying every pattern
// between the forced ends against exact group equality.
inline std::optional<MonotonicBand> reexpress_monotonic(const BraidWord &w0) {
  BraidWord w = w0.reduced();
  if (auto m = match_monotonic(w))
    return m;
  int a = 0, b = 0;
  if (!w.perm().is_transposition(&a, &b))
    return std::nullopt;

  try {
    BandCore core = band_core(w);
    if (!core.monotone())
      return std::nullopt;
    std::vector<int> pat;
    for (const CoreCrossing &c : core.path)
      pat.push_back(c.side);
    return MonotonicBand(core.top, core.bottom, core.sign, std::move(pat));
  } catch (const std::invalid_argument &) {
  } catch (const std::runtime_error &) {
    return std::nullopt;  // word too tangled to certify; keep it general
  }

  int es = 0;
  for (int l : w.letters)
    es += l > 0 ? 1 : -1;
  if (es != 1 && es != -1)
    return std::nullopt;
  int gap = b - a - 1;
  if (gap > 24)  // 2^gap candidates; bands this wide never arise here
    return std::nullopt;
  for (long mask = 0; mask < (1L << gap); mask++) {
    std::vector<int> pat(gap);
    for (int t = 0; t < gap; t++)
      pat[t] = (mask >> t) & 1 ? 1 : -1;
    MonotonicBand cand(a, b, es, std::move(pat));
    try {
      if (artin_equal(w, cand.word(w.strands)))
        return cand;
    } catch (const std::runtime_error &) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Half-twist sequences (Hurwitz systems of bands). Each entry is a word that
// must map to a transposition; entries that syntactically match the monotonic
// template keep the compact encoding alongside.

struct Band {
  BraidWord w;
  std::optional<MonotonicBand> mono;

  Band() = default;
  explicit Band(const BraidWord &word) : w(word.reduced()) {
    // the word is kept verbatim; the monotonic reading, when one exists,
    // lives alongside it
    mono = reexpress_monotonic(w);
  }
  Band(const MonotonicBand &b, int strands) : w(b.word(strands)), mono(b) {}

  // Bands recognized as monotonic describe the same arc whenever their
  // template readings agree, regardless of the spelling they arrived in.
  bool operator==(const Band &o) const {
    if (mono && o.mono)
      return *mono == *o.mono;
    return !mono && !o.mono && w == o.w;
  }
};

struct HalfTwistSequence {
  int strands = 1;
  std::vector<Band> bands;  // Hurwitz order, 1-indexed in the API

  size_t size() const { return bands.size(); }

  void check() const {
    for (const Band &b : bands) {
      if (b.w.strands != strands)
        throw std::invalid_argument("HalfTwistSequence: strand count mismatch");
      if (!b.w.perm().is_transposition())
        throw std::invalid_argument(
            "HalfTwistSequence: band image is not a transposition");
    }
  }
};

enum class SlideDir { right, left };

// The Hurwitz action at position i (1-based, 1 <= i < n):
//   right: (.., b_i, b_{i+1}, ..) -> (.., b_i b_{i+1} b_i^-1, b_i, ..)
//   left is its inverse.
inline HalfTwistSequence hurwitz_slide(const HalfTwistSequence &s, int i,
                                       SlideDir dir) {
  if (i < 1 || (size_t)i >= s.size())
    throw std::out_of_range("hurwitz_slide: position out of range");
  HalfTwistSequence r = s;
  Band &a = r.bands[i - 1];
  Band &b = r.bands[i];
  if (dir == SlideDir::right) {
    BraidWord conj = (a.w * b.w * a.w.inv()).reduced();
    Band moved(conj);
    b = a;
    a = moved;
  } else {
    BraidWord conj = (b.w.inv() * a.w * b.w).reduced();
    Band moved(conj);
    a = b;
    b = moved;
  }
  return r;
}

inline BraidWord total_braid(const HalfTwistSequence &s) {
  BraidWord w;
  w.strands = s.strands;
  for (const Band &b : s.bands)
    w.letters.insert(w.letters.end(), b.w.letters.begin(), b.w.letters.end());
  return w.reduced();
}

}  // namespace lefkit

#endif
