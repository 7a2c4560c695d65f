#include "epscov/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace epscov {

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) {
    ++i;
    --j;
  }
  return Word(r.begin() + static_cast<std::ptrdiff_t>(i), r.begin() + static_cast<std::ptrdiff_t>(j));
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

Word operator*(const Word& a, const Word& b) {
  Word c = a;
  c.insert(c.end(), b.begin(), b.end());
  return free_reduce(c);
}

namespace {

Word least_rotation(const Word& w) {
  Word best = w;
  Word rot = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

}  // namespace

Word cyclic_canonical(const Word& w) {
  Word r = cyclic_reduce(w);
  Word a = least_rotation(r);
  Word b = least_rotation(inverse(r));
  return std::min(a, b);
}

Word commutator(int a, int b) { return Word{a + 1, b + 1, -(a + 1), -(b + 1)}; }

const char* to_string(GroupKind k) {
  switch (k) {
    case GroupKind::Trivial:
      return "trivial";
    case GroupKind::Free:
      return "free";
    case GroupKind::Abelian:
      return "abelian";
    case GroupKind::Unrecognized:
      return "unrecognized";
  }
  return "?";
}

namespace {

// Signed union-find over generators: g = root^sign, or trivial.
struct Collapse {
  std::vector<int> parent;
  std::vector<int> sign;
  std::vector<char> trivial;

  explicit Collapse(int k) : parent(k), sign(k, 1), trivial(k, 0) { std::iota(parent.begin(), parent.end(), 0); }

  // Returns the letter in root terms, 0 when trivial.
  int resolve(int letter) {
    int g = std::abs(letter) - 1;
    int s = letter > 0 ? 1 : -1;
    int root = g, acc = 1;
    while (parent[root] != root) {
      acc *= sign[root];
      root = parent[root];
    }
    // Path compression.
    int cur = g, cur_acc = acc;
    while (parent[cur] != cur) {
      int next = parent[cur];
      int next_acc = cur_acc * sign[cur];
      parent[cur] = root;
      sign[cur] = cur_acc;
      cur = next;
      cur_acc = next_acc;
    }
    if (trivial[root]) return 0;
    return s * acc * (root + 1);
  }
};

struct Phase1Result {
  int num_generators = 0;
  std::vector<Word> relators;
  std::vector<int> image;  // original generator -> letter in phase-1 generators (0 = trivial)
};

Phase1Result collapse_phase(int k, const WordList& rels) {
  Collapse uf(k);
  std::vector<int> buf;
  std::set<int> squares;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < rels.size(); ++r) {
      buf.clear();
      for (std::size_t p = rels.offsets[r]; p < rels.offsets[r + 1]; ++p) {
        int x = uf.resolve(rels.letters[p]);
        if (x == 0) continue;
        if (!buf.empty() && buf.back() == -x)
          buf.pop_back();
        else
          buf.push_back(x);
      }
      while (buf.size() >= 2 && buf.front() == -buf.back()) {
        buf.erase(buf.begin());
        buf.pop_back();
      }
      if (buf.size() == 1) {
        uf.trivial[std::abs(buf[0]) - 1] = 1;
        changed = true;
      } else if (buf.size() == 2) {
        int x = std::abs(buf[0]) - 1, y = std::abs(buf[1]) - 1;
        int a = buf[0] > 0 ? 1 : -1, b = buf[1] > 0 ? 1 : -1;
        if (x != y) {
          uf.parent[x] = y;
          uf.sign[x] = -a * b;
          changed = true;
        } else {
          squares.insert(x);
        }
      }
    }
  }
  Phase1Result out;
  std::vector<int> renumber(k, -1);
  for (int g = 0; g < k; ++g)
    if (uf.parent[g] == g && !uf.trivial[g]) renumber[g] = out.num_generators++;
  auto to_new = [&](int letter) {
    int x = uf.resolve(letter);
    if (x == 0) return 0;
    int id = renumber[std::abs(x) - 1];
    return x > 0 ? id + 1 : -(id + 1);
  };
  out.image.resize(k);
  for (int g = 0; g < k; ++g) out.image[g] = to_new(g + 1);
  std::set<Word> seen;
  for (std::size_t r = 0; r < rels.size(); ++r) {
    Word w;
    for (std::size_t p = rels.offsets[r]; p < rels.offsets[r + 1]; ++p) {
      int x = to_new(rels.letters[p]);
      if (x != 0) w.push_back(x);
    }
    w = cyclic_reduce(w);
    if (w.empty()) continue;
    Word c = cyclic_canonical(w);
    if (seen.insert(c).second) out.relators.push_back(c);
  }
  for (int x : squares) {
    int l = to_new(x + 1);
    if (l == 0) continue;
    Word c = cyclic_canonical(Word{l, l});
    if (seen.insert(c).second) out.relators.push_back(c);
  }
  return out;
}

Word substitute(const Word& w, int gen, const Word& value) {
  Word out;
  out.reserve(w.size() + value.size());
  Word inv = inverse(value);
  for (int x : w) {
    if (std::abs(x) - 1 == gen) {
      const Word& v = x > 0 ? value : inv;
      out.insert(out.end(), v.begin(), v.end());
    } else {
      out.push_back(x);
    }
  }
  return free_reduce(out);
}

}  // namespace

SimplifiedGroup SimplifiedGroup::simplify(int num_generators, const std::vector<Word>& relators) {
  WordList list;
  for (const auto& w : relators) list.push(w);
  return simplify(num_generators, list);
}

SimplifiedGroup SimplifiedGroup::simplify(int num_generators, const WordList& relators) {
  Phase1Result p1 = collapse_phase(num_generators, relators);
  const int k1 = p1.num_generators;
  std::vector<Word> rels = std::move(p1.relators);
  std::vector<char> alive(k1, 1);
  std::vector<std::optional<Word>> eliminated(k1);

  // Eliminate a generator occurring exactly once in some relator, shortest
  // relator first, until none remains.
  const std::size_t kMaxSubstitution = 64;
  for (;;) {
    std::vector<std::size_t> order(rels.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rels[a].size() < rels[b].size(); });
    bool done = true;
    for (std::size_t idx : order) {
      const Word& r = rels[idx];
      if (r.size() > kMaxSubstitution) break;
      std::unordered_map<int, int> count;
      for (int x : r) ++count[std::abs(x) - 1];
      int gen = -1;
      for (int x : r)
        if (count[std::abs(x) - 1] == 1) {
          gen = std::abs(x) - 1;
          break;
        }
      if (gen < 0) continue;
      // Rotate so gen leads: r = gen^e * w, hence gen = w^-1 when e = 1.
      Word rot = r;
      auto it = std::find_if(rot.begin(), rot.end(), [&](int x) { return std::abs(x) - 1 == gen; });
      std::rotate(rot.begin(), it, rot.end());
      int e = rot[0] > 0 ? 1 : -1;
      Word rest(rot.begin() + 1, rot.end());
      Word value = e > 0 ? inverse(rest) : rest;
      eliminated[gen] = value;
      alive[gen] = 0;
      std::vector<Word> next;
      std::set<Word> seen;
      for (std::size_t j = 0; j < rels.size(); ++j) {
        if (j == idx) continue;
        Word w = cyclic_reduce(substitute(rels[j], gen, value));
        if (w.empty()) continue;
        Word c = cyclic_canonical(w);
        if (seen.insert(c).second) next.push_back(c);
      }
      rels = std::move(next);
      done = false;
      break;
    }
    if (done) break;
  }

  SimplifiedGroup out;
  std::vector<int> renumber(k1, -1);
  for (int g = 0; g < k1; ++g)
    if (alive[g]) renumber[g] = out.num_generators_++;
  auto rename = [&](const Word& w) {
    Word o;
    o.reserve(w.size());
    for (int x : w) {
      int id = renumber[std::abs(x) - 1];
      o.push_back(x > 0 ? id + 1 : -(id + 1));
    }
    return o;
  };
  // Expansion of phase-1 generators into surviving generators, memoized.
  std::vector<std::optional<Word>> expanded(k1);
  std::vector<char> busy(k1, 0);
  auto expand = [&](auto&& self, int g) -> const Word& {
    if (expanded[g]) return *expanded[g];
    if (busy[g]) throw std::logic_error("cyclic elimination");
    busy[g] = 1;
    Word w;
    if (alive[g]) {
      w = Word{renumber[g] + 1};
    } else {
      for (int x : *eliminated[g]) {
        Word sub = self(self, std::abs(x) - 1);
        if (x < 0) sub = inverse(sub);
        w.insert(w.end(), sub.begin(), sub.end());
      }
      w = free_reduce(w);
    }
    busy[g] = 0;
    expanded[g] = std::move(w);
    return *expanded[g];
  };
  for (int g = 0; g < k1; ++g) expand(expand, g);
  out.image_.resize(num_generators);
  for (int g = 0; g < num_generators; ++g) {
    int l = p1.image[g];
    if (l == 0) continue;
    Word w = *expanded[std::abs(l) - 1];
    out.image_[g] = l > 0 ? w : inverse(w);
  }
  std::set<Word> seen;
  for (const auto& r : rels) {
    Word c = cyclic_canonical(rename(r));
    if (!c.empty() && seen.insert(c).second) out.relators_.push_back(c);
  }
  std::sort(out.relators_.begin(), out.relators_.end());
  out.finish();
  return out;
}

void SimplifiedGroup::finish() {
  const int k = num_generators_;
  if (k == 0) {
    kind_ = GroupKind::Trivial;
  } else if (relators_.empty()) {
    kind_ = GroupKind::Free;
  } else {
    std::set<Word> have(relators_.begin(), relators_.end());
    bool abelian = true;
    for (int a = 0; a < k && abelian; ++a)
      for (int b = a + 1; b < k; ++b)
        if (!have.count(cyclic_canonical(commutator(a, b)))) {
          abelian = false;
          break;
        }
    kind_ = abelian ? GroupKind::Abelian : GroupKind::Unrecognized;
  }
  IntMatrix M;
  for (const auto& r : relators_) {
    IntRow row(k, 0);
    for (int x : r) row[std::abs(x) - 1] += x > 0 ? 1 : -1;
    if (std::any_of(row.begin(), row.end(), [](std::int64_t v) { return v != 0; })) M.push_back(std::move(row));
  }
  smith_ = smith_normal_form(std::move(M), static_cast<std::size_t>(k));
  kept_.clear();
  // Torsion coordinates first, then free ones.
  for (std::size_t i = 0; i < smith_.diagonal.size(); ++i)
    if (smith_.diagonal[i] > 1) kept_.push_back(i);
  for (std::size_t i = 0; i < smith_.diagonal.size(); ++i)
    if (smith_.diagonal[i] == 0) kept_.push_back(i);
}

Word SimplifiedGroup::map_word(const Word& original) const {
  Word w;
  for (int x : original) {
    const Word& img = image_.at(std::abs(x) - 1);
    if (x > 0) {
      w.insert(w.end(), img.begin(), img.end());
    } else {
      for (auto it = img.rbegin(); it != img.rend(); ++it) w.push_back(-*it);
    }
  }
  return free_reduce(w);
}

std::vector<std::int64_t> SimplifiedGroup::invariant_factors() const {
  std::vector<std::int64_t> f;
  for (std::size_t i : kept_) f.push_back(smith_.diagonal[i]);
  return f;
}

int SimplifiedGroup::rank() const {
  int r = 0;
  for (std::size_t i : kept_) r += smith_.diagonal[i] == 0;
  return r;
}

std::vector<std::int64_t> SimplifiedGroup::torsion() const {
  std::vector<std::int64_t> t;
  for (std::size_t i : kept_)
    if (smith_.diagonal[i] > 1) t.push_back(smith_.diagonal[i]);
  return t;
}

std::vector<std::int64_t> SimplifiedGroup::h1_of_exponents(const std::vector<std::int64_t>& e) const {
  std::vector<std::int64_t> y(kept_.size(), 0);
  for (std::size_t c = 0; c < kept_.size(); ++c) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) s = checked_add(s, checked_mul(e[i], smith_.V[i][kept_[c]]));
    y[c] = s;
  }
  return reduce_h1(std::move(y));
}

std::vector<std::int64_t> SimplifiedGroup::reduce_h1(std::vector<std::int64_t> y) const {
  for (std::size_t c = 0; c < kept_.size(); ++c) {
    std::int64_t d = smith_.diagonal[kept_[c]];
    if (d > 1) y[c] = ((y[c] % d) + d) % d;
  }
  return y;
}

std::vector<std::int64_t> SimplifiedGroup::h1(const Word& simplified) const {
  std::vector<std::int64_t> e(static_cast<std::size_t>(num_generators_), 0);
  for (int x : simplified) e[std::abs(x) - 1] += x > 0 ? 1 : -1;
  return h1_of_exponents(e);
}

std::optional<bool> SimplifiedGroup::is_identity(const Word& w) const {
  switch (kind_) {
    case GroupKind::Trivial:
      return true;
    case GroupKind::Free:
      return free_reduce(w).empty();
    case GroupKind::Abelian: {
      auto c = h1(w);
      return std::all_of(c.begin(), c.end(), [](std::int64_t v) { return v == 0; });
    }
    case GroupKind::Unrecognized: {
      auto c = h1(w);
      if (std::any_of(c.begin(), c.end(), [](std::int64_t v) { return v != 0; })) return false;
      if (free_reduce(w).empty()) return true;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<bool> SimplifiedGroup::conjugate_up_to_inverse(const Word& w1, const Word& w2) const {
  switch (kind_) {
    case GroupKind::Trivial:
      return true;
    case GroupKind::Free:
      return cyclic_canonical(w1) == cyclic_canonical(w2);
    case GroupKind::Abelian: {
      auto a = h1(w1), b = h1(inverse(w2));
      return h1(w1) == h1(w2) || a == b;
    }
    case GroupKind::Unrecognized: {
      auto a = h1(w1);
      if (a != h1(w2) && a != h1(inverse(w2))) return false;
      if (cyclic_canonical(w1) == cyclic_canonical(w2)) return true;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

SimplifiedGroup SimplifiedGroup::quotient(const std::vector<Word>& extra) const {
  std::vector<Word> rels = relators_;
  rels.insert(rels.end(), extra.begin(), extra.end());
  SimplifiedGroup q = simplify(num_generators_, rels);
  SimplifiedGroup out = q;
  out.image_.resize(image_.size());
  for (std::size_t g = 0; g < image_.size(); ++g) out.image_[g] = q.map_word(image_[g]);
  return out;
}

}  // namespace epscov
