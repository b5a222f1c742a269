#include "isocirc/words.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace isocirc {

bool GroupSpec::excluded() const {
  if (n == 0 && k() == 1) return true;
  if (n == 0 && k() == 2 && m[0] == 2 && m[1] == 2) return true;
  return false;
}

void GroupSpec::validate() const {
  if (n < 0) throw std::invalid_argument("spec: n must be non-negative");
  if (m.empty()) throw std::invalid_argument("spec: k must be at least 1");
  for (int mi : m)
    if (mi < 2) throw std::invalid_argument("spec: every m_i must be at least 2");
}

std::int64_t GroupSpec::torsion_product() const {
  std::int64_t p = 1;
  for (int mi : m) p *= mi;
  return p;
}

std::string GroupSpec::to_string() const {
  std::string s = std::to_string(n) + "," + std::to_string(k());
  for (int mi : m) s += "," + std::to_string(mi);
  return s;
}

GroupSpec GroupSpec::parse(std::string_view text) {
  std::vector<long> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string_view::npos) next = text.size();
    std::string_view tok = text.substr(pos, next - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      throw std::invalid_argument("spec: expected integers n,k,m1,...,mk, got '" + std::string(text) + "'");
    vals.push_back(v);
    pos = next + 1;
  }
  if (vals.size() < 2) throw std::invalid_argument("spec: expected n,k,m1,...,mk");
  GroupSpec spec;
  spec.n = static_cast<int>(vals[0]);
  if (vals[1] < 0 || static_cast<std::size_t>(vals[1]) + 2 != vals.size())
    throw std::invalid_argument("spec: k does not match the number of orders given");
  for (std::size_t i = 2; i < vals.size(); ++i) spec.m.push_back(static_cast<int>(vals[i]));
  spec.validate();
  return spec;
}

bool Word::operator<(const Word& o) const {
  if (syl_.size() != o.syl_.size()) return syl_.size() < o.syl_.size();
  for (std::size_t i = 0; i < syl_.size(); ++i) {
    const auto& a = syl_[i];
    const auto& b = o.syl_[i];
    if (a.gen != b.gen) return a.gen < b.gen;
    if (a.exp != b.exp) return a.exp < b.exp;
  }
  return false;
}

bool Abelianization::is_zero() const {
  return std::all_of(free.begin(), free.end(), [](auto v) { return v == 0; }) &&
         std::all_of(torsion.begin(), torsion.end(), [](auto v) { return v == 0; });
}

namespace {

std::uint64_t spec_hash(const GroupSpec& spec) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(spec.n));
  mix(spec.m.size());
  for (int mi : spec.m) mix(static_cast<std::uint64_t>(mi));
  return h == 0 ? 1 : h;
}

}  // namespace

Group::Group(GroupSpec spec, std::size_t length_cap)
    : spec_(std::move(spec)), tag_(spec_hash(spec_)), cap_(length_cap) {
  spec_.validate();
}

void Group::check_gen(Gen g) const {
  int hi = g.kind == GenKind::E ? k() : 2 * n();
  if (g.index < 1 || g.index > hi)
    throw std::out_of_range("generator " + format(g) + " out of range for spec " + spec_.to_string());
}

void Group::check_same(const Word& w) const {
  if (w.tag_ == 0 && w.syl_.empty()) return;
  if (w.tag_ != tag_) throw std::invalid_argument("word belongs to a different group spec");
}

std::int64_t Group::normalize_exp(Gen g, std::int64_t e) const {
  if (g.kind == GenKind::H) return e;
  std::int64_t mi = order_of(g.index);
  std::int64_t r = e % mi;
  return r < 0 ? r + mi : r;
}

void Group::push(std::vector<Syllable>& out, Syllable s) const {
  s.exp = normalize_exp(s.gen, s.exp);
  if (s.exp == 0) return;
  if (!out.empty() && out.back().gen == s.gen) {
    std::int64_t sum = 0;
    if (__builtin_add_overflow(out.back().exp, s.exp, &sum))
      throw std::overflow_error("exponent overflow during reduction");
    sum = normalize_exp(s.gen, sum);
    if (sum == 0)
      out.pop_back();
    else
      out.back().exp = sum;
    return;
  }
  if (out.size() >= cap_) throw std::length_error("word exceeds the syllable length cap");
  out.push_back(s);
}

Word Group::make(std::vector<Syllable> syl) const {
  Word w;
  w.syl_ = std::move(syl);
  w.tag_ = tag_;
  return w;
}

Word Group::identity() const { return make({}); }

Word Group::gen(Gen g, std::int64_t exp) const {
  check_gen(g);
  std::vector<Syllable> out;
  push(out, {g, exp});
  return make(std::move(out));
}

Word Group::reduce(std::span<const Syllable> raw) const {
  std::vector<Syllable> out;
  out.reserve(raw.size());
  for (const auto& s : raw) {
    check_gen(s.gen);
    push(out, s);
  }
  return make(std::move(out));
}

Word Group::multiply(const Word& a, const Word& b) const {
  check_same(a);
  check_same(b);
  std::vector<Syllable> out = a.syl_;
  for (const auto& s : b.syl_) push(out, s);
  return make(std::move(out));
}

Word Group::multiply(std::initializer_list<const Word*> factors) const {
  std::vector<Syllable> out;
  for (const Word* w : factors) {
    check_same(*w);
    for (const auto& s : w->syl_) push(out, s);
  }
  return make(std::move(out));
}

Word Group::invert(const Word& a) const {
  check_same(a);
  std::vector<Syllable> out;
  out.reserve(a.size());
  for (auto it = a.syl_.rbegin(); it != a.syl_.rend(); ++it) push(out, {it->gen, -it->exp});
  return make(std::move(out));
}

Word Group::power(const Word& a, std::int64_t p) const {
  Word base = p < 0 ? invert(a) : a;
  std::int64_t reps = p < 0 ? -p : p;
  std::vector<Syllable> out;
  for (std::int64_t r = 0; r < reps; ++r)
    for (const auto& s : base.syl_) push(out, s);
  return make(std::move(out));
}

Word Group::conjugate(const Word& g, const Word& h) const {
  Word gi = invert(g);
  return multiply({&g, &h, &gi});
}

Word Group::commutator(const Word& g, const Word& h) const {
  Word gi = invert(g);
  Word hi = invert(h);
  return multiply({&g, &h, &gi, &hi});
}

Abelianization Group::abelianize(const Word& g) const {
  check_same(g);
  Abelianization a;
  a.free.assign(static_cast<std::size_t>(2 * n()), 0);
  a.torsion.assign(static_cast<std::size_t>(k()), 0);
  for (const auto& s : g.syl_) {
    auto idx = static_cast<std::size_t>(s.gen.index - 1);
    if (s.gen.kind == GenKind::H) {
      a.free[idx] += s.exp;
    } else {
      std::int64_t mi = order_of(s.gen.index);
      a.torsion[idx] = ((a.torsion[idx] + s.exp) % mi + mi) % mi;
    }
  }
  return a;
}

Word Group::alpha() const {
  std::vector<Syllable> raw;
  for (int i = 1; i <= k(); ++i) raw.push_back({{GenKind::E, i}, 1});
  for (int p = 1; p <= n(); ++p) {
    Gen a{GenKind::H, 2 * p - 1};
    Gen b{GenKind::H, 2 * p};
    raw.push_back({a, 1});
    raw.push_back({b, 1});
    raw.push_back({a, -1});
    raw.push_back({b, -1});
  }
  return reduce(raw);
}

std::optional<std::int64_t> Group::alpha_exponent(const Word& w) const {
  check_same(w);
  if (w.is_identity()) return 0;
  Word a = alpha();
  if (w.size() % a.size() != 0) return std::nullopt;
  auto j = static_cast<std::int64_t>(w.size() / a.size());
  if (power(a, j) == w) return j;
  if (power(a, -j) == w) return -j;
  return std::nullopt;
}

std::vector<Syllable> Group::letters() const {
  std::vector<Syllable> out;
  for (int i = 1; i <= k(); ++i) {
    out.push_back({{GenKind::E, i}, 1});
    out.push_back({{GenKind::E, i}, -1});
  }
  for (int j = 1; j <= 2 * n(); ++j) {
    out.push_back({{GenKind::H, j}, 1});
    out.push_back({{GenKind::H, j}, -1});
  }
  return out;
}

Word Group::random_word(std::mt19937_64& rng, int max_syllables, int max_h_exp) const {
  const int gens = k() + 2 * n();
  std::uniform_int_distribution<int> len_dist(0, max_syllables);
  int len = len_dist(rng);
  std::vector<Syllable> out;
  int prev = -1;
  for (int s = 0; s < len; ++s) {
    if (gens == 1 && prev >= 0) break;
    int choice = 0;
    if (prev < 0) {
      choice = std::uniform_int_distribution<int>(0, gens - 1)(rng);
    } else {
      choice = std::uniform_int_distribution<int>(0, gens - 2)(rng);
      if (choice >= prev) ++choice;
    }
    prev = choice;
    if (choice < k()) {
      int mi = spec_.m[static_cast<std::size_t>(choice)];
      std::int64_t e = std::uniform_int_distribution<int>(1, mi - 1)(rng);
      out.push_back({{GenKind::E, choice + 1}, e});
    } else {
      std::int64_t e = std::uniform_int_distribution<int>(1, 2 * max_h_exp)(rng);
      e = e <= max_h_exp ? e : max_h_exp - e;
      out.push_back({{GenKind::H, choice - k() + 1}, e});
    }
  }
  return reduce(out);
}

std::string Group::format(Gen g) const {
  return (g.kind == GenKind::E ? "e" : "h") + std::to_string(g.index);
}

std::string Group::format(const Word& w) const {
  if (w.is_identity()) return "1";
  std::string out;
  for (const auto& s : w.syl_) {
    if (!out.empty()) out += ' ';
    out += format(s.gen);
    if (s.exp != 1) out += "^" + std::to_string(s.exp);
  }
  return out;
}

Word coset_representative(const Group& g, const CosetTuple& tuple) {
  std::vector<Syllable> raw;
  for (int l = g.k(); l >= 1; --l) raw.push_back({{GenKind::E, l}, tuple.at(static_cast<std::size_t>(l - 1))});
  return g.reduce(raw);
}

namespace {

// Mixed-radix enumeration over [r_1] x ... x [r_j] with the first coordinate varying fastest.
std::vector<std::vector<int>> box(const std::vector<int>& radices) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(radices.size(), 1);
  if (std::any_of(radices.begin(), radices.end(), [](int r) { return r < 1; })) return out;
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < cur.size() && cur[i] == radices[i]) cur[i++] = 1;
    if (i == cur.size()) break;
    ++cur[i];
  }
  return out;
}

}  // namespace

std::vector<CosetTuple> all_coset_tuples(const GroupSpec& spec) { return box(spec.m); }

Word prefix_word(const Group& g, std::span<const int> lambda, int upto) {
  std::vector<Syllable> raw;
  for (int l = upto; l >= 1; --l) raw.push_back({{GenKind::E, l}, lambda[static_cast<std::size_t>(l - 1)]});
  return g.reduce(raw);
}

Word commutator_word(const Group& g, int t, std::span<const int> lambda) {
  Word a = g.e(t, lambda[static_cast<std::size_t>(t - 1)]);
  Word b = prefix_word(g, lambda, t - 1);
  return g.commutator(a, b);
}

Word xi_word(const Group& g, int t, std::span<const int> xi) {
  std::vector<Syllable> raw;
  for (int l = g.k(); l > t; --l) raw.push_back({{GenKind::E, l}, xi[static_cast<std::size_t>(l - t - 1)]});
  return g.reduce(raw);
}

namespace {

std::vector<int> s1_key(int t, const std::vector<int>& lambda, const std::vector<int>& xi) {
  std::vector<int> key{1, t};
  key.insert(key.end(), lambda.begin(), lambda.end());
  key.push_back(-1);
  key.insert(key.end(), xi.begin(), xi.end());
  return key;
}

std::vector<int> s2_key(int l, const CosetTuple& tuple) {
  std::vector<int> key{2, l};
  key.insert(key.end(), tuple.begin(), tuple.end());
  return key;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::vector<SGenerator> enumerate_S(const Group& g) {
  const auto& m = g.spec().m;
  const int k = g.k();
  std::vector<SGenerator> out;
  for (int t = 2; t <= k; ++t) {
    std::vector<int> prefix_radices(m.begin(), m.begin() + (t - 1));
    std::vector<int> xi_radices(m.begin() + t, m.end());
    for (const auto& prefix : box(prefix_radices)) {
      bool all_max = true;
      for (int l = 0; l < t - 1; ++l) all_max = all_max && prefix[static_cast<std::size_t>(l)] == m[static_cast<std::size_t>(l)];
      if (all_max) continue;
      for (int ut = 1; ut <= m[static_cast<std::size_t>(t - 1)] - 1; ++ut) {
        std::vector<int> lambda = prefix;
        lambda.push_back(ut);
        for (const auto& xi : box(xi_radices)) {
          SGenerator s;
          s.kind = SGenerator::Kind::S1;
          s.t = t;
          s.lambda = lambda;
          s.xi = xi;
          s.word = g.conjugate(xi_word(g, t, xi), commutator_word(g, t, lambda));
          s.label = "f[" + std::to_string(t) + ";" + join(lambda) + "|" + join(xi) + "]";
          out.push_back(std::move(s));
        }
      }
    }
  }
  for (int l = 1; l <= 2 * g.n(); ++l) {
    for (const auto& tuple : all_coset_tuples(g.spec())) {
      SGenerator s;
      s.kind = SGenerator::Kind::S2;
      s.l = l;
      s.tuple = tuple;
      s.word = g.conjugate(coset_representative(g, tuple), g.h(l));
      s.label = "h[" + std::to_string(l) + ";" + join(tuple) + "]";
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::int64_t expected_S_count(const GroupSpec& spec) {
  const std::int64_t M = spec.torsion_product();
  std::int64_t m_chi = M * (1 - 2 * spec.n - spec.k());
  for (int mi : spec.m) m_chi += M / mi;
  return 1 - m_chi;
}

SWord free_reduce(SWord w) {
  SWord out;
  out.reserve(w.size());
  for (const auto& l : w) {
    if (!out.empty() && out.back().index == l.index && out.back().sign == -l.sign)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

SWord invert(const SWord& w) {
  SWord out(w.rbegin(), w.rend());
  for (auto& l : out) l.sign = -l.sign;
  return out;
}

SBasis::SBasis(const Group& g) : group_(g), gens_(enumerate_S(g)) {
  for (std::uint32_t i = 0; i < gens_.size(); ++i) {
    const auto& s = gens_[i];
    lookup_[s.kind == SGenerator::Kind::S1 ? s1_key(s.t, s.lambda, s.xi) : s2_key(s.l, s.tuple)] = i;
  }
}

std::optional<std::uint32_t> SBasis::find_s1(int t, const std::vector<int>& lambda,
                                             const std::vector<int>& xi) const {
  auto it = lookup_.find(s1_key(t, lambda, xi));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> SBasis::find_s2(int l, const CosetTuple& tuple) const {
  auto it = lookup_.find(s2_key(l, tuple));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Word SBasis::expand(const SWord& f) const {
  Word out = group_.identity();
  for (const auto& l : f) {
    const Word& w = gens_.at(l.index).word;
    out = group_.multiply(out, l.sign > 0 ? w : group_.invert(w));
  }
  return out;
}

std::string SBasis::format(const SWord& f) const {
  if (f.empty()) return "1";
  std::string out;
  for (const auto& l : f) {
    if (!out.empty()) out += ' ';
    out += gens_.at(l.index).label;
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

CosetSplit SBasis::sort_to_coset(const Word& g) const {
  group_.check_same(g);
  const auto& m = group_.spec().m;
  CosetTuple cur(m.begin(), m.end());
  // Letters are prepended to f; collect them in reverse.
  SWord rev;

  auto step_e = [&](int t, int dir) {
    const auto ti = static_cast<std::size_t>(t - 1);
    const int mt = m[ti];
    const int old_u = cur[ti];
    const int new_u = ((old_u - 1 + dir) % mt + mt) % mt + 1;
    bool prefix_trivial = true;
    for (int l = 0; l < t - 1; ++l) prefix_trivial = prefix_trivial && cur[static_cast<std::size_t>(l)] == m[static_cast<std::size_t>(l)];
    if (t >= 2 && !prefix_trivial) {
      std::vector<int> xi(cur.begin() + t, cur.end());
      std::vector<int> lambda(cur.begin(), cur.begin() + (t - 1));
      // gamma' = s(u_new) * s(u_old)^{-1}; prepend in that order, so push reversed.
      if (old_u != mt) {
        lambda.push_back(old_u);
        rev.push_back({*find_s1(t, lambda, xi), -1});
        lambda.pop_back();
      }
      if (new_u != mt) {
        lambda.push_back(new_u);
        rev.push_back({*find_s1(t, lambda, xi), +1});
      }
    }
    cur[ti] = new_u;
  };

  for (const auto& s : g.syllables()) {
    if (s.gen.kind == GenKind::E) {
      for (std::int64_t r = 0; r < s.exp; ++r) step_e(s.gen.index, +1);
    } else {
      const int sign = s.exp > 0 ? 1 : -1;
      const std::int64_t reps = s.exp > 0 ? s.exp : -s.exp;
      const std::uint32_t idx = *find_s2(s.gen.index, cur);
      for (std::int64_t r = 0; r < reps; ++r) rev.push_back({idx, -sign});
    }
  }
  CosetSplit out;
  out.f = free_reduce(SWord(rev.rbegin(), rev.rend()));
  out.tuple = cur;
  return out;
}

}  // namespace isocirc
