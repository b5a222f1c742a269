#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isocirc {

// (n, k, m_1..m_k): the group F_{2n} * Z_{m_1} * ... * Z_{m_k}.
struct GroupSpec {
  int n = 0;
  std::vector<int> m;

  int k() const { return static_cast<int>(m.size()); }
  int free_rank() const { return 2 * n; }

  // Finite cyclic groups and Z_2 * Z_2 carry no isolated circular order of this kind.
  bool excluded() const;
  // Throws std::invalid_argument when the tuple is malformed (k < 1, m_i < 2, n < 0).
  void validate() const;
  // m_1 * ... * m_k
  std::int64_t torsion_product() const;

  // "n,k,m1,...,mk"
  std::string to_string() const;
  static GroupSpec parse(std::string_view text);

  bool operator==(const GroupSpec&) const = default;
};

enum class GenKind : std::uint8_t { E, H };

struct Gen {
  GenKind kind = GenKind::E;
  int index = 1;  // 1-based

  bool operator==(const Gen&) const = default;
  auto operator<=>(const Gen&) const = default;
};

struct Syllable {
  Gen gen;
  std::int64_t exp = 1;

  bool operator==(const Syllable&) const = default;
};

class Group;

// Reduced element of G. Only a Group can build one, so every Word is in normal form:
// adjacent syllables use distinct generators and E(i)-exponents lie in 1..m_i-1.
class Word {
 public:
  Word() = default;

  const std::vector<Syllable>& syllables() const { return syl_; }
  std::size_t size() const { return syl_.size(); }
  bool is_identity() const { return syl_.empty(); }
  std::uint64_t spec_tag() const { return tag_; }

  // The default-constructed identity compares equal to every group's identity.
  bool operator==(const Word& o) const { return syl_ == o.syl_ && (tag_ == o.tag_ || syl_.empty()); }
  bool operator<(const Word& o) const;

 private:
  friend class Group;
  std::vector<Syllable> syl_;
  std::uint64_t tag_ = 0;
};

struct Abelianization {
  std::vector<std::int64_t> free;     // Z^{2n}
  std::vector<std::int64_t> torsion;  // Z_{m_1} x ... x Z_{m_k}, entries in [0, m_i)

  bool operator==(const Abelianization&) const = default;
  bool is_zero() const;
};

class Group {
 public:
  static constexpr std::size_t kDefaultLengthCap = 1'000'000;

  explicit Group(GroupSpec spec, std::size_t length_cap = kDefaultLengthCap);

  const GroupSpec& spec() const { return spec_; }
  int k() const { return spec_.k(); }
  int n() const { return spec_.n; }
  int order_of(int e_index) const { return spec_.m.at(static_cast<std::size_t>(e_index - 1)); }

  Word identity() const;
  Word gen(Gen g, std::int64_t exp = 1) const;
  Word e(int i, std::int64_t exp = 1) const { return gen({GenKind::E, i}, exp); }
  Word h(int j, std::int64_t exp = 1) const { return gen({GenKind::H, j}, exp); }

  Word reduce(std::span<const Syllable> raw) const;
  Word multiply(const Word& a, const Word& b) const;
  Word multiply(std::initializer_list<const Word*> factors) const;
  Word invert(const Word& a) const;
  Word power(const Word& a, std::int64_t p) const;
  // g h g^{-1}
  Word conjugate(const Word& g, const Word& h) const;
  // g h g^{-1} h^{-1}
  Word commutator(const Word& g, const Word& h) const;

  Abelianization abelianize(const Word& g) const;

  // e_1 ... e_k [h_1,h_2] ... [h_{2n-1},h_{2n}]
  Word alpha() const;
  // If w = alpha^j returns j.
  std::optional<std::int64_t> alpha_exponent(const Word& w) const;

  // Letters in the enumeration order e1, e1^-1, e2, ..., h1, h1^-1, ...
  std::vector<Syllable> letters() const;

  // Uniform random normal form with at most max_syllables syllables;
  // H-exponents drawn from [-max_h_exp, max_h_exp] \ {0}.
  Word random_word(std::mt19937_64& rng, int max_syllables, int max_h_exp = 2) const;

  std::string format(const Word& w) const;
  std::string format(Gen g) const;

  void check_same(const Word& w) const;
  std::uint64_t tag() const { return tag_; }

 private:
  void check_gen(Gen g) const;
  std::int64_t normalize_exp(Gen g, std::int64_t e) const;
  void push(std::vector<Syllable>& out, Syllable s) const;
  Word make(std::vector<Syllable> syl) const;

  GroupSpec spec_;
  std::uint64_t tag_;
  std::size_t cap_;
};

// (i_1..i_k) with i_l in {1..m_l}; m_l stands for the trivial exponent.
using CosetTuple = std::vector<int>;

// e_k^{i_k} ... e_1^{i_1}
Word coset_representative(const Group& g, const CosetTuple& tuple);
// All M = m_1...m_k tuples, lexicographic with i_1 varying fastest.
std::vector<CosetTuple> all_coset_tuples(const GroupSpec& spec);

struct SGenerator {
  enum class Kind : std::uint8_t { S1, S2 };
  Kind kind = Kind::S1;
  int t = 0;                // S1: 2..k
  std::vector<int> lambda;  // S1: (u_1..u_t)
  std::vector<int> xi;      // S1: (u_{t+1}..u_k)
  int l = 0;                // S2: 1..2n
  CosetTuple tuple;         // S2
  Word word;
  std::string label;
};

// [e_t^{u_t}, e_{t-1}^{u_{t-1}} ... e_1^{u_1}]
Word commutator_word(const Group& g, int t, std::span<const int> lambda);
// e_k^{u_k} ... e_{t+1}^{u_{t+1}}, xi = (u_{t+1}..u_k)
Word xi_word(const Group& g, int t, std::span<const int> xi);
// e_{t-1}^{u_{t-1}} ... e_1^{u_1}
Word prefix_word(const Group& g, std::span<const int> lambda, int upto);

std::vector<SGenerator> enumerate_S(const Group& g);

// Expected |S| = 1 - M * chi, computed exactly.
std::int64_t expected_S_count(const GroupSpec& spec);

struct SLetter {
  std::uint32_t index = 0;
  int sign = 1;  // +1 or -1

  bool operator==(const SLetter&) const = default;
};
using SWord = std::vector<SLetter>;

SWord free_reduce(SWord w);
SWord invert(const SWord& w);

struct CosetSplit {
  SWord f;
  CosetTuple tuple;
};

// Free basis S of the finite-index subgroup F together with coset rewriting.
class SBasis {
 public:
  explicit SBasis(const Group& g);

  const Group& group() const { return group_; }
  const std::vector<SGenerator>& generators() const { return gens_; }
  std::size_t size() const { return gens_.size(); }

  Word expand(const SWord& f) const;
  std::string format(const SWord& f) const;

  // (f, c) with expand(f) * g = e_k^{i_k} ... e_1^{i_1}; f freely reduced.
  CosetSplit sort_to_coset(const Word& g) const;

  std::optional<std::uint32_t> find_s1(int t, const std::vector<int>& lambda,
                                       const std::vector<int>& xi) const;
  std::optional<std::uint32_t> find_s2(int l, const CosetTuple& tuple) const;

 private:
  Group group_;
  std::vector<SGenerator> gens_;
  std::map<std::vector<int>, std::uint32_t> lookup_;
};

}  // namespace isocirc
