#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <vector>

#include "featred/graph_model.hpp"
#include "featred/rng.hpp"

namespace featred {

/// Subset of a universe {0, ..., N-1} with N <= 64.
class ElementSet {
 public:
  constexpr ElementSet() = default;
  constexpr explicit ElementSet(std::uint64_t bits) : bits_(bits) {}
  ElementSet(std::initializer_list<int> elements) {
    for (int x : elements) bits_ |= std::uint64_t{1} << x;
  }

  static constexpr ElementSet full(int n) {
    return ElementSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr int size() const noexcept { return std::popcount(bits_); }
  constexpr bool contains(int x) const noexcept { return (bits_ >> x) & 1U; }
  constexpr ElementSet with(int x) const noexcept { return ElementSet(bits_ | (std::uint64_t{1} << x)); }
  constexpr ElementSet without(int x) const noexcept { return ElementSet(bits_ & ~(std::uint64_t{1} << x)); }
  constexpr bool is_subset_of(ElementSet o) const noexcept { return (bits_ & ~o.bits_) == 0; }
  constexpr ElementSet minus(ElementSet o) const noexcept { return ElementSet(bits_ & ~o.bits_); }

  friend constexpr ElementSet operator&(ElementSet a, ElementSet b) noexcept { return ElementSet(a.bits_ & b.bits_); }
  friend constexpr ElementSet operator|(ElementSet a, ElementSet b) noexcept { return ElementSet(a.bits_ | b.bits_); }
  friend constexpr bool operator==(ElementSet, ElementSet) = default;

  template <typename F>
  void for_each(F&& fn) const {
    for (std::uint64_t b = bits_; b; b &= b - 1) fn(std::countr_zero(b));
  }
  std::vector<int> to_vector() const {
    std::vector<int> out;
    for_each([&](int x) { out.push_back(x); });
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Exact non-negative rational num/den.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(Fraction a, Fraction b) noexcept { return a.num * b.den == b.num * a.den; }
  friend bool operator<(Fraction a, Fraction b) noexcept { return a.num * b.den < b.num * a.den; }
  friend bool operator>(Fraction a, Fraction b) noexcept { return b < a; }
  friend bool operator<=(Fraction a, Fraction b) noexcept { return !(b < a); }
  friend bool operator>=(Fraction a, Fraction b) noexcept { return !(a < b); }
};

/// A finite universe with a goodness function f, a constraint g : U x 2^U -> E and an
/// accepting subset B of E.
///
/// f is queried through good(); the empty set always maps to the whole universe. Systems
/// built from graphs cache f({v}) and answer f(I) as the intersection over I, which is
/// what the intersection axiom f(A u B) = f(A) n f(B) licenses.
class GoodnessSystem {
 public:
  using GoodnessFn = std::function<ElementSet(ElementSet)>;
  using ConstraintFn = std::function<int(int, ElementSet)>;

  GoodnessSystem(int n, GoodnessFn f, ConstraintFn g, std::vector<int> values, std::vector<int> accepting);

  /// f0 (vertices not adjacent to S) with g0 (1 iff not adjacent to I), E = {0,1}, B = {1}.
  /// Mutually good B-constrained sets are the stable sets of the graph.
  static GoodnessSystem stable_sets(const Graph& graph);

  /// f0 over the collinearity edges with the conflict constraint
  /// g(x, I) = 1 iff x lies in the union of T(v) u {v} over v in I, E = {0,1}, B = {0}.
  /// Mutually good B-constrained sets are the nice sets of the instance.
  static GoodnessSystem nice_sets(const Instance& inst);

  int size() const noexcept { return n_; }
  ElementSet universe() const noexcept { return ElementSet::full(n_); }

  ElementSet good(ElementSet s) const;
  ElementSet good_single(int x) const { return singles_[static_cast<std::size_t>(x)]; }
  int constraint(int x, ElementSet s) const { return g_(x, s); }
  bool accepts(int value) const;
  const std::vector<int>& values() const noexcept { return values_; }
  const std::vector<int>& accepting() const noexcept { return accepting_; }

 private:
  GoodnessSystem(int n, std::vector<ElementSet> singles, ConstraintFn g, std::vector<int> values,
                 std::vector<int> accepting);

  int n_;
  GoodnessFn f_;
  ConstraintFn g_;
  std::vector<int> values_;
  std::vector<int> accepting_;
  std::vector<ElementSet> singles_;
  bool intersective_ = false;
};

ElementSet good_set(const GoodnessSystem& sys, ElementSet s);

// Pairwise test: x in f({y}) for all distinct x, y in s.
bool is_mutually_good(const GoodnessSystem& sys, ElementSet s);

// g(y, s \ {y}) in B for every y in s.
bool is_constrained(const GoodnessSystem& sys, ElementSet s);

// {x : g(x, I) not in B}.
ElementSet h_set(const GoodnessSystem& sys, ElementSet i_set);

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

/// p_i and q_i for i = 1..L, from one enumeration of the constrained sets of size <= L.
/// `singleton_fraction` is the fraction of elements y with g(y, {}) in B.
struct FractionTable {
  std::vector<Fraction> p;
  std::vector<Fraction> q;
  bool exact = true;
  Fraction singleton_fraction{1, 1};

  Fraction p_at(int i) const { return p.at(static_cast<std::size_t>(i - 1)); }
  Fraction q_at(int i) const { return q.at(static_cast<std::size_t>(i - 1)); }
  int depth() const noexcept { return static_cast<int>(p.size()); }
};

FractionTable compute_fraction_table(const GoodnessSystem& sys, int max_i,
                                     std::uint64_t budget = kDefaultEnumerationBudget);

// min over B-constrained I with #I <= i of #f(I)/N.
Fraction compute_p(const GoodnessSystem& sys, int i, std::uint64_t budget = kDefaultEnumerationBudget);
// max over B-constrained I with #I <= i of #h(I)/N.
Fraction compute_q(const GoodnessSystem& sys, int i, std::uint64_t budget = kDefaultEnumerationBudget);

enum class FirstFactor {
  // p_1 = 1 and q_1 = 0 unless overridden: prod_{j=2}^{L-1} (p_j - q_j) * (1 - q_1).
  convention,
  // Enumerated p_1, q_1: prod_{j=1}^{L-1} (p_j - q_j) * singleton_fraction.
  definitional,
};

/// Lower bound on the per-attempt probability that L uniform draws form a mutually good
/// B-constrained set. Any non-positive factor makes the bound 0.
double lemma_success_bound(const FractionTable& table, int L, FirstFactor first = FirstFactor::convention,
                           std::optional<double> q1_override = std::nullopt);

/// One attempt: draw L elements uniformly with replacement. Succeeds when the draws are
/// pairwise distinct and form a mutually good B-constrained set.
std::optional<ElementSet> attempt_construct(const GoodnessSystem& sys, int L, Rng& rng);

/// First success among `max_restarts` attempts driven by a single generator seeded with `seed`.
std::optional<ElementSet> randomized_construct(const GoodnessSystem& sys, int L, int max_restarts,
                                               std::uint64_t seed);

/// Number of successful attempts out of `attempts`.
std::uint64_t count_construct_successes(const GoodnessSystem& sys, int L, std::uint64_t attempts,
                                        std::uint64_t seed);

/// Some mutually good B-constrained set of exactly L elements, or nullopt when none exists.
std::optional<ElementSet> brute_force_mutually_good(const GoodnessSystem& sys, int L,
                                                    std::uint64_t budget = kDefaultEnumerationBudget);

struct AxiomViolation {
  int axiom = 0;  // 1: S1 in f(S2) iff S2 in f(S1); 2: f(S1 u S2) = f(S1) n f(S2)
  ElementSet first;
  ElementSet second;
};

struct AxiomReport {
  std::uint64_t pairs_checked = 0;
  std::uint64_t axiom1_violations = 0;
  std::uint64_t axiom2_violations = 0;
  std::vector<AxiomViolation> examples;  // first few violations, in check order

  bool ok() const noexcept { return axiom1_violations == 0 && axiom2_violations == 0; }
};

struct AxiomCheckMode {
  bool exhaustive = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static AxiomCheckMode all() { return {}; }
  static AxiomCheckMode sampled(std::uint64_t count, std::uint64_t seed) { return {false, count, seed}; }
};

/// Exhaustive mode covers every ordered pair of subsets and needs N <= 12.
AxiomReport check_goodness_axioms(const GoodnessSystem& sys, AxiomCheckMode mode = AxiomCheckMode::all());

}  // namespace featred
