#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace snakelab {

/// Group elements are dense ids 0..order-1; id 0 is always the identity.
using Element = std::uint32_t;

/// A permutation of {0,...,k-1} in one-line notation: p[x] is the image of x.
using Permutation = std::vector<std::uint32_t>;

/// Composition under the left-action convention: (a*b)(x) = a(b(x)),
/// i.e. b acts first. With this convention (0 1)*(1 2) = (0 1 2).
Permutation compose(const Permutation& a, const Permutation& b);
Permutation invert_permutation(const Permutation& p);

/// Parse cycle notation, e.g. "(0 1)(2 3)" over domain {0,...,degree-1}.
/// Fixed points may be omitted; "()" or an empty string is the identity.
Permutation parse_cycles(std::string_view text, std::uint32_t degree);

/// Format as cycle notation with each cycle rotated to start at its smallest
/// member and cycles ordered by that member. Identity formats as "()".
std::string format_cycles(const Permutation& p);

/// Symbolic description of a finite group; round-trips through text.
/// Grammar:
///   cyclic(<n>)                         integers mod n
///   power(<spec>,<d>)                   d-fold direct power
///   symmetric(<k>)                      all permutations of k points
///   closure(<k>: <perm>; <perm>; ...)   subgroup of S_k generated by perms
struct GroupSpec {
  enum class Kind { Cyclic, Power, Symmetric, Closure };

  Kind kind = Kind::Cyclic;
  std::uint64_t n = 0;                  ///< cyclic modulus / symmetric degree / power arity
  std::shared_ptr<GroupSpec> base;      ///< power: base group spec
  std::uint32_t degree = 0;             ///< closure: permutation domain size
  std::vector<Permutation> generators;  ///< closure: generating permutations

  static GroupSpec cyclic(std::uint64_t n);
  static GroupSpec power(GroupSpec base, std::uint64_t arity);
  static GroupSpec symmetric(std::uint64_t k);
  static GroupSpec closure(std::uint32_t degree, std::vector<Permutation> gens);

  static GroupSpec parse(std::string_view text);
  std::string to_string() const;
};

/// A finite group with elements addressed by dense stable ids.
///
/// Representation depends on the GroupSpec kind: cyclic and power groups use direct
/// arithmetic on ids (mixed radix, coordinate 0 least significant), while
/// symmetric/closure groups store the explicit permutations discovered by
/// breadth-first closure from the identity (sorted generators, so ids are
/// reproducible across runs). Closure groups of order <= kTableCap also
/// materialize the full multiplication table.
class FiniteGroup {
public:
  static constexpr std::uint64_t kDefaultOrderCap = 1u << 20;
  static constexpr std::uint64_t kTableCap = 4096;

  /// Builds the group described by `spec`. Throws ValidationError for
  /// malformed specs (e.g. empty generator list) and SizeLimitError when the
  /// group order would exceed `order_cap`.
  static std::shared_ptr<const FiniteGroup> build(const GroupSpec& spec,
                                                  std::uint64_t order_cap = kDefaultOrderCap);

  std::uint64_t order() const { return order_; }
  Element identity() const { return 0; }

  Element multiply(Element a, Element b) const;
  Element invert(Element a) const;

  const GroupSpec& spec() const { return spec_; }

  /// True for symmetric/closure groups, where elements carry permutations.
  bool has_permutations() const { return kind_ == Kind::Perms; }

  /// Permutation realization of an element (permutation-backed groups only).
  const Permutation& permutation_of(Element a) const;

  /// Id of a permutation if it belongs to the group (permutation-backed only).
  std::optional<Element> find_permutation(const Permutation& p) const;

  /// The permutation a -> a*g of element ids (right translation by g).
  std::vector<Element> right_translation(Element g) const;

  /// The permutation v -> g*v of element ids (left translation by g).
  std::vector<Element> left_translation(Element g) const;

private:
  enum class Kind { Cyclic, Power, Perms };

  FiniteGroup() = default;

  Kind kind_ = Kind::Cyclic;
  std::uint64_t order_ = 0;
  GroupSpec spec_;

  // Cyclic: order_ is the modulus.

  // Power: base group and precomputed radix powers base^i.
  std::shared_ptr<const FiniteGroup> base_;
  std::uint32_t arity_ = 0;
  std::vector<std::uint64_t> radix_;

  // Perms: elements in discovery order plus lookup index; optional table.
  struct PermHash {
    std::size_t operator()(const Permutation& p) const {
      std::size_t h = 1469598103934665603ull;
      for (std::uint32_t x : p) {
        h ^= x;
        h *= 1099511628211ull;
      }
      return h;
    }
  };
  std::vector<Permutation> elements_;
  std::unordered_map<Permutation, Element, PermHash> index_;
  std::vector<Element> inverse_;
  std::vector<Element> table_;  // order*order entries when order <= kTableCap

  static std::shared_ptr<FiniteGroup> build_perm_closure(GroupSpec spec, std::uint32_t degree,
                                                         std::vector<Permutation> gens,
                                                         std::uint64_t order_cap);
};

}  // namespace snakelab
