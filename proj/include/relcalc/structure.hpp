#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relcalc/errors.hpp"

namespace relcalc {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;
/// Total map between universes, indexed by source id.
using ElementMap = std::vector<Element>;
/// Blocks ordered by smallest member, members ascending.
using Partition = std::vector<std::vector<Element>>;
/// Relation symbol -> arity.
using Signature = std::map<std::string, std::size_t>;

/// A finitary relation stored as flat, lexicographically sorted, duplicate-free rows.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t arity);
  /// Takes `flat` as concatenated rows; sorts and removes duplicates.
  Relation(std::size_t arity, std::vector<Element> flat);
  Relation(std::size_t arity, const std::vector<Tuple>& rows);

  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return arity_ == 0 ? 0 : data_.size() / arity_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const Element> operator[](std::size_t i) const {
    return {data_.data() + i * arity_, arity_};
  }
  bool contains(std::span<const Element> row) const;
  /// Index range [first, last) of rows whose first entries equal `prefix`.
  std::pair<std::size_t, std::size_t> prefix_range(std::span<const Element> prefix) const;

  const std::vector<Element>& data() const noexcept { return data_; }
  std::vector<Tuple> rows() const;

  bool operator==(const Relation&) const = default;

 private:
  std::size_t arity_ = 0;
  std::vector<Element> data_;
};

/// Finite universe 0..n-1 with string labels plus named relations. Every
/// instance satisfies the structural invariants: ids in range, one arity per
/// symbol, no duplicate tuples. Untrusted input goes through RawStructure.
class RelationalStructure {
 public:
  RelationalStructure() = default;
  /// Labels default to the decimal ids.
  explicit RelationalStructure(std::size_t size);
  explicit RelationalStructure(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(Element e) const { return labels_.at(e); }
  std::optional<Element> find_label(const std::string& label) const;

  /// Throws InvalidStructure on an out-of-range id or a symbol already present.
  void add_relation(const std::string& symbol, Relation rel);

  const std::map<std::string, Relation>& relations() const noexcept { return relations_; }
  const Relation& relation(const std::string& symbol) const;
  Signature signature() const;
  /// The single relation of a one-relation structure; throws otherwise.
  const Relation& only_relation() const;
  const std::string& only_symbol() const;

  bool operator==(const RelationalStructure&) const = default;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, Relation> relations_;
};

/// Unchecked structure as read from a file.
struct RawStructure {
  struct RawRelation {
    std::size_t arity = 0;
    std::vector<Tuple> tuples;
  };
  std::vector<std::string> universe;
  std::map<std::string, RawRelation> relations;
};

struct ValidationResult {
  bool ok = true;
  std::string error;  // names the first violated invariant and the offending tuple
};

ValidationResult validate(const RawStructure& raw);
/// validate + convert; throws InvalidStructure carrying the validation message.
RelationalStructure build_structure(const RawStructure& raw);
RawStructure to_raw(const RelationalStructure& s);

struct Homomorphism {
  std::shared_ptr<const RelationalStructure> source;
  std::shared_ptr<const RelationalStructure> target;
  ElementMap map;
};

struct ComponentDecomposition {
  Partition blocks;
  std::vector<RelationalStructure> induced;
  /// element -> index of its block
  std::vector<std::size_t> block_of;
};

/// 𝕊: {0,1} with the graph of binary meet.
RelationalStructure semilattice_structure(const std::string& symbol = "R");
/// 𝕀: one element with the constant triple.
RelationalStructure point_structure(const std::string& symbol = "R");

bool is_reflexive(const RelationalStructure& s);

/// Relations R[i,j] (1-based coordinates) for every relation R and every pair i<j.
RelationalStructure binary_projection(const RelationalStructure& s);

ComponentDecomposition connected_components(const RelationalStructure& s);
bool is_connected(const RelationalStructure& s);

/// Product ids are lexicographic ranks of coordinate sequences (first factor most significant).
RelationalStructure product(std::span<const RelationalStructure> factors, const Limits& limits = {});
RelationalStructure power(const RelationalStructure& s, std::size_t n, const Limits& limits = {});
RelationalStructure disjoint_union(std::span<const RelationalStructure> parts);

/// Restricts to `subset`; new ids are ranks within the sorted subset.
RelationalStructure induced_substructure(const RelationalStructure& s, std::span<const Element> subset);

/// Universes are matched by label.
bool is_weak_substructure(const RelationalStructure& h, const RelationalStructure& g);

/// Universe = image of `map` in ascending target-id order, carrying target labels.
RelationalStructure image_structure(const RelationalStructure& source, const RelationalStructure& target,
                                    const ElementMap& map);
RelationalStructure image_structure(const Homomorphism& phi);

Partition kernel(const ElementMap& map);
Partition kernel(const Homomorphism& phi);

/// Bijection that is a homomorphism in both directions, or nullopt.
std::optional<ElementMap> find_isomorphism(const RelationalStructure& a, const RelationalStructure& b);

/// Throws SignatureMismatch naming the first difference.
void require_same_signature(const RelationalStructure& a, const RelationalStructure& b);

/// Mixed-radix rank of `coords` with the given radices, first coordinate most significant.
std::size_t lex_rank(std::span<const Element> coords, std::span<const std::size_t> radices);
void lex_unrank(std::size_t rank, std::span<const std::size_t> radices, std::span<Element> out);

}  // namespace relcalc
