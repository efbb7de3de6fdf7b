#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relcalc/errors.hpp"
#include "relcalc/structure.hpp"

namespace relcalc {

struct SearchOptions {
  /// Maximum number of results; 0 means all.
  std::size_t limit = 0;
  /// Drop maps that take a single value. Applied as a filter on complete maps.
  bool nonconstant_only = false;
  /// source id -> forced target id
  std::map<Element, Element> pinned;
  /// Results in lexicographic order of the map. Both engines always honour this;
  /// the flag exists so callers can state the requirement explicitly.
  bool deterministic_order = true;
  /// Only injective maps (used by isomorphism search).
  bool injective = false;
};

/// An n-ary operation on {0..k-1}, tabulated in lexicographic (row-major) input order.
class OperationTable {
 public:
  OperationTable() = default;
  OperationTable(std::size_t arity, std::size_t base_size, std::vector<Element> values);

  template <class Fn>
  static OperationTable from_function(std::size_t arity, std::size_t base_size, Fn&& fn) {
    std::vector<Element> values(table_length(arity, base_size));
    std::vector<Element> args(arity);
    for (std::size_t r = 0; r < values.size(); ++r) {
      unrank_args(r, arity, base_size, args);
      values[r] = fn(std::span<const Element>(args));
    }
    return OperationTable(arity, base_size, std::move(values));
  }

  std::size_t arity() const noexcept { return arity_; }
  std::size_t base_size() const noexcept { return base_size_; }
  const std::vector<Element>& values() const noexcept { return values_; }

  Element operator()(std::span<const Element> args) const;
  Element at_rank(std::size_t rank) const { return values_[rank]; }

  bool is_idempotent() const;
  std::optional<Element> constant_value() const;

  static std::size_t table_length(std::size_t arity, std::size_t base_size);
  static void unrank_args(std::size_t rank, std::size_t arity, std::size_t base_size, std::span<Element> out);

  bool operator==(const OperationTable&) const = default;

 private:
  std::size_t arity_ = 0;
  std::size_t base_size_ = 0;
  std::vector<Element> values_;
};

/// Return false from the visitor to stop the search.
using MapVisitor = std::function<bool(const ElementMap&)>;

/// Reference engine: single-threaded backtracking with forward checking,
/// variables and values both in ascending id order.
void search_homs_serial(const RelationalStructure& g, const RelationalStructure& h, const SearchOptions& opts,
                        const MapVisitor& visit);
std::vector<ElementMap> find_homs_serial(const RelationalStructure& g, const RelationalStructure& h,
                                         const SearchOptions& opts = {});

/// Same contract as find_homs_serial. Branches on the first variable run in
/// parallel and are concatenated in value order, so output is identical.
std::vector<ElementMap> find_homs(const RelationalStructure& g, const RelationalStructure& h,
                                  const SearchOptions& opts = {});
std::size_t count_homs(const RelationalStructure& g, const RelationalStructure& h, const SearchOptions& opts = {});

struct HomCheck {
  bool ok = true;
  std::string symbol;  // first failing relation, when !ok
  Tuple tuple;         // source tuple whose image is missing
  Tuple image;
};

HomCheck is_homomorphism(const RelationalStructure& g, const RelationalStructure& h, const ElementMap& map);
/// Throws VerificationFailure when `map` is not a homomorphism.
Homomorphism make_homomorphism(std::shared_ptr<const RelationalStructure> g,
                               std::shared_ptr<const RelationalStructure> h, ElementMap map);

/// find_homs(power(h, n), h) re-encoded as operation tables.
std::vector<OperationTable> polymorphisms(const RelationalStructure& h, std::size_t n, const Limits& limits = {});
/// Checks preservation directly on tuples of h, without building h^n.
bool is_polymorphism(const RelationalStructure& h, const OperationTable& op, const Limits& limits = {});

struct Retraction {
  ElementMap retraction;    // g -> h
  ElementMap coretraction;  // h -> g
};

/// First pair (in lexicographic order of the coretraction, then the retraction)
/// with retraction ∘ coretraction = id_h. A given coretraction is used as is.
std::optional<Retraction> find_retraction(const RelationalStructure& g, const RelationalStructure& h,
                                          const std::optional<ElementMap>& coretraction = std::nullopt);

/// (second ∘ first)(x) = second[first[x]]
ElementMap compose(const ElementMap& first, const ElementMap& second);

bool is_constant_map(const ElementMap& map);

}  // namespace relcalc
