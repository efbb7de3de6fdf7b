#pragma once

// The free relational structure generated by 𝕊 over a finite algebra, its
// components, the collapse onto a disjoint union of powers of 𝕊, and the
// checks that come with it.

#include <optional>
#include <string>
#include <vector>

#include "relcalc/freealg.hpp"
#include "relcalc/report.hpp"
#include "relcalc/structure.hpp"

namespace relcalc {

/// Filled in stages: free_structure, then compute_H, then collapse.
struct FreeBundle {
  // free_structure
  FreeAlgebra free;  // F(x,y); free.generators = {x, y}
  RelationalStructure Fstruct;
  FreeAlgebra unary;  // F(x); its elements form U
  std::vector<std::size_t> component_of;              // F id -> U id
  std::vector<std::vector<Element>> component_members;  // U id -> F ids, ascending
  std::vector<RelationalStructure> components;        // U id -> F_u
  std::size_t identity_component = 0;

  // compute_H: U id -> nonconstant homomorphisms F_u -> 𝕊 on local ids
  std::optional<std::vector<std::vector<ElementMap>>> H;

  // collapse
  RelationalStructure G;            // disjoint union of 𝕊^{|H_u|}
  std::vector<Element> G_offset;    // U id -> first G id of its block
  ElementMap psi;                   // F id -> G id
  RelationalStructure K;            // image of psi
  std::vector<Element> K_to_G;      // K id -> G id
  ElementMap psi_K;                 // F id -> K id
  std::vector<std::vector<Element>> K_members;  // U id -> K ids, ascending
  std::vector<RelationalStructure> K_components;
  Partition kernel;
  FiniteAlgebra Kalg;
  bool collapsed = false;

  const FiniteAlgebra& F() const noexcept { return free.algebra; }
  Element x() const { return free.generators.at(0); }
  Element y() const { return free.generators.at(1); }
  std::size_t H_size(std::size_t u) const { return H->at(u).size(); }
  /// F id of u(x) or u(y).
  Element apply_unary(std::size_t u, bool at_y) const;
  /// Bit s of the G element g inside its block.
  bool g_bit(std::size_t u, Element g, std::size_t s) const;
  Homomorphism psi_homomorphism() const;
};

/// F(x,y), the relation generated by (x,x,x),(x,y,x),(y,x,x),(y,y,y) inside F³,
/// U = F(x), and the components F_u with u = t(x,x).
FreeBundle free_structure(const FiniteAlgebra& a, const Limits& limits = {});
/// H_u = nonconstant homomorphisms F_u -> 𝕊, one search per component.
FreeBundle compute_H(FreeBundle bundle);
/// psi(t) = [t], K = image, Kalg = F / ker(psi). Throws VerificationFailure
/// if an induced operation is not well defined, naming the operation and pair.
FreeBundle collapse(FreeBundle bundle, const Limits& limits = {});

/// Runs all three stages.
FreeBundle build_free_bundle(const FiniteAlgebra& a, const Limits& limits = {});

/// Components of Fstruct are the F_u; 𝕊 is a retract of F_id at {x, y}
/// (refused when H_id is empty).
Report verify_lemma21(const FreeBundle& b);
/// Items 1-6 for K; item 3 is refused when H_id is empty.
Report verify_lemma22(const FreeBundle& b, const Limits& limits = {});
/// Claims 1-4 with polymorphisms of K of arity n.
Report verify_claims(const FreeBundle& b, std::size_t n = 2, const Limits& limits = {});

struct HmRefutation {
  ident::SLLabeling labeling;
  std::size_t arity = 0;  // number of generators of the free algebra it was found in
  ident::Identity identity;
};

struct HmEvidence {
  enum class Kind { CertifiedHM, ConsistentLabelingFound };
  Kind kind = Kind::ConsistentLabelingFound;
  std::size_t m = 0;
  std::size_t labelings = 0;
  std::vector<HmRefutation> log;             // CertifiedHM: one entry per labeling, in order
  std::optional<ident::SLLabeling> labeling;  // ConsistentLabelingFound: first survivor
};

/// Throws Error when `a` is not idempotent. m defaults to max(2, largest arity).
HmEvidence hm_evidence(const FiniteAlgebra& a, std::optional<std::size_t> m = std::nullopt, bool parallel = true,
                       const Limits& limits = {});
/// Replays a certificate without the free algebras: the log covers every
/// labeling in order, each identity holds in `a`, and the labeling separates
/// its two sides.
Report replay_hm_evidence(const FiniteAlgebra& a, const HmEvidence& ev);

}  // namespace relcalc
