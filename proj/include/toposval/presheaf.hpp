#ifndef TOPOSVAL_PRESHEAF_HPP
#define TOPOSVAL_PRESHEAF_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "toposval/fincat.hpp"
#include "toposval/report.hpp"

namespace toposval {

class Omega;

/// A presheaf over a finite category: a finite element set per object and
/// a contravariant transition table per morphism. For f: B -> A the table
/// maps X(A) indices to X(B) indices.
class Presheaf {
public:
  const FiniteCategory& base() const { return *base_; }
  const std::shared_ptr<const FiniteCategory>& base_ptr() const {
    return base_;
  }

  int size_at(ObjId a) const { return static_cast<int>(elements_[a].size()); }
  const std::vector<std::string>& elements_at(ObjId a) const {
    return elements_[a];
  }
  const std::string& element_label(ObjId a, int x) const {
    return elements_[a][x];
  }
  int element_by_label(ObjId a, const std::string& label) const;

  /// X(f) applied to an element index of X(cod f); result indexes X(dom f).
  int apply(MorphId f, int element) const { return transitions_[f][element]; }
  const std::vector<int>& transition(MorphId f) const {
    return transitions_[f];
  }

private:
  friend class PresheafBuilder;

  std::shared_ptr<const FiniteCategory> base_;
  std::vector<std::vector<std::string>> elements_;
  std::vector<std::vector<int>> transitions_;
};

class PresheafBuilder {
public:
  explicit PresheafBuilder(std::shared_ptr<const FiniteCategory> base);

  void set_elements(ObjId a, std::vector<std::string> labels);
  void set_transition(MorphId f, std::vector<int> table);

  /// Identity transitions are synthesized. Throws MalformedInput when a
  /// non-identity morphism lacks a (total, in-range) table.
  std::shared_ptr<const Presheaf> build() const;

private:
  std::shared_ptr<const FiniteCategory> base_;
  std::vector<std::vector<std::string>> elements_;
  std::vector<std::vector<int>> transitions_;
  std::vector<bool> transition_set_;
};

/// Constant presheaf with a single element everywhere: the terminal object.
std::shared_ptr<const Presheaf> terminal_presheaf(
    std::shared_ptr<const FiniteCategory> base);

/// Lists every identity / contravariant-functoriality violation.
ValidationReport validate_presheaf(const Presheaf& x);

struct NaturalTransformation {
  std::shared_ptr<const Presheaf> source;
  std::shared_ptr<const Presheaf> target;
  /// Per object: source element index -> target element index.
  std::vector<std::vector<int>> components;

  bool operator==(const NaturalTransformation& other) const {
    return components == other.components;
  }
};

/// Lists every morphism whose naturality square fails. Throws
/// MalformedInput when the component tables are not total or the two
/// presheaves do not share a base.
ValidationReport check_natural(const NaturalTransformation& n);

struct Subobject {
  std::shared_ptr<const Presheaf> of;
  /// Per object: membership over X(A) element indices.
  std::vector<std::vector<char>> member;

  bool contains(ObjId a, int x) const { return member[a][x] != 0; }
  bool operator==(const Subobject& other) const {
    return member == other.member;
  }
};

Subobject whole_subobject(std::shared_ptr<const Presheaf> x);
Subobject empty_subobject(std::shared_ptr<const Presheaf> x);

/// Restriction closure: X(f)(K(A)) ⊆ K(B) for every f: B -> A.
ValidationReport validate_subobject(const Subobject& k);

/// Characteristic morphism of a subobject: component at A sends x to the
/// sieve { f: B -> A | X(f)(x) in K(B) }, indexed into omega's sieve list.
/// Throws MalformedInput when k fails restriction closure.
NaturalTransformation characteristic_morphism(const Subobject& k,
                                              const Omega& omega);

/// Inverse direction: K(A) = { x | chi_A(x) is the principal sieve }.
/// Throws MalformedInput when chi is not natural or does not target omega.
Subobject subobject_from_char(const NaturalTransformation& chi,
                              const Omega& omega);

/// A partial or global element: a choice of element on a down-closed set
/// of objects satisfying the matching condition. choice[a] == -1 marks
/// objects outside the domain.
struct Section {
  std::shared_ptr<const Presheaf> of;
  std::vector<int> choice;

  bool in_domain(ObjId a) const { return choice[a] >= 0; }
  bool global() const;
  int domain_size() const;

  bool operator==(const Section& other) const {
    return choice == other.choice;
  }
};

ValidationReport validate_section(const Section& s);

/// Exhaustive, canonically ordered list of global sections.
std::vector<Section> global_sections(std::shared_ptr<const Presheaf> x);

/// All partial elements whose domain cannot be extended by any single
/// object while preserving down-closure and matching. Global sections
/// appear with full domain. Canonically ordered.
std::vector<Section> maximal_partial_elements(
    std::shared_ptr<const Presheaf> x);

} // namespace toposval

#endif
