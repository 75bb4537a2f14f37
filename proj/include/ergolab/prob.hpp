#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ergolab/rational.hpp"

namespace ergolab {

class ProbSpace;
using SpacePtr = std::shared_ptr<const ProbSpace>;

// A finite probability space: ordered point labels with exact rational weights
// summing to 1. Weights may be zero; the support is the set of points with
// positive weight and every measure-theoretic notion is computed there.
class ProbSpace {
  public:
    ProbSpace(std::vector<std::string> labels, std::vector<Rat> weights);

    static SpacePtr make(std::vector<std::string> labels, std::vector<Rat> weights);
    static SpacePtr uniform(std::vector<std::string> labels);
    static SpacePtr uniform(int n, const std::string& prefix = "x");

    int size() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int p) const { return labels_[p]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const Rat& weight(int p) const { return weights_[p]; }
    const std::vector<int>& support() const { return support_; }
    bool in_support(int p) const { return weights_[p] > 0; }
    bool has_null_points() const { return support_.size() != labels_.size(); }
    int index_of(const std::string& label) const;  // -1 when absent

    bool same_as(const ProbSpace& o) const;

  private:
    std::vector<std::string> labels_;
    std::vector<Rat> weights_;
    std::vector<int> support_;
    std::map<std::string, int> index_;
};

// True when two space handles refer to the same space (pointer or structural).
bool same_space(const SpacePtr& a, const SpacePtr& b);
void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* where);

// A sigma-algebra on the support, represented as a partition into cells of
// positive weight. Zero-weight points live in an implicit null cell
// (cell_of == -1). Cells are canonically ordered by their minimal point index
// and sorted internally, so equal partitions compare equal structurally.
class SigmaAlg {
  public:
    SigmaAlg(SpacePtr base, std::vector<std::vector<int>> cells);

    static SigmaAlg singletons(SpacePtr base);
    static SigmaAlg trivial(SpacePtr base);
    // Builds from arbitrary per-point ids (null points ignored).
    static SigmaAlg from_cell_ids(SpacePtr base, const std::vector<int>& ids);

    const SpacePtr& base() const { return base_; }
    int cell_count() const { return static_cast<int>(cells_.size()); }
    const std::vector<std::vector<int>>& cells() const { return cells_; }
    const std::vector<int>& cell(int c) const { return cells_[c]; }
    int cell_of(int p) const { return cell_of_[p]; }
    Rat cell_weight(int c) const;

    // True when every cell of *this sits inside a cell of `coarser`.
    bool refines(const SigmaAlg& coarser) const;

    friend bool operator==(const SigmaAlg& a, const SigmaAlg& b) {
        return same_space(a.base_, b.base_) && a.cells_ == b.cells_;
    }

  private:
    SpacePtr base_;
    std::vector<std::vector<int>> cells_;
    std::vector<int> cell_of_;
};

// Coarsest common refinement. The empty list yields the trivial algebra.
SigmaAlg join_sigma(const SpacePtr& base, const std::vector<SigmaAlg>& parts);
SigmaAlg join_sigma(const std::vector<SigmaAlg>& parts);

// A bounded observable: one Gaussian-rational value per point.
class Obs {
  public:
    Obs(SpacePtr base, std::vector<GaussRat> values);

    static Obs constant(SpacePtr base, const GaussRat& v);
    static Obs indicator(SpacePtr base, const std::vector<int>& points);

    const SpacePtr& base() const { return base_; }
    const GaussRat& value(int p) const { return values_[p]; }
    const std::vector<GaussRat>& values() const { return values_; }

    Obs conj() const;
    bool bounded_by_one() const;  // |f(x)|^2 <= 1 on the support

    friend Obs operator+(const Obs& a, const Obs& b);
    friend Obs operator-(const Obs& a, const Obs& b);
    friend Obs operator*(const Obs& a, const Obs& b);  // pointwise
    friend Obs operator*(const GaussRat& c, const Obs& a);
    friend bool operator==(const Obs& a, const Obs& b);

  private:
    SpacePtr base_;
    std::vector<GaussRat> values_;
};

GaussRat integral(const Obs& f);
GaussRat l2_inner(const Obs& f, const Obs& g);  // sum f(x) conj(g(x)) mu(x)
Rat l2_norm_sq(const Obs& f);

// Conditional expectation onto a partition: the weighted cell average,
// constant on each cell, zero on null points.
Obs cond_exp(const Obs& f, const SigmaAlg& phi);

// An exact measure on a finite product of copies of the factor spaces, stored
// sparsely on its support. Construction validates: total mass 1, every
// single-coordinate marginal equals the declared factor measure.
class Coupling {
  public:
    Coupling(std::vector<SpacePtr> factors, std::map<std::vector<int>, Rat> mass);

    static Coupling diagonal(const SpacePtr& base, int arity);

    int arity() const { return static_cast<int>(factors_.size()); }
    const SpacePtr& factor(int i) const { return factors_[i]; }
    const std::map<std::vector<int>, Rat>& mass() const { return mass_; }
    Rat mass_of(const std::vector<int>& t) const;
    std::vector<Rat> marginal(int i) const;
    // Mass of a rectangle A_1 x ... x A_k given per-factor point sets.
    Rat rectangle_mass(const std::vector<std::vector<int>>& sets) const;

    // The support of the coupling as a probability space of its own; point i
    // corresponds to tuple(i). Labels are "(p,q,...)" over factor labels.
    const SpacePtr& product_space() const { return product_; }
    const std::vector<std::vector<int>>& tuples() const { return tuples_; }

    // Pull a sigma-algebra / observable on factor `coord` back through the
    // coordinate projection, landing on product_space().
    SigmaAlg lift(int coord, const SigmaAlg& s) const;
    Obs lift(int coord, const Obs& f) const;

  private:
    std::vector<SpacePtr> factors_;
    std::map<std::vector<int>, Rat> mass_;
    SpacePtr product_;
    std::vector<std::vector<int>> tuples_;
};

// The relative product mu (x)_Phi mu: mass(x,y) = sum over cells C containing
// both of mu(x)mu(y)/mu(C); zero across distinct cells.
Coupling rel_product(const SpacePtr& mu, const SigmaAlg& phi);

struct RelIndepReport {
    bool pass = true;
    bool phi_refined_by_s1 = true;  // structural diagnostics, not preconditions
    bool phi_refined_by_s2 = true;
    std::string witness;  // first violating cell pair, empty on pass
    GaussRat lhs, rhs;
};

// Exhaustively tests int(fg) == int(E(f|phi) E(g|phi)) over all pairs of cell
// indicators f of s1, g of s2, under the base measure (all on one space).
RelIndepReport rel_indep_report(const SigmaAlg& s1, const SigmaAlg& s2, const SigmaAlg& phi);

}  // namespace ergolab
