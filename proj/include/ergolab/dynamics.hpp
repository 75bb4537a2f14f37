#pragma once

#include <string>
#include <vector>

#include "ergolab/group.hpp"
#include "ergolab/prob.hpp"

namespace ergolab {

// A permutation of point indices, as the point map x -> T(x).
using Perm = std::vector<int>;

Perm identity_perm(int n);
Perm compose(const Perm& p, const Perm& q);  // x -> p[q[x]]
Perm inverse_perm(const Perm& p);
Perm perm_pow(const Perm& p, long long k);  // k >= 0
long long perm_order(const Perm& p);
bool is_permutation(const Perm& p, int n);

// A commuting d-tuple of measure-preserving G-actions on one space.
// Table mode stores one permutation per (action, group element); LazyZ mode
// stores one generator permutation per action (the integers acting by its
// powers). Construction validates: permutations preserve the measure exactly,
// each action is a homomorphism, and the actions commute pairwise.
class GdSystem {
  public:
    enum class Validation { Exhaustive, Generators, Auto };

    GdSystem() = default;  // empty shell; every factory returns a validated value
    static GdSystem from_actions(SpacePtr space, GroupPtr group,
                                 std::vector<std::vector<Perm>> acts,
                                 Validation mode = Validation::Auto);
    // Table mode with each action given on a generating set of (element, perm)
    // pairs; the homomorphism is completed by word evaluation and validated.
    static GdSystem from_generators(SpacePtr space, GroupPtr group,
                                    const std::vector<std::vector<std::pair<int, Perm>>>& gens,
                                    Validation mode = Validation::Auto);
    static GdSystem lazy_z(SpacePtr space, std::vector<Perm> generator_perms);

    bool lazy() const { return lazy_; }
    int d() const { return d_; }
    const SpacePtr& space() const { return space_; }
    const GroupPtr& group() const { return group_; }
    int points() const { return space_->size(); }

    // Table access: T_i^g for 1-based action index i.
    const Perm& action(int i, int g) const { return acts_[i - 1][g]; }
    // Lazy access: the generator permutation of T_i.
    const Perm& lazy_gen(int i) const { return acts_[i - 1][0]; }

    // Composite windows T_{[a;b]} = T_a T_{a+1} ... T_b (1-based, inclusive).
    std::vector<Perm> window_table(int a, int b) const;  // per group element
    Perm window_lazy_gen(int a, int b) const;
    // Generating permutations of the window subaction (both modes).
    std::vector<Perm> window_gens(int a, int b) const;

    // The G^d-action g -> T_1^{g_1} ... T_d^{g_d} (table mode only).
    Perm gd_perm(const std::vector<int>& comps) const;
    Perm gd_perm(const GroupPtr& gd, int elem) const;

  private:
    void validate_basics() const;
    SpacePtr space_;
    GroupPtr group_;
    int d_ = 0;
    bool lazy_ = false;
    std::vector<std::vector<Perm>> acts_;
};

// A single validated G-action in table mode (used by co-induction, where the
// acting group is typically a product group G^d).
struct GSpace {
    SpacePtr space;
    GroupPtr group;
    std::vector<Perm> act;  // per group element
};

GSpace as_gspace(const GdSystem& s, const GroupPtr& gd);
GdSystem gspace_to_system(const GSpace& x, int d, GdSystem::Validation mode);

// The restriction of an action to a subgroup H of the acting group: one
// permutation per member of H, stored parallel to Subgroup::elems().
struct HSpace {
    SpacePtr space;
    Subgroup sub;
    std::vector<Perm> act;

    const Perm& act_of(int ambient_elem) const;
};

HSpace restrict_gspace(const GSpace& x, const Subgroup& h);
HSpace restrict_system(const GdSystem& s, const Subgroup& h);

struct FactorReport {
    bool pass = true;
    std::string witness;
};

// A factor map as a value: systems plus the point map between them.
struct FactorMap {
    GdSystem source;
    GdSystem target;
    std::vector<int> map;
};

FactorReport validate_factor(const FactorMap& pi);

// Exact pushforward (src measure maps onto tgt measure) plus equivariance
// map(srcperm(x)) == tgtperm(map(x)) on the support, for each listed pair.
FactorReport validate_point_factor(const SpacePtr& src, const SpacePtr& tgt,
                                   const std::vector<int>& map,
                                   const std::vector<std::pair<const Perm*, const Perm*>>& pairs,
                                   const std::vector<std::string>& tags = {});
FactorReport validate_factor(const GdSystem& src, const GdSystem& tgt, const std::vector<int>& map);
FactorReport validate_factor(const GSpace& src, const GSpace& tgt, const std::vector<int>& map);
FactorReport validate_factor(const HSpace& src, const HSpace& tgt, const std::vector<int>& map);

// Partition of the support into orbits of the group generated by the given
// permutations; equals the algebra of exactly invariant sets mod null.
SigmaAlg orbit_sigma(const SpacePtr& space, const std::vector<Perm>& gens);

// Sigma^H for H <= G^d acting through g -> T_1^{g_1}...T_d^{g_d}.
SigmaAlg invariant_sigma(const GdSystem& s, const Subgroup& h);
// Sigma^{T_{[a;b]}} of a composite window.
SigmaAlg invariant_sigma_window(const GdSystem& s, int a, int b);

// Phi^e = Sigma^{L_e}: invariant under every consecutive window of e. The
// convention for |e| = 1 is the full algebra (singletons on the support).
SigmaAlg phi_e(const GdSystem& s, const std::vector<int>& e);
SigmaAlg phi_upset(const GdSystem& s, const UpSet& family);  // join of Phi^e, |e| >= 2

// Join of window-invariant algebras around position i up to j.
SigmaAlg F_ij_sigma(const GdSystem& s, int i, int j);
// Delta_j for a sparse index tuple i_1 < ... < i_k and position j (1-based).
SigmaAlg delta_j_sigma(const GdSystem& s, const std::vector<int>& indices, int j);

struct InvarianceReport {
    bool pass = true;
    std::string witness;
};

// Do the permutations carry every cell of the partition onto a cell?
InvarianceReport check_setwise_invariance(const SigmaAlg& sig, const std::vector<Perm>& perms);

// The image partition {T(C) : C cell}; requires the perm to preserve weights.
SigmaAlg image_sigma(const SigmaAlg& sig, const Perm& p);

}  // namespace ergolab
