#pragma once

#include <map>
#include <vector>

#include "ergolab/averaging.hpp"
#include "ergolab/dynamics.hpp"

namespace ergolab {

struct CoinduceOptions {
    long long max_support = 200000;
    // Runs the per-point conditional checks and the second-cross-section
    // comparison; construction fails loudly either way on any violation.
    bool thorough = true;
};

// The co-induced extension of a group action from an extension of a subgroup
// subaction. Points of the extension are tuples over the cross-section,
// (y_c)_{c in C}; the remaining coordinates of the full tuple are determined
// within each coset by y_{ch} = S^{h^{-1}} y_c.
struct CoinducedExtension {
    GSpace base;             // X, the original action
    Subgroup h;              // H <= G
    HSpace fiber;            // Y, the given extension of the H-subaction
    std::vector<int> beta;   // Y -> X
    CrossSection section;    // minimal-representative cross-section C
    GSpace ext;              // (tilde X, tilde mu, tilde T)
    std::vector<std::vector<int>> tuples;  // support tuples over C, per ext point
    std::vector<int> base_of;              // ext point -> source point of X
    std::vector<int> alpha;                // ext -> Y (evaluation at the identity)
    std::vector<int> pi;                   // ext -> X (beta after alpha)
};

CoinducedExtension coinduce(const GSpace& x, const Subgroup& h, const HSpace& y,
                            const std::vector<int>& beta, const CoinduceOptions& opt = {});

// A cylinder constraint anchored at the cross-section: the event
// y_{c h} in set, evaluated through the within-coset determinism.
struct CylinderConstraint {
    int coset_index;
    int h;                 // ambient element of H
    std::vector<int> set;  // subset of Y points
};
using CylinderSpec = std::vector<CylinderConstraint>;

// Mass of the cylinder under the stored extension measure (support scan).
Rat cylinder_mass(const CoinducedExtension& ext, const CylinderSpec& spec);
// The same mass from the finite-dimensional-marginal product formula:
// sum_x mu(x) prod_cosets nu_{T^{c^{-1}}x}( cap_j S^{h_j}(A_j) ).
Rat cylinder_mass_formula(const CoinducedExtension& ext, const CylinderSpec& spec);

struct TowerOptions {
    long long level_budget = 200000;
    bool thorough = true;
};

// One level of the iterated construction: the relative product over the
// invariant algebra of the trailing window, carried back to a full-group
// extension by co-induction.
struct TowerLevel {
    GdSystem system;   // Y^(k)
    Subgroup h;        // H_{{d-k, d}} inside G^d
    Coupling theta;    // the relative product on Y^(k-1) x Y^(k-1)
    SigmaAlg phi;      // invariant algebra the relative product was taken over
    HSpace z;          // Z^(k): theta's support with the paired action
    std::vector<int> xi0, xi1;             // Z^(k) -> Y^(k-1) coordinate maps
    CoinducedExtension coind;              // the co-induction that produced Y^(k)
    std::vector<int> alpha;                // Y^(k) -> Z^(k)
    std::vector<int> xi;                   // Y^(k) -> Y^(k-1), xi0 after alpha
    std::vector<std::vector<int>> pi_eta;  // eta bitmask (bit i-1 = eta_i) -> map to X
    bool xi1_h_factor = true;              // informational: xi1 factoriality
};

struct CubeTower {
    GdSystem base;  // X (lazy inputs are converted to a cyclic table first)
    GroupPtr gd;    // the acting product group G^d
    std::vector<TowerLevel> levels;

    int depth() const { return static_cast<int>(levels.size()); }
    const GdSystem& level_system(int k) const { return k == 0 ? base : levels[k - 1].system; }
    const std::vector<int>& pi(int k, unsigned eta) const;
};

CubeTower build_tower(const GdSystem& s, int depth, const TowerOptions& opt = {});

// int over Y^(k) of prod_eta C^{|eta|} f(pi_eta(y)), conjugating when the bit
// count of eta is odd. Always real and nonnegative; returned as an exact
// rational, to be read as the 2^k-th power of the associated seminorm.
Rat hk_integral(const CubeTower& t, int k, const Obs& f);
Rat hk_seminorm_pow(const CubeTower& t, int k, const Obs& f);

struct IntertwineReport {
    bool pass = true;
    std::string witness;
};

// Exhaustive check of the intertwining relations of pi_eta against the level-k
// actions: the coordinatewise relation for i < d-l, the collapsed window at
// d-l, invariance along the trailing window (eta != 0), and the trailing
// window relation for every j with eta_i = 0 for i >= j+1.
IntertwineReport verify_intertwine(const CubeTower& t, int k, unsigned eta);

}  // namespace ergolab
