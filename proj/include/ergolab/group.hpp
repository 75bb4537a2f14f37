#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ergolab/rational.hpp"

namespace ergolab {

class Group;
using GroupPtr = std::shared_ptr<const Group>;

// A finite group with a total multiplication law over elements 0..size-1.
// Base groups carry a literal table, exhaustively validated at construction
// (associativity, identity, inverses). Powers G^d are represented
// componentwise over the validated base with mixed-radix element encoding;
// coordinate 1 is the most significant digit, so the identity is element 0.
class Group {
  public:
    static GroupPtr from_table(std::vector<std::string> names,
                               std::vector<std::vector<int>> table,
                               long long assoc_check_bound = 512);
    static GroupPtr trivial();
    static GroupPtr cyclic(int n);
    static GroupPtr symmetric(int n);  // n <= 5; names are one-line images, e.g. "102"
    static GroupPtr dihedral(int n);   // order 2n; rotations r0..r{n-1}, reflections s0..s{n-1}
    static GroupPtr direct(const GroupPtr& a, const GroupPtr& b);  // materialized table
    static GroupPtr power(GroupPtr base, int d, long long max_elements = 1000000);

    long long size() const { return size_; }
    int id() const { return 0; }
    int mul(int a, int b) const;
    int inv(int a) const;
    std::string name(int a) const;
    int index_of(const std::string& name) const;  // -1 when absent

    bool is_power() const { return exponent_ > 1; }
    const GroupPtr& base() const { return base_; }
    int exponent() const { return exponent_; }
    // Power-group coordinate access; axis is 1-based as in index notation.
    int component(int elem, int axis) const;
    int from_components(const std::vector<int>& comps) const;
    int embed_axis(int g, int axis) const;  // (1,...,g,...,1) with g at `axis`

    // A small generating set (greedy); the whole element list for tiny groups.
    std::vector<int> generating_set() const;

    // How the group was constructed ("cyclic:4", "symmetric:3", ...); empty
    // for raw tables and powers. Used by the system-file serializer.
    const std::string& descriptor() const { return descriptor_; }

  private:
    Group() = default;
    static std::shared_ptr<Group> make_table(std::vector<std::string> names,
                                             std::vector<std::vector<int>> table,
                                             long long assoc_check_bound);
    long long size_ = 0;
    std::string descriptor_;
    // Table mode.
    std::vector<std::string> names_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
    // Power mode.
    GroupPtr base_;
    int exponent_ = 1;
};

// A validated subgroup: member bitset over the ambient group, closed under
// multiplication and inverse, containing the identity.
class Subgroup {
  public:
    Subgroup() = default;  // empty shell; every factory returns a validated value
    static Subgroup from_members(GroupPtr ambient, std::vector<int> members);
    static Subgroup generated(GroupPtr ambient, std::vector<int> generators);
    static Subgroup whole(GroupPtr ambient);
    static Subgroup trivial_in(GroupPtr ambient);

    const GroupPtr& ambient() const { return ambient_; }
    bool contains(int g) const { return member_[g]; }
    const std::vector<int>& elems() const { return elems_; }
    const std::vector<int>& gens() const { return gens_; }
    long long size() const { return static_cast<long long>(elems_.size()); }
    int index_in(int ambient_elem) const;  // position in elems(), -1 if absent
    bool subgroup_of(const Subgroup& other) const;

  private:
    void validate() const;
    GroupPtr ambient_;
    std::vector<char> member_;
    std::vector<int> elems_;
    std::vector<int> gens_;
};

// The index-pattern subgroups of G^d attached to e = {i_1 < ... < i_r}.
// Indices live in {0,...,d} (0 is the boundary sentinel used by the tower);
// |e| >= 2 is required. Patterns, in 1-based coordinates:
//   H_e: g_{i_s+1} = ... = g_{i_{s+1}} for each consecutive pair of e;
//   K_{i,j}: in H_{i,j} with g_l = 1 for l in (i;j];
//   L_e: in H_e with g_l = 1 for l outside (i_1;i_r].
Subgroup subgroup_He(const GroupPtr& gd, const std::vector<int>& e);
Subgroup subgroup_K(const GroupPtr& gd, int i, int j);
Subgroup subgroup_Le(const GroupPtr& gd, const std::vector<int>& e);

// Natural generators of L_e: block embeddings phi_s(g) carrying g to the
// coordinates (i_s; i_{s+1}], one per consecutive pair and base element.
std::vector<int> le_generators(const GroupPtr& gd, const std::vector<int>& e);
// The single block embedding phi: g has value `g` on coordinates (a;b], 1 elsewhere.
int block_embed(const GroupPtr& gd, int a, int b, int g);

struct SubgroupFamilyReport {
    bool part1_pass = false;
    std::string part1_witness;
    bool part2_applies = false, part2_pass = false;
    std::string part2_witness;
    bool part3_applies = false, part3_pass = false;
    std::string part3_witness;
    std::string note;
    bool pass() const {
        return part1_pass && (!part2_applies || part2_pass) && (!part3_applies || part3_pass);
    }
};

// Part (1): L_e and K_{min e, max e} commute elementwise and generate H_e.
// Part (2): a subset of e implies L_a <= L_e. Part (3): normality L_a <| H_e
// under the gap hypothesis e cap [min a; max a] = a (skipped with a note when
// the hypothesis fails).
SubgroupFamilyReport check_subgroup_family(const GroupPtr& gd, const std::vector<int>& e,
                                         const std::vector<int>& a);

// Left-coset representatives gH, one per coset. Minimal picks the least
// element of each coset in the ambient order (the canonical choice); Maximal
// exists to exercise cross-section independence.
class CrossSection {
  public:
    enum class Pick { Minimal, Maximal };
    explicit CrossSection(const Subgroup& h, Pick pick = Pick::Minimal);

    const std::vector<int>& reps() const { return reps_; }
    long long count() const { return static_cast<long long>(reps_.size()); }
    int coset_rep(int g) const { return rep_of_[g]; }
    int coset_index(int g) const { return index_of_rep_[rep_of_[g]]; }
    // g = c h with c the coset representative; returns (coset index, h).
    std::pair<int, int> decompose(int g) const;

  private:
    GroupPtr group_;
    std::vector<int> reps_;
    std::vector<int> rep_of_;
    std::vector<int> index_of_rep_;
};

// An upward-closed family of subsets of [d], subsets encoded as bitmasks with
// bit (i-1) for element i. The antichain of minimal members is unique.
class UpSet {
  public:
    UpSet(int d, std::set<unsigned> members);  // validates upward closure
    static UpSet generated(int d, const std::vector<unsigned>& gens);
    static UpSet empty(int d) { return UpSet(d, {}); }

    int dim() const { return d_; }
    const std::set<unsigned>& members() const { return members_; }
    bool contains(unsigned m) const { return members_.count(m) != 0; }
    std::vector<unsigned> minimal_antichain() const;

    friend bool operator==(const UpSet& a, const UpSet& b) {
        return a.d_ == b.d_ && a.members_ == b.members_;
    }

  private:
    int d_;
    std::set<unsigned> members_;
};

UpSet upset_intersect(const UpSet& a, const UpSet& b);

std::vector<int> mask_to_set(unsigned mask);  // 1-based elements, ascending
unsigned set_to_mask(const std::vector<int>& set);

}  // namespace ergolab
