#include "ergolab/dynamics.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace ergolab {

Perm identity_perm(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm compose(const Perm& p, const Perm& q) {
    Perm out(q.size());
    for (size_t x = 0; x < q.size(); ++x) out[x] = p[q[x]];
    return out;
}

Perm inverse_perm(const Perm& p) {
    Perm out(p.size());
    for (size_t x = 0; x < p.size(); ++x) out[p[x]] = static_cast<int>(x);
    return out;
}

Perm perm_pow(const Perm& p, long long k) {
    if (k < 0) throw Error("perm_pow: negative exponent");
    Perm acc = identity_perm(static_cast<int>(p.size()));
    Perm base = p;
    while (k > 0) {
        if (k & 1) acc = compose(acc, base);
        base = compose(base, base);
        k >>= 1;
    }
    return acc;
}

long long perm_order(const Perm& p) {
    const int n = static_cast<int>(p.size());
    std::vector<char> seen(n, 0);
    long long order = 1;
    for (int x = 0; x < n; ++x) {
        if (seen[x]) continue;
        long long len = 0;
        for (int y = x; !seen[y]; y = p[y]) {
            seen[y] = 1;
            ++len;
        }
        order = std::lcm(order, len);
    }
    return order;
}

bool is_permutation(const Perm& p, int n) {
    if (static_cast<int>(p.size()) != n) return false;
    std::vector<char> hit(n, 0);
    for (int v : p) {
        if (v < 0 || v >= n || hit[v]) return false;
        hit[v] = 1;
    }
    return true;
}

namespace {

void require_measure_preserving(const SpacePtr& space, const Perm& p, const std::string& tag) {
    if (!is_permutation(p, space->size()))
        throw Error(tag + ": not a permutation of the point set");
    for (int x = 0; x < space->size(); ++x)
        if (space->weight(p[x]) != space->weight(x))
            throw Error(tag + ": weight not preserved at point " + space->label(x));
}

}  // namespace

void GdSystem::validate_basics() const {
    for (int i = 0; i < d_; ++i)
        for (size_t g = 0; g < acts_[i].size(); ++g)
            require_measure_preserving(space_, acts_[i][g],
                                       "action " + std::to_string(i + 1) + " at element " +
                                           (lazy_ ? std::string("1") : group_->name(static_cast<int>(g))));
}

GdSystem GdSystem::from_actions(SpacePtr space, GroupPtr group, std::vector<std::vector<Perm>> acts,
                                Validation mode) {
    GdSystem s;
    s.space_ = std::move(space);
    s.group_ = std::move(group);
    s.d_ = static_cast<int>(acts.size());
    s.acts_ = std::move(acts);
    s.lazy_ = false;
    if (!s.group_) throw Error("system: null group");
    if (s.d_ < 1) throw Error("system: needs at least one action");
    const long long n = s.group_->size();
    for (int i = 0; i < s.d_; ++i)
        if (static_cast<long long>(s.acts_[i].size()) != n)
            throw Error("system: action " + std::to_string(i + 1) +
                        " does not cover every group element");
    s.validate_basics();
    for (int i = 0; i < s.d_; ++i)
        if (s.acts_[i][0] != identity_perm(s.space_->size()))
            throw Error("system: action at the identity is not the identity map");

    std::vector<int> gens = s.group_->generating_set();
    bool exhaustive = mode == Validation::Exhaustive;
    if (mode == Validation::Auto)
        exhaustive = n * n * s.d_ * (s.d_ + 1) * s.space_->size() <= 40000000LL;

    std::vector<int> range;
    if (exhaustive) {
        range.resize(n);
        std::iota(range.begin(), range.end(), 0);
    } else {
        range = gens;
    }
    // Homomorphism: T^{gh} = T^g T^h, on all pairs or on (g, generator) pairs
    // (the latter already forces the law for every word).
    for (int i = 0; i < s.d_; ++i)
        for (int g = 0; g < n; ++g)
            for (int h : range)
                if (s.acts_[i][s.group_->mul(g, h)] != compose(s.acts_[i][g], s.acts_[i][h]))
                    throw Error("system: action " + std::to_string(i + 1) +
                                " is not a homomorphism at (" + s.group_->name(g) + "," +
                                s.group_->name(h) + ")");
    // Pairwise commutation of distinct actions.
    for (int i = 0; i < s.d_; ++i)
        for (int j = i + 1; j < s.d_; ++j)
            for (int g : range)
                for (int h : range)
                    if (compose(s.acts_[i][g], s.acts_[j][h]) !=
                        compose(s.acts_[j][h], s.acts_[i][g]))
                        throw Error("system: actions " + std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " do not commute at (" +
                                    s.group_->name(g) + "," + s.group_->name(h) + ")");
    return s;
}

GdSystem GdSystem::from_generators(SpacePtr space, GroupPtr group,
                                   const std::vector<std::vector<std::pair<int, Perm>>>& gens,
                                   Validation mode) {
    const long long n = group->size();
    const int npts = space->size();
    std::vector<std::vector<Perm>> acts;
    for (size_t i = 0; i < gens.size(); ++i) {
        std::vector<Perm> act(n);
        std::vector<char> known(n, 0);
        act[0] = identity_perm(npts);
        known[0] = 1;
        for (const auto& [elem, perm] : gens[i]) {
            if (elem < 0 || elem >= n) throw Error("system: generator element out of range");
            if (!is_permutation(perm, npts))
                throw Error("system: generator image is not a permutation");
            if (known[elem] && act[elem] != perm)
                throw Error("system: conflicting generator images for element " +
                            group->name(elem));
            act[elem] = perm;
            known[elem] = 1;
        }
        // Word completion: propagate T^{gs} = T^g T^s until closure.
        bool changed = true;
        while (changed) {
            changed = false;
            for (int g = 0; g < n; ++g) {
                if (!known[g]) continue;
                for (const auto& [elem, perm] : gens[i]) {
                    int gs = group->mul(g, static_cast<int>(elem));
                    Perm composed = compose(act[g], perm);
                    if (!known[gs]) {
                        act[gs] = std::move(composed);
                        known[gs] = 1;
                        changed = true;
                    } else if (act[gs] != composed) {
                        throw Error("system: generator relations violated at element " +
                                    group->name(gs) +
                                    " (generator image order incompatible with the group)");
                    }
                }
            }
        }
        for (int g = 0; g < n; ++g)
            if (!known[g])
                throw Error("system: supplied generators do not generate the group (element " +
                            group->name(g) + " unreachable)");
        acts.push_back(std::move(act));
    }
    return from_actions(std::move(space), std::move(group), std::move(acts), mode);
}

GdSystem GdSystem::lazy_z(SpacePtr space, std::vector<Perm> generator_perms) {
    GdSystem s;
    s.space_ = std::move(space);
    s.d_ = static_cast<int>(generator_perms.size());
    if (s.d_ < 1) throw Error("system: needs at least one action");
    s.lazy_ = true;
    for (auto& p : generator_perms) s.acts_.push_back({std::move(p)});
    s.validate_basics();
    for (int i = 0; i < s.d_; ++i)
        for (int j = i + 1; j < s.d_; ++j)
            if (compose(s.acts_[i][0], s.acts_[j][0]) != compose(s.acts_[j][0], s.acts_[i][0]))
                throw Error("system: generator permutations " + std::to_string(i + 1) + " and " +
                            std::to_string(j + 1) + " do not commute");
    return s;
}

std::vector<Perm> GdSystem::window_table(int a, int b) const {
    if (lazy_) throw Error("window_table: lazy system");
    if (a < 1 || b > d_ || a > b) throw Error("composite window out of range");
    std::vector<Perm> out(group_->size());
    for (int g = 0; g < group_->size(); ++g) {
        Perm p = acts_[a - 1][g];
        for (int i = a + 1; i <= b; ++i) p = compose(acts_[i - 1][g], p);
        out[g] = std::move(p);
    }
    return out;
}

Perm GdSystem::window_lazy_gen(int a, int b) const {
    if (!lazy_) throw Error("window_lazy_gen: table system");
    if (a < 1 || b > d_ || a > b) throw Error("composite window out of range");
    Perm p = acts_[a - 1][0];
    for (int i = a + 1; i <= b; ++i) p = compose(acts_[i - 1][0], p);
    return p;
}

std::vector<Perm> GdSystem::window_gens(int a, int b) const {
    if (lazy_) return {window_lazy_gen(a, b)};
    std::vector<Perm> out;
    auto table = window_table(a, b);
    for (int g : group_->generating_set()) out.push_back(table[g]);
    if (out.empty()) out.push_back(identity_perm(space_->size()));
    return out;
}

Perm GdSystem::gd_perm(const std::vector<int>& comps) const {
    if (lazy_) throw Error("gd_perm: lazy system");
    if (static_cast<int>(comps.size()) != d_) throw Error("gd_perm: wrong arity");
    Perm p = identity_perm(space_->size());
    for (int i = 0; i < d_; ++i) p = compose(acts_[i][comps[i]], p);
    return p;
}

Perm GdSystem::gd_perm(const GroupPtr& gd, int elem) const {
    std::vector<int> comps(d_);
    for (int i = 1; i <= d_; ++i) comps[i - 1] = gd->component(elem, i);
    return gd_perm(comps);
}

GSpace as_gspace(const GdSystem& s, const GroupPtr& gd) {
    if (s.lazy()) throw Error("as_gspace: lazy system (convert to a cyclic table first)");
    if (gd->exponent() != s.d()) throw Error("as_gspace: group exponent mismatch");
    GSpace x;
    x.space = s.space();
    x.group = gd;
    x.act.resize(gd->size());
    for (int g = 0; g < gd->size(); ++g) x.act[g] = s.gd_perm(gd, g);
    return x;
}

GdSystem gspace_to_system(const GSpace& x, int d, GdSystem::Validation mode) {
    const GroupPtr& gd = x.group;
    if (gd->exponent() != d) throw Error("gspace_to_system: exponent mismatch");
    const GroupPtr base = gd->is_power() ? gd->base() : gd;
    std::vector<std::vector<Perm>> acts(d);
    for (int i = 1; i <= d; ++i) {
        acts[i - 1].resize(base->size());
        for (int g = 0; g < base->size(); ++g) acts[i - 1][g] = x.act[gd->embed_axis(g, i)];
    }
    return GdSystem::from_actions(x.space, base, std::move(acts), mode);
}

const Perm& HSpace::act_of(int ambient_elem) const {
    int idx = sub.index_in(ambient_elem);
    if (idx < 0) throw Error("HSpace: element not in the subgroup");
    return act[idx];
}

HSpace restrict_gspace(const GSpace& x, const Subgroup& h) {
    HSpace out;
    out.space = x.space;
    out.sub = h;
    out.act.reserve(h.elems().size());
    for (int e : h.elems()) out.act.push_back(x.act[e]);
    return out;
}

HSpace restrict_system(const GdSystem& s, const Subgroup& h) {
    HSpace out;
    out.space = s.space();
    out.sub = h;
    out.act.reserve(h.elems().size());
    for (int e : h.elems()) out.act.push_back(s.gd_perm(h.ambient(), e));
    return out;
}

FactorReport validate_point_factor(const SpacePtr& src, const SpacePtr& tgt,
                                   const std::vector<int>& map,
                                   const std::vector<std::pair<const Perm*, const Perm*>>& pairs,
                                   const std::vector<std::string>& tags) {
    FactorReport rep;
    if (static_cast<int>(map.size()) != src->size()) {
        rep.pass = false;
        rep.witness = "point map has wrong length";
        return rep;
    }
    std::vector<Rat> push(tgt->size(), Rat(0));
    for (int x : src->support()) {
        if (map[x] < 0 || map[x] >= tgt->size()) {
            rep.pass = false;
            rep.witness = "point map out of range at " + src->label(x);
            return rep;
        }
        push[map[x]] += src->weight(x);
    }
    for (int y = 0; y < tgt->size(); ++y)
        if (push[y] != tgt->weight(y)) {
            rep.pass = false;
            rep.witness = "pushforward differs at " + tgt->label(y) + ": " +
                          rat_to_string(push[y]) + " vs " + rat_to_string(tgt->weight(y));
            return rep;
        }
    for (size_t k = 0; k < pairs.size(); ++k) {
        const Perm& sp = *pairs[k].first;
        const Perm& tp = *pairs[k].second;
        for (int x : src->support())
            if (map[sp[x]] != tp[map[x]]) {
                rep.pass = false;
                rep.witness = "equivariance fails at point " + src->label(x) +
                              (k < tags.size() ? " for " + tags[k] : "");
                return rep;
            }
    }
    return rep;
}

FactorReport validate_factor(const FactorMap& pi) {
    return validate_factor(pi.source, pi.target, pi.map);
}

FactorReport validate_factor(const GdSystem& src, const GdSystem& tgt, const std::vector<int>& map) {
    if (src.lazy() != tgt.lazy()) return {false, "mode mismatch"};
    if (src.d() != tgt.d()) return {false, "arity mismatch"};
    std::vector<std::pair<const Perm*, const Perm*>> pairs;
    std::vector<std::string> tags;
    for (int i = 1; i <= src.d(); ++i) {
        if (src.lazy()) {
            pairs.emplace_back(&src.lazy_gen(i), &tgt.lazy_gen(i));
            tags.push_back("action " + std::to_string(i));
        } else {
            if (src.group()->size() != tgt.group()->size()) return {false, "group mismatch"};
            for (int g = 0; g < src.group()->size(); ++g) {
                pairs.emplace_back(&src.action(i, g), &tgt.action(i, g));
                tags.push_back("action " + std::to_string(i) + " at " + src.group()->name(g));
            }
        }
    }
    return validate_point_factor(src.space(), tgt.space(), map, pairs, tags);
}

FactorReport validate_factor(const GSpace& src, const GSpace& tgt, const std::vector<int>& map) {
    if (src.group->size() != tgt.group->size()) return {false, "group mismatch"};
    std::vector<std::pair<const Perm*, const Perm*>> pairs;
    std::vector<std::string> tags;
    for (int g = 0; g < src.group->size(); ++g) {
        pairs.emplace_back(&src.act[g], &tgt.act[g]);
        tags.push_back("element " + src.group->name(g));
    }
    return validate_point_factor(src.space, tgt.space, map, pairs, tags);
}

FactorReport validate_factor(const HSpace& src, const HSpace& tgt, const std::vector<int>& map) {
    if (src.sub.elems() != tgt.sub.elems()) return {false, "subgroup mismatch"};
    std::vector<std::pair<const Perm*, const Perm*>> pairs;
    std::vector<std::string> tags;
    for (size_t k = 0; k < src.act.size(); ++k) {
        pairs.emplace_back(&src.act[k], &tgt.act[k]);
        tags.push_back("element " + src.sub.ambient()->name(src.sub.elems()[k]));
    }
    return validate_point_factor(src.space, tgt.space, map, pairs, tags);
}

SigmaAlg orbit_sigma(const SpacePtr& space, const std::vector<Perm>& gens) {
    const int n = space->size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Perm& p : gens) {
        if (!is_permutation(p, n)) throw Error("orbit_sigma: invalid permutation");
        for (int x : space->support()) {
            int a = find(x), b = find(p[x]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<int> ids(n, -1);
    for (int x : space->support()) ids[x] = find(x);
    return SigmaAlg::from_cell_ids(space, ids);
}

SigmaAlg invariant_sigma(const GdSystem& s, const Subgroup& h) {
    if (s.lazy()) throw Error("invariant_sigma: lazy system takes windows, not subgroups");
    const GroupPtr& gd = h.ambient();
    if (gd->exponent() != s.d())
        throw Error("invariant_sigma: subgroup does not live in G^d for this system");
    std::vector<Perm> perms;
    for (int g : h.gens()) perms.push_back(s.gd_perm(gd, g));
    return orbit_sigma(s.space(), perms);
}

SigmaAlg invariant_sigma_window(const GdSystem& s, int a, int b) {
    return orbit_sigma(s.space(), s.window_gens(a, b));
}

SigmaAlg phi_e(const GdSystem& s, const std::vector<int>& e) {
    if (e.empty()) throw Error("phi_e: empty index set");
    for (size_t i = 0; i + 1 < e.size(); ++i)
        if (e[i] >= e[i + 1]) throw Error("phi_e: indices must be strictly increasing");
    if (e.front() < 1 || e.back() > s.d()) throw Error("phi_e: index out of range");
    if (e.size() == 1) return SigmaAlg::singletons(s.space());
    std::vector<Perm> gens;
    for (size_t i = 0; i + 1 < e.size(); ++i) {
        auto w = s.window_gens(e[i] + 1, e[i + 1]);
        gens.insert(gens.end(), w.begin(), w.end());
    }
    return orbit_sigma(s.space(), gens);
}

SigmaAlg phi_upset(const GdSystem& s, const UpSet& family) {
    std::vector<SigmaAlg> parts;
    for (unsigned mask : family.minimal_antichain()) {
        auto e = mask_to_set(mask);
        if (e.size() >= 2) parts.push_back(phi_e(s, e));
    }
    return join_sigma(s.space(), parts);
}

SigmaAlg F_ij_sigma(const GdSystem& s, int i, int j) {
    if (i < 1 || j < i || j > s.d()) throw Error("F_ij_sigma: bad indices");
    std::vector<SigmaAlg> parts;
    for (int l = 0; l < i; ++l) parts.push_back(invariant_sigma_window(s, l + 1, i));
    for (int l = i + 1; l <= j; ++l) parts.push_back(invariant_sigma_window(s, i + 1, l));
    return join_sigma(s.space(), parts);
}

SigmaAlg delta_j_sigma(const GdSystem& s, const std::vector<int>& indices, int j) {
    const int k = static_cast<int>(indices.size());
    if (j < 1 || j > k) throw Error("delta_j_sigma: position out of range");
    for (int i = 0; i + 1 < k; ++i)
        if (indices[i] >= indices[i + 1]) throw Error("delta_j_sigma: indices must increase");
    if (indices.front() < 1 || indices.back() > s.d())
        throw Error("delta_j_sigma: index out of range");
    std::vector<SigmaAlg> parts;
    for (int l = 1; l < j; ++l)
        parts.push_back(invariant_sigma_window(s, indices[l - 1] + 1, indices[j - 1]));
    for (int l = j + 1; l <= k; ++l)
        parts.push_back(invariant_sigma_window(s, indices[j - 1] + 1, indices[l - 1]));
    return join_sigma(s.space(), parts);
}

InvarianceReport check_setwise_invariance(const SigmaAlg& sig, const std::vector<Perm>& perms) {
    InvarianceReport rep;
    for (size_t k = 0; k < perms.size(); ++k) {
        const Perm& p = perms[k];
        for (int c = 0; c < sig.cell_count(); ++c) {
            int target = sig.cell_of(p[sig.cell(c).front()]);
            for (int x : sig.cell(c))
                if (sig.cell_of(p[x]) != target) {
                    rep.pass = false;
                    rep.witness = "permutation " + std::to_string(k) + " splits cell " +
                                  std::to_string(c);
                    return rep;
                }
            if (sig.cell(c).size() != sig.cell(target).size()) {
                rep.pass = false;
                rep.witness = "permutation " + std::to_string(k) + " maps cell " +
                              std::to_string(c) + " into a larger cell";
                return rep;
            }
        }
    }
    return rep;
}

SigmaAlg image_sigma(const SigmaAlg& sig, const Perm& p) {
    const auto& base = sig.base();
    std::vector<int> ids(base->size(), -1);
    for (int c = 0; c < sig.cell_count(); ++c)
        for (int x : sig.cell(c)) ids[p[x]] = c;
    return SigmaAlg::from_cell_ids(base, ids);
}

}  // namespace ergolab
