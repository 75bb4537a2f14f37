#include "ergolab/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace ergolab {

namespace {

std::vector<std::vector<int>> perms_of(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

std::shared_ptr<Group> Group::make_table(std::vector<std::string> names,
                                         std::vector<std::vector<int>> table,
                                         long long assoc_check_bound) {
    auto g = std::shared_ptr<Group>(new Group());
    const int n = static_cast<int>(names.size());
    if (n == 0) throw Error("group: no elements");
    if (static_cast<int>(table.size()) != n) throw Error("group: table has wrong row count");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n) throw Error("group: ragged table");
        for (int v : row)
            if (v < 0 || v >= n) throw Error("group: table entry out of range");
    }
    // Identity must be element 0 so that minimal coset representatives and the
    // power-group encoding agree on where 1_G lives.
    for (int a = 0; a < n; ++a)
        if (table[0][a] != a || table[a][0] != a)
            throw Error("group: element 0 is not an identity");
    if (n <= assoc_check_bound) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (table[table[a][b]][c] != table[a][table[b][c]])
                        throw Error("group: associativity fails at (" + names[a] + "," +
                                    names[b] + "," + names[c] + ")");
    }
    g->inv_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (table[a][b] == 0 && table[b][a] == 0) {
                g->inv_[a] = b;
                break;
            }
        if (g->inv_[a] == -1) throw Error("group: element " + names[a] + " has no inverse");
    }
    g->size_ = n;
    g->names_ = std::move(names);
    g->table_ = std::move(table);
    return g;
}

GroupPtr Group::from_table(std::vector<std::string> names, std::vector<std::vector<int>> table,
                           long long assoc_check_bound) {
    return make_table(std::move(names), std::move(table), assoc_check_bound);
}

GroupPtr Group::trivial() {
    auto g = make_table({"e"}, {{0}}, 512);
    g->descriptor_ = "trivial";
    return g;
}

GroupPtr Group::cyclic(int n) {
    if (n < 1) throw Error("cyclic group: n must be positive");
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a) {
        names.push_back(std::to_string(a));
        for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
    }
    auto g = make_table(std::move(names), std::move(table), 512);
    g->descriptor_ = "cyclic:" + std::to_string(n);
    return g;
}

GroupPtr Group::symmetric(int n) {
    if (n < 1 || n > 5) throw Error("symmetric group: supported n is 1..5");
    auto perms = perms_of(n);
    // Identity first, then the ambient order is lexicographic anyway.
    const int m = static_cast<int>(perms.size());
    std::map<std::vector<int>, int> idx;
    for (int i = 0; i < m; ++i) idx[perms[i]] = i;
    std::vector<std::string> names;
    for (const auto& p : perms) {
        std::string s;
        for (int v : p) s += static_cast<char>('0' + v);
        names.push_back(s);
    }
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            std::vector<int> c(n);
            for (int x = 0; x < n; ++x) c[x] = perms[a][perms[b][x]];
            table[a][b] = idx[c];
        }
    auto g = make_table(std::move(names), std::move(table), 512);
    g->descriptor_ = "symmetric:" + std::to_string(n);
    return g;
}

GroupPtr Group::dihedral(int n) {
    if (n < 1) throw Error("dihedral group: n must be positive");
    // Elements r^k (0..n-1) then s r^k (n..2n-1), with s r^k s = r^{-k}.
    const int m = 2 * n;
    auto code = [n](bool flip, int rot) { return (flip ? n : 0) + ((rot % n + n) % n); };
    std::vector<std::string> names;
    for (int k = 0; k < n; ++k) names.push_back("r" + std::to_string(k));
    for (int k = 0; k < n; ++k) names.push_back("s" + std::to_string(k));
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            bool fa = a >= n, fb = b >= n;
            int ra = a % n, rb = b % n;
            // (s^fa r^ra)(s^fb r^rb) = s^{fa+fb} r^{(fb? -ra : ra) + rb}
            table[a][b] = code(fa != fb, (fb ? -ra : ra) + rb);
        }
    auto g = make_table(std::move(names), std::move(table), 512);
    g->descriptor_ = "dihedral:" + std::to_string(n);
    return g;
}

GroupPtr Group::direct(const GroupPtr& a, const GroupPtr& b) {
    if (!a || !b) throw Error("direct product: null factor");
    const long long na = a->size(), nb = b->size();
    if (na * nb > 20000) throw SizeError("direct product: table too large");
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(na * nb, std::vector<int>(na * nb));
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) names.push_back("(" + a->name(x) + "," + b->name(y) + ")");
    auto code = [nb](int x, int y) { return static_cast<int>(x * nb + y); };
    for (int x1 = 0; x1 < na; ++x1)
        for (int y1 = 0; y1 < nb; ++y1)
            for (int x2 = 0; x2 < na; ++x2)
                for (int y2 = 0; y2 < nb; ++y2)
                    table[code(x1, y1)][code(x2, y2)] = code(a->mul(x1, x2), b->mul(y1, y2));
    return make_table(std::move(names), std::move(table), 64);
}

GroupPtr Group::power(GroupPtr base, int d, long long max_elements) {
    if (!base) throw Error("power group: null base");
    if (base->is_power()) throw Error("power group: base must be a table group");
    if (d < 1) throw Error("power group: d must be positive");
    long long sz = 1;
    for (int i = 0; i < d; ++i) {
        sz *= base->size();
        if (sz > max_elements)
            throw SizeError("power group: |G|^d exceeds bound " + std::to_string(max_elements));
    }
    if (d == 1) return base;
    auto g = std::shared_ptr<Group>(new Group());
    g->size_ = sz;
    g->base_ = std::move(base);
    g->exponent_ = d;
    return g;
}

int Group::mul(int a, int b) const {
    if (!is_power()) return table_[a][b];
    const int n = static_cast<int>(base_->size());
    int out = 0;
    long long pa = a, pb = b;
    long long scale = size_ / n;
    // Most-significant digit first keeps the loop in coordinate order.
    for (int i = 0; i < exponent_; ++i) {
        int ca = static_cast<int>(pa / scale), cb = static_cast<int>(pb / scale);
        pa %= scale;
        pb %= scale;
        out = out * n + base_->mul(ca, cb);
        scale /= n;
    }
    return out;
}

int Group::inv(int a) const {
    if (!is_power()) return inv_[a];
    const int n = static_cast<int>(base_->size());
    int out = 0;
    long long pa = a, scale = size_ / n;
    for (int i = 0; i < exponent_; ++i) {
        int ca = static_cast<int>(pa / scale);
        pa %= scale;
        out = out * n + base_->inv(ca);
        scale /= n;
    }
    return out;
}

std::string Group::name(int a) const {
    if (!is_power()) return names_[a];
    std::string s = "(";
    for (int i = 1; i <= exponent_; ++i) {
        if (i > 1) s += ",";
        s += base_->name(component(a, i));
    }
    return s + ")";
}

int Group::index_of(const std::string& name) const {
    if (!is_power()) {
        auto it = std::find(names_.begin(), names_.end(), name);
        return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
    }
    if (name.size() < 2 || name.front() != '(' || name.back() != ')') return -1;
    std::vector<int> comps;
    std::string body = name.substr(1, name.size() - 2);
    std::stringstream ss(body);
    std::string part;
    while (std::getline(ss, part, ',')) {
        int c = base_->index_of(part);
        if (c < 0) return -1;
        comps.push_back(c);
    }
    if (static_cast<int>(comps.size()) != exponent_) return -1;
    return from_components(comps);
}

int Group::component(int elem, int axis) const {
    if (!is_power()) {
        if (axis != 1) throw Error("component: not a power group");
        return elem;
    }
    const int n = static_cast<int>(base_->size());
    long long scale = size_ / n;
    long long p = elem;
    for (int i = 1; i < axis; ++i) {
        p %= scale;
        scale /= n;
    }
    return static_cast<int>(p / scale);
}

int Group::from_components(const std::vector<int>& comps) const {
    if (!is_power()) {
        if (comps.size() != 1) throw Error("from_components: not a power group");
        return comps[0];
    }
    if (static_cast<int>(comps.size()) != exponent_)
        throw Error("from_components: wrong arity");
    const int n = static_cast<int>(base_->size());
    long long out = 0;
    for (int c : comps) {
        if (c < 0 || c >= n) throw Error("from_components: component out of range");
        out = out * n + c;
    }
    return static_cast<int>(out);
}

int Group::embed_axis(int g, int axis) const {
    if (!is_power()) {
        if (axis != 1) throw Error("embed_axis: not a power group");
        return g;
    }
    std::vector<int> comps(exponent_, 0);
    comps[axis - 1] = g;
    return from_components(comps);
}

namespace {

// Fixpoint closure of a member set under the group product.
void close_under_mul(const Group& g, std::vector<char>& member) {
    const int n = static_cast<int>(g.size());
    std::vector<int> elems;
    for (int x = 0; x < n; ++x)
        if (member[x]) elems.push_back(x);
    bool changed = true;
    while (changed) {
        changed = false;
        const size_t count = elems.size();
        for (size_t i = 0; i < count; ++i)
            for (size_t j = 0; j < elems.size(); ++j) {
                int z = g.mul(elems[i], elems[j]);
                if (!member[z]) {
                    member[z] = 1;
                    elems.push_back(z);
                    changed = true;
                }
            }
    }
}

}  // namespace

std::vector<int> Group::generating_set() const {
    std::vector<char> known(size_, 0);
    known[0] = 1;
    std::vector<int> gens;
    for (int cand = 1; cand < size_; ++cand) {
        if (known[cand]) continue;
        gens.push_back(cand);
        known[cand] = 1;
        close_under_mul(*this, known);
    }
    if (gens.empty()) gens.push_back(0);
    return gens;
}

void Subgroup::validate() const {
    if (!ambient_) throw Error("subgroup: null ambient group");
    if (!member_[0]) throw Error("subgroup: missing identity");
    for (int a : elems_) {
        if (!member_[ambient_->inv(a)])
            throw Error("subgroup: not closed under inverse at " + ambient_->name(a));
        for (int b : elems_)
            if (!member_[ambient_->mul(a, b)])
                throw Error("subgroup: not closed under product at (" + ambient_->name(a) +
                            "," + ambient_->name(b) + ")");
    }
}

Subgroup Subgroup::from_members(GroupPtr ambient, std::vector<int> members) {
    Subgroup s;
    s.ambient_ = std::move(ambient);
    s.member_.assign(s.ambient_->size(), 0);
    for (int m : members) {
        if (m < 0 || m >= s.ambient_->size()) throw Error("subgroup: member out of range");
        s.member_[m] = 1;
    }
    for (int g = 0; g < s.ambient_->size(); ++g)
        if (s.member_[g]) s.elems_.push_back(g);
    s.gens_ = s.elems_;
    s.validate();
    return s;
}

Subgroup Subgroup::generated(GroupPtr ambient, std::vector<int> generators) {
    std::vector<char> member(ambient->size(), 0);
    member[0] = 1;
    for (int g : generators) {
        if (g < 0 || g >= ambient->size()) throw Error("subgroup: generator out of range");
        member[g] = 1;
        member[ambient->inv(g)] = 1;
    }
    close_under_mul(*ambient, member);
    std::vector<int> members;
    for (int g = 0; g < ambient->size(); ++g)
        if (member[g]) members.push_back(g);
    Subgroup s = from_members(std::move(ambient), members);
    s.gens_ = std::move(generators);
    if (s.gens_.empty()) s.gens_.push_back(0);
    return s;
}

Subgroup Subgroup::whole(GroupPtr ambient) {
    std::vector<int> all(ambient->size());
    std::iota(all.begin(), all.end(), 0);
    Subgroup s = from_members(std::move(ambient), all);
    s.gens_ = s.ambient_->generating_set();
    return s;
}

Subgroup Subgroup::trivial_in(GroupPtr ambient) { return from_members(std::move(ambient), {0}); }

int Subgroup::index_in(int ambient_elem) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), ambient_elem);
    if (it == elems_.end() || *it != ambient_elem) return -1;
    return static_cast<int>(it - elems_.begin());
}

bool Subgroup::subgroup_of(const Subgroup& other) const {
    if (ambient_ != other.ambient_ && ambient_->size() != other.ambient_->size()) return false;
    for (int g : elems_)
        if (!other.contains(g)) return false;
    return true;
}

namespace {

void require_pattern_set(const GroupPtr& gd, const std::vector<int>& e, const char* what) {
    if (!gd) throw Error("pattern subgroup: null group");
    const int d = gd->exponent();
    if (e.size() < 2) throw Error(std::string(what) + ": |e| must be at least 2");
    for (size_t s = 0; s + 1 < e.size(); ++s)
        if (e[s] >= e[s + 1]) throw Error(std::string(what) + ": e must be strictly increasing");
    if (e.front() < 0 || e.back() > d)
        throw Error(std::string(what) + ": indices must lie in {0,...,d}");
}

// Shared membership scan: for each element of G^d test a coordinate predicate.
template <typename Pred>
std::vector<int> filter_elements(const GroupPtr& gd, Pred pred) {
    std::vector<int> out;
    const int d = gd->exponent();
    std::vector<int> comps(d);
    for (int g = 0; g < gd->size(); ++g) {
        for (int i = 1; i <= d; ++i) comps[i - 1] = gd->component(g, i);
        if (pred(comps)) out.push_back(g);
    }
    return out;
}

bool he_pred(const std::vector<int>& comps, const std::vector<int>& e) {
    for (size_t s = 0; s + 1 < e.size(); ++s) {
        // 1-based coordinates e[s]+1 .. e[s+1] must agree.
        for (int l = e[s] + 1; l < e[s + 1]; ++l)
            if (comps[l - 1] != comps[l]) return false;
    }
    return true;
}

bool le_extra_pred(const std::vector<int>& comps, const std::vector<int>& e) {
    int lo = e.front(), hi = e.back();
    for (int l = 1; l <= static_cast<int>(comps.size()); ++l)
        if ((l <= lo || l > hi) && comps[l - 1] != 0) return false;
    return true;
}

}  // namespace

Subgroup subgroup_He(const GroupPtr& gd, const std::vector<int>& e) {
    require_pattern_set(gd, e, "subgroup_He");
    auto members = filter_elements(gd, [&](const std::vector<int>& c) { return he_pred(c, e); });
    return Subgroup::from_members(gd, members);
}

Subgroup subgroup_K(const GroupPtr& gd, int i, int j) {
    require_pattern_set(gd, {i, j}, "subgroup_K");
    auto members = filter_elements(gd, [&](const std::vector<int>& c) {
        for (int l = i + 1; l <= j; ++l)
            if (c[l - 1] != 0) return false;
        return true;
    });
    return Subgroup::from_members(gd, members);
}

Subgroup subgroup_Le(const GroupPtr& gd, const std::vector<int>& e) {
    require_pattern_set(gd, e, "subgroup_Le");
    auto members = filter_elements(gd, [&](const std::vector<int>& c) {
        return he_pred(c, e) && le_extra_pred(c, e);
    });
    return Subgroup::from_members(gd, members);
}

int block_embed(const GroupPtr& gd, int a, int b, int g) {
    const int d = gd->exponent();
    if (a < 0 || b > d || a >= b) throw Error("block_embed: bad window");
    std::vector<int> comps(d, 0);
    for (int l = a + 1; l <= b; ++l) comps[l - 1] = g;
    return gd->from_components(comps);
}

std::vector<int> le_generators(const GroupPtr& gd, const std::vector<int>& e) {
    require_pattern_set(gd, e, "le_generators");
    const GroupPtr base = gd->is_power() ? gd->base() : gd;
    std::vector<int> gens;
    for (size_t s = 0; s + 1 < e.size(); ++s)
        for (int g = 1; g < base->size(); ++g)
            gens.push_back(block_embed(gd, e[s], e[s + 1], g));
    if (gens.empty()) gens.push_back(0);
    return gens;
}

SubgroupFamilyReport check_subgroup_family(const GroupPtr& gd, const std::vector<int>& e,
                                         const std::vector<int>& a) {
    SubgroupFamilyReport rep;
    Subgroup he = subgroup_He(gd, e);
    Subgroup le = subgroup_Le(gd, e);
    Subgroup k = subgroup_K(gd, e.front(), e.back());

    rep.part1_pass = true;
    for (int x : le.elems()) {
        for (int y : k.elems()) {
            if (gd->mul(x, y) != gd->mul(y, x)) {
                rep.part1_pass = false;
                rep.part1_witness =
                    "(" + gd->name(x) + "," + gd->name(y) + ") do not commute";
                break;
            }
        }
        if (!rep.part1_pass) break;
    }
    if (rep.part1_pass) {
        // Elementwise commutation makes {l k} a subgroup, so the generated
        // subgroup is exactly the product set.
        std::vector<char> prod(gd->size(), 0);
        long long count = 0;
        bool inside = true;
        for (int x : le.elems())
            for (int y : k.elems()) {
                int z = gd->mul(x, y);
                inside = inside && he.contains(z);
                if (!prod[z]) {
                    prod[z] = 1;
                    ++count;
                }
            }
        if (!inside || count != he.size()) {
            rep.part1_pass = false;
            rep.part1_witness = "product set has order " + std::to_string(count) +
                                ", H_e has order " + std::to_string(he.size());
        }
    }

    bool a_in_e = std::includes(e.begin(), e.end(), a.begin(), a.end());
    if (a.size() >= 2 && a_in_e) {
        rep.part2_applies = true;
        Subgroup la = subgroup_Le(gd, a);
        rep.part2_pass = la.subgroup_of(le);
        if (!rep.part2_pass) rep.part2_witness = "L_a has an element outside L_e";

        // Part (3) hypothesis: e cap [min a; max a] = a.
        std::vector<int> cap;
        for (int v : e)
            if (v >= a.front() && v <= a.back()) cap.push_back(v);
        if (cap == a) {
            rep.part3_applies = true;
            rep.part3_pass = true;
            for (int h : he.elems()) {
                int hinv = gd->inv(h);
                for (int x : la.elems()) {
                    int conj = gd->mul(gd->mul(h, x), hinv);
                    if (!la.contains(conj)) {
                        rep.part3_pass = false;
                        rep.part3_witness = "conjugate of " + gd->name(x) + " by " +
                                            gd->name(h) + " leaves L_a";
                        break;
                    }
                }
                if (!rep.part3_pass) break;
            }
        } else {
            rep.note = "part (3) skipped: e cap [min a; max a] != a";
        }
    } else if (!a.empty()) {
        rep.note = "parts (2)-(3) skipped: a must satisfy a subset of e with |a| >= 2";
    }
    return rep;
}

CrossSection::CrossSection(const Subgroup& h, Pick pick) : group_(h.ambient()) {
    const int n = static_cast<int>(group_->size());
    rep_of_.assign(n, -1);
    index_of_rep_.assign(n, -1);
    for (int g = 0; g < n; ++g) {
        if (rep_of_[g] != -1) continue;
        int best = g;
        std::vector<int> coset;
        for (int x : h.elems()) coset.push_back(group_->mul(g, x));
        for (int c : coset) best = pick == Pick::Minimal ? std::min(best, c) : std::max(best, c);
        for (int c : coset) rep_of_[c] = best;
    }
    for (int g = 0; g < n; ++g)
        if (rep_of_[g] == g) {
            index_of_rep_[g] = static_cast<int>(reps_.size());
            reps_.push_back(g);
        }
    if (static_cast<long long>(reps_.size()) * h.size() != group_->size())
        throw Error("cross-section: representative count mismatch");
}

std::pair<int, int> CrossSection::decompose(int g) const {
    int c = rep_of_[g];
    return {index_of_rep_[c], group_->mul(group_->inv(c), g)};
}

UpSet::UpSet(int d, std::set<unsigned> members) : d_(d), members_(std::move(members)) {
    if (d < 0 || d > 20) throw Error("up-set: dimension out of range");
    unsigned full = (1u << d) - 1;
    for (unsigned m : members_) {
        if (m & ~full) throw Error("up-set: member outside the power set");
        // Upward closure: adding any one element stays inside.
        for (int i = 0; i < d; ++i)
            if (!(m & (1u << i)) && !members_.count(m | (1u << i)))
                throw Error("up-set: not upward closed");
    }
}

UpSet UpSet::generated(int d, const std::vector<unsigned>& gens) {
    unsigned full = (1u << d) - 1;
    std::set<unsigned> members;
    for (unsigned e : gens) {
        if (e & ~full) throw Error("up-set: generator outside the power set");
        // All supersets of e: iterate over subsets of the complement.
        unsigned comp = full & ~e;
        unsigned sub = comp;
        while (true) {
            members.insert(e | sub);
            if (sub == 0) break;
            sub = (sub - 1) & comp;
        }
    }
    return UpSet(d, std::move(members));
}

std::vector<unsigned> UpSet::minimal_antichain() const {
    std::vector<unsigned> out;
    for (unsigned m : members_) {
        bool minimal = true;
        for (unsigned o : members_)
            if (o != m && (o & m) == o) {
                minimal = false;
                break;
            }
        if (minimal) out.push_back(m);
    }
    return out;
}

UpSet upset_intersect(const UpSet& a, const UpSet& b) {
    if (a.dim() != b.dim()) throw Error("up-set intersect: dimension mismatch");
    std::set<unsigned> members;
    for (unsigned m : a.members())
        if (b.contains(m)) members.insert(m);
    return UpSet(a.dim(), std::move(members));
}

std::vector<int> mask_to_set(unsigned mask) {
    std::vector<int> out;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1) out.push_back(i + 1);
    return out;
}

unsigned set_to_mask(const std::vector<int>& set) {
    unsigned mask = 0;
    for (int v : set) {
        if (v < 1 || v > 31) throw Error("set_to_mask: element out of range");
        mask |= 1u << (v - 1);
    }
    return mask;
}

}  // namespace ergolab
