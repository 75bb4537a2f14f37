#include "ergolab/extensions.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace ergolab {

namespace {

// The extension measure for one choice of cross-section: tuple over the
// section -> (mass, source point). Tuples from distinct source points are
// distinct because the source is recoverable from any coordinate.
std::map<std::vector<int>, std::pair<Rat, int>> enumerate_measure(
    const GSpace& x, const HSpace& y, const std::vector<int>& beta, const CrossSection& c,
    long long max_support) {
    const auto& xs = x.space;
    const auto& ys = y.space;
    std::vector<std::vector<int>> fiber(xs->size());
    for (int p : ys->support()) fiber[beta[p]].push_back(p);

    const auto& reps = c.reps();
    const int ncells = static_cast<int>(reps.size());
    mpz_class estimate = 0;
    for (int xx : xs->support()) {
        mpz_class prod = 1;
        for (int ci = 0; ci < ncells; ++ci) {
            int xc = x.act[x.group->inv(reps[ci])][xx];
            prod *= static_cast<long>(fiber[xc].size());
        }
        estimate += prod;
        if (estimate > static_cast<long>(max_support))
            throw SizeError("co-induction support exceeds budget " +
                            std::to_string(max_support));
    }

    std::map<std::vector<int>, std::pair<Rat, int>> out;
    for (int xx : xs->support()) {
        std::vector<const std::vector<int>*> opts(ncells);
        std::vector<Rat> denom(ncells);
        for (int ci = 0; ci < ncells; ++ci) {
            int xc = x.act[x.group->inv(reps[ci])][xx];
            if (fiber[xc].empty())
                throw Error("co-induction internal error: empty fiber over a support point");
            opts[ci] = &fiber[xc];
            denom[ci] = xs->weight(xc);
        }
        std::vector<size_t> pick(ncells, 0);
        while (true) {
            std::vector<int> tuple(ncells);
            Rat mass = xs->weight(xx);
            for (int ci = 0; ci < ncells; ++ci) {
                int yy = (*opts[ci])[pick[ci]];
                tuple[ci] = yy;
                mass *= ys->weight(yy);
                mass /= denom[ci];
            }
            if (!out.emplace(std::move(tuple), std::make_pair(std::move(mass), xx)).second)
                throw Error("co-induction internal error: tuple produced twice");
            int pos = ncells - 1;
            while (pos >= 0 && ++pick[pos] == opts[pos]->size()) pick[pos--] = 0;
            if (pos < 0) break;
        }
    }
    return out;
}

void require_hspace_valid(const HSpace& y) {
    for (size_t k = 0; k < y.act.size(); ++k) {
        if (!is_permutation(y.act[k], y.space->size()))
            throw Error("co-induction: fiber action is not a permutation");
        for (int p = 0; p < y.space->size(); ++p)
            if (y.space->weight(y.act[k][p]) != y.space->weight(p))
                throw Error("co-induction: fiber action does not preserve the measure");
    }
    const auto& amb = y.sub.ambient();
    for (int a : y.sub.elems())
        for (int b : y.sub.gens()) {
            if (y.act_of(amb->mul(a, b)) != compose(y.act_of(a), y.act_of(b)))
                throw Error("co-induction: fiber action is not a homomorphism at (" +
                            amb->name(a) + "," + amb->name(b) + ")");
        }
}

}  // namespace

CoinducedExtension coinduce(const GSpace& x, const Subgroup& h, const HSpace& y,
                            const std::vector<int>& beta, const CoinduceOptions& opt) {
    if (h.ambient() != x.group) throw Error("co-induction: subgroup/group mismatch");
    if (y.sub.ambient() != x.group || y.sub.elems() != h.elems())
        throw Error("co-induction: fiber space carries a different subgroup");
    require_hspace_valid(y);
    {
        FactorReport rep = validate_factor(y, restrict_gspace(x, h), beta);
        if (!rep.pass) throw Error("co-induction: beta is not a factor map (" + rep.witness + ")");
    }

    CrossSection section(h, CrossSection::Pick::Minimal);
    auto measure = enumerate_measure(x, y, beta, section, opt.max_support);

    const auto& reps = section.reps();
    const int ncells = static_cast<int>(reps.size());
    const GroupPtr& g = x.group;

    CoinducedExtension ext{x, h, y, beta, section,
                           GSpace{},
                           {}, {}, {}, {}};
    std::map<std::vector<int>, int> index;
    {
        std::vector<std::string> labels;
        std::vector<Rat> weights;
        for (const auto& [tuple, mw] : measure) {
            index[tuple] = static_cast<int>(ext.tuples.size());
            ext.tuples.push_back(tuple);
            ext.base_of.push_back(mw.second);
            std::ostringstream os;
            os << "[";
            for (int ci = 0; ci < ncells; ++ci) {
                if (ci) os << "|";
                os << y.space->label(tuple[ci]);
            }
            os << "]";
            labels.push_back(os.str());
            weights.push_back(mw.first);
        }
        ext.ext.space = ProbSpace::make(std::move(labels), std::move(weights));
    }
    ext.ext.group = g;

    const int npts = static_cast<int>(ext.tuples.size());
    // tilde T^k shifts the full tuple by k^{-1} on the left; on section
    // coordinates: the new value at c is S^{h^{-1}} y_{c'} for k^{-1}c = c'h.
    ext.ext.act.resize(g->size());
    for (int k = 0; k < g->size(); ++k) {
        int kinv = g->inv(k);
        std::vector<std::pair<int, const Perm*>> moves(ncells);
        for (int ci = 0; ci < ncells; ++ci) {
            int gg = g->mul(kinv, reps[ci]);
            auto [cidx, hh] = section.decompose(gg);
            moves[ci] = {cidx, &y.act_of(g->inv(hh))};
        }
        Perm perm(npts);
        for (int p = 0; p < npts; ++p) {
            std::vector<int> img(ncells);
            for (int ci = 0; ci < ncells; ++ci)
                img[ci] = (*moves[ci].second)[ext.tuples[p][moves[ci].first]];
            auto it = index.find(img);
            if (it == index.end())
                throw Error("co-induction internal error: shifted tuple leaves the support");
            perm[p] = it->second;
        }
        ext.ext.act[k] = std::move(perm);
    }

    // alpha evaluates the full tuple at the identity; pi = beta after alpha.
    ext.alpha.resize(npts);
    ext.pi.resize(npts);
    {
        auto [cidx, he] = section.decompose(g->id());
        const Perm& shift = y.act_of(g->inv(he));
        for (int p = 0; p < npts; ++p) {
            ext.alpha[p] = shift[ext.tuples[p][cidx]];
            ext.pi[p] = beta[ext.alpha[p]];
        }
    }

    // Source consistency: every coordinate recovers the same source point.
    for (int p = 0; p < npts; ++p)
        for (int ci = 0; ci < ncells; ++ci)
            if (x.act[reps[ci]][beta[ext.tuples[p][ci]]] != ext.base_of[p])
                throw Error("co-induction internal error: inconsistent source point");

    if (opt.thorough) {
        // Conditional equivariance: shifting a tuple multiplies its source by
        // k and keeps the conditional mass given the source.
        for (int k = 0; k < g->size(); ++k) {
            const Perm& tk = ext.ext.act[k];
            for (int p = 0; p < npts; ++p) {
                int q = tk[p];
                int sx = ext.base_of[p];
                if (ext.base_of[q] != x.act[k][sx])
                    throw Error("co-induction internal error: source equivariance fails");
                if (ext.ext.space->weight(p) * x.space->weight(x.act[k][sx]) !=
                    ext.ext.space->weight(q) * x.space->weight(sx))
                    throw Error("co-induction internal error: conditional mass not preserved");
            }
        }
        // Homomorphism of the shift action on generator pairs.
        for (int a = 0; a < g->size(); ++a)
            for (int b : g->generating_set())
                if (ext.ext.act[g->mul(a, b)] != compose(ext.ext.act[a], ext.ext.act[b]))
                    throw Error("co-induction internal error: shift action not a homomorphism");
        // Coordinate marginal law: the coordinate at g = c h of the fiberwise
        // measure over source x is the fiber measure at T^{g^{-1}}x moved by
        // S^{h^{-1}}.
        std::vector<Rat> seen(y.space->size(), Rat(0));
        for (int gg = 0; gg < g->size(); ++gg) {
            auto [cidx, hh] = section.decompose(gg);
            const Perm& shift = y.act_of(g->inv(hh));
            for (int sx : x.space->support()) {
                std::fill(seen.begin(), seen.end(), Rat(0));
                for (int p = 0; p < npts; ++p)
                    if (ext.base_of[p] == sx)
                        seen[shift[ext.tuples[p][cidx]]] += ext.ext.space->weight(p);
                int xg = x.act[g->inv(gg)][sx];
                for (int yy = 0; yy < y.space->size(); ++yy) {
                    Rat expect(0);
                    if (beta[yy] == xg && y.space->in_support(yy))
                        expect = y.space->weight(yy) * x.space->weight(sx) / x.space->weight(xg);
                    if (seen[yy] != expect)
                        throw Error("co-induction internal error: marginal law fails at element " +
                                    g->name(gg));
                }
            }
        }
        // Cross-section independence: rebuild with maximal representatives and
        // transport onto the minimal-representative coordinates.
        CrossSection other(h, CrossSection::Pick::Maximal);
        auto measure2 = enumerate_measure(x, y, beta, other, opt.max_support);
        std::map<std::vector<int>, Rat> transported;
        for (const auto& [tuple, mw] : measure2) {
            std::vector<int> t1(ncells);
            for (int ci = 0; ci < ncells; ++ci) {
                int c1 = reps[ci];
                int c2 = other.coset_rep(c1);
                int hh = g->mul(g->inv(c1), c2);  // c2 = c1 h
                t1[ci] = y.act_of(hh)[tuple[other.coset_index(c2)]];
            }
            transported[t1] += mw.first;
        }
        for (const auto& [tuple, mw] : measure)
            if (transported[tuple] != mw.first)
                throw Error("co-induction internal error: measure depends on the cross-section");
        if (transported.size() != measure.size())
            throw Error("co-induction internal error: cross-section supports differ");
    }

    {
        FactorReport rep = validate_factor(restrict_gspace(ext.ext, h), y, ext.alpha);
        if (!rep.pass)
            throw Error("co-induction internal error: alpha is not an H-factor map (" +
                        rep.witness + ")");
        rep = validate_factor(ext.ext, x, ext.pi);
        if (!rep.pass)
            throw Error("co-induction internal error: pi is not a factor map (" + rep.witness +
                        ")");
    }
    return ext;
}

namespace {

// Membership mask for one coset: all (h, A) constraints on that coset.
std::vector<char> coset_mask(const CoinducedExtension& ext, const CylinderSpec& spec, int ci) {
    std::vector<char> ok(ext.fiber.space->size(), 1);
    const auto& g = ext.base.group;
    for (const auto& con : spec) {
        if (con.coset_index != ci) continue;
        std::vector<char> in(ext.fiber.space->size(), 0);
        for (int p : con.set) in[p] = 1;
        const Perm& shift = ext.fiber.act_of(g->inv(con.h));
        for (int p = 0; p < ext.fiber.space->size(); ++p)
            if (!in[shift[p]]) ok[p] = 0;
    }
    return ok;
}

}  // namespace

Rat cylinder_mass(const CoinducedExtension& ext, const CylinderSpec& spec) {
    const int ncells = static_cast<int>(ext.section.reps().size());
    std::vector<std::vector<char>> masks;
    std::vector<int> which;
    for (int ci = 0; ci < ncells; ++ci) {
        bool constrained = false;
        for (const auto& con : spec) constrained |= con.coset_index == ci;
        if (constrained) {
            masks.push_back(coset_mask(ext, spec, ci));
            which.push_back(ci);
        }
    }
    Rat acc(0);
    for (size_t p = 0; p < ext.tuples.size(); ++p) {
        bool hit = true;
        for (size_t k = 0; k < which.size() && hit; ++k)
            hit = masks[k][ext.tuples[p][which[k]]];
        if (hit) acc += ext.ext.space->weight(static_cast<int>(p));
    }
    return acc;
}

Rat cylinder_mass_formula(const CoinducedExtension& ext, const CylinderSpec& spec) {
    const auto& g = ext.base.group;
    const auto& xs = ext.base.space;
    const auto& ys = ext.fiber.space;
    const int ncells = static_cast<int>(ext.section.reps().size());
    std::vector<std::vector<char>> masks;
    std::vector<int> which;
    for (int ci = 0; ci < ncells; ++ci) {
        bool constrained = false;
        for (const auto& con : spec) constrained |= con.coset_index == ci;
        if (constrained) {
            masks.push_back(coset_mask(ext, spec, ci));
            which.push_back(ci);
        }
    }
    std::vector<std::vector<int>> fiber(xs->size());
    for (int p : ys->support()) fiber[ext.beta[p]].push_back(p);
    Rat acc(0);
    for (int xx : xs->support()) {
        Rat prod = xs->weight(xx);
        for (size_t k = 0; k < which.size(); ++k) {
            int c = ext.section.reps()[which[k]];
            int xc = ext.base.act[g->inv(c)][xx];
            Rat cond(0);
            for (int yy : fiber[xc])
                if (masks[k][yy]) cond += ys->weight(yy);
            prod *= cond;
            prod /= xs->weight(xc);
        }
        acc += prod;
    }
    return acc;
}

const std::vector<int>& CubeTower::pi(int k, unsigned eta) const {
    if (k < 1 || k > depth()) throw Error("tower: level out of range");
    if (eta >= (1u << k)) throw Error("tower: eta has the wrong length");
    return levels[k - 1].pi_eta[eta];
}

CubeTower build_tower(const GdSystem& s, int depth, const TowerOptions& opt) {
    GdSystem base = s.lazy() ? to_table_system(s) : s;
    const int d = base.d();
    if (depth < 0 || depth > d) throw Error("tower: depth must lie in [0, d]");
    CubeTower t;
    t.base = std::move(base);
    t.gd = Group::power(t.base.group(), d);
    t.levels.reserve(depth);

    for (int j = 0; j < depth; ++j) {
        const int level = j + 1;
        const int m = d - j - 1;
        const GdSystem& prev = t.level_system(level - 1);
        try {
            SigmaAlg phi = invariant_sigma_window(prev, m + 1, d);
            Coupling theta = rel_product(prev.space(), phi);
            Subgroup h = subgroup_He(t.gd, {m, d});

            // The paired action on the relative-product support: the plain
            // restriction on the first coordinate, and on the second the
            // action with the trailing window collapsed into position m.
            HSpace z;
            z.space = theta.product_space();
            z.sub = h;
            const auto& tuples = theta.tuples();
            std::map<std::vector<int>, int> index;
            for (size_t i = 0; i < tuples.size(); ++i)
                index[tuples[i]] = static_cast<int>(i);
            std::vector<int> comps(d), collapsed(d);
            for (int mem : h.elems()) {
                for (int i = 1; i <= d; ++i) comps[i - 1] = t.gd->component(mem, i);
                for (int i = 1; i <= d; ++i)
                    collapsed[i - 1] = i < m ? comps[i - 1] : (m >= 1 ? comps[m - 1] : 0);
                Perm first = prev.gd_perm(comps);
                Perm second = prev.gd_perm(collapsed);
                Perm rz(tuples.size());
                for (size_t i = 0; i < tuples.size(); ++i) {
                    auto it = index.find({first[tuples[i][0]], second[tuples[i][1]]});
                    if (it == index.end())
                        throw Error("tower internal error: paired action leaves the support");
                    if (z.space->weight(it->second) != z.space->weight(static_cast<int>(i)))
                        throw Error("tower internal error: paired action moves mass");
                    rz[i] = it->second;
                }
                z.act.push_back(std::move(rz));
            }

            std::vector<int> xi0(tuples.size()), xi1(tuples.size());
            for (size_t i = 0; i < tuples.size(); ++i) {
                xi0[i] = tuples[i][0];
                xi1[i] = tuples[i][1];
            }
            HSpace prev_h = restrict_system(prev, h);
            {
                FactorReport rep = validate_factor(z, prev_h, xi0);
                if (!rep.pass)
                    throw Error("tower internal error: first projection fails (" + rep.witness +
                                ")");
            }
            // The second projection intertwines with the collapsed action.
            HSpace prev_tilde;
            prev_tilde.space = prev.space();
            prev_tilde.sub = h;
            for (int mem : h.elems()) {
                for (int i = 1; i <= d; ++i) comps[i - 1] = t.gd->component(mem, i);
                for (int i = 1; i <= d; ++i)
                    collapsed[i - 1] = i < m ? comps[i - 1] : (m >= 1 ? comps[m - 1] : 0);
                prev_tilde.act.push_back(prev.gd_perm(collapsed));
            }
            bool xi1_ok = validate_factor(z, prev_tilde, xi1).pass;

            CoinduceOptions copt;
            copt.max_support = opt.level_budget;
            copt.thorough = opt.thorough;
            CoinducedExtension coind = coinduce(as_gspace(prev, t.gd), h, z, xi0, copt);

            auto mode = coind.ext.space->size() <= 4000 ? GdSystem::Validation::Exhaustive
                                                        : GdSystem::Validation::Generators;
            GdSystem sys = gspace_to_system(coind.ext, d, mode);

            std::vector<int> alpha = coind.alpha;
            std::vector<int> xi = coind.pi;

            // pi maps: follow one xi0/xi1 hop, then the previous level's maps.
            std::vector<std::vector<int>> pi_eta(1u << level);
            const int npts = sys.points();
            for (unsigned eta = 0; eta < (1u << level); ++eta) {
                bool top = (eta >> (level - 1)) & 1u;
                unsigned rest = eta & ((1u << (level - 1)) - 1);
                std::vector<int>& out = pi_eta[eta];
                out.resize(npts);
                const std::vector<int>& hop = top ? xi1 : xi0;
                if (level == 1) {
                    for (int p = 0; p < npts; ++p) out[p] = hop[alpha[p]];
                } else {
                    const std::vector<int>& deeper = t.levels[level - 2].pi_eta[rest];
                    for (int p = 0; p < npts; ++p) out[p] = deeper[hop[alpha[p]]];
                }
            }
            // Every pi_eta pushes the level measure onto the base measure.
            for (unsigned eta = 0; eta < (1u << level); ++eta) {
                FactorReport rep =
                    validate_point_factor(sys.space(), t.base.space(), pi_eta[eta], {});
                if (!rep.pass)
                    throw Error("tower internal error: pi_eta pushforward fails (" + rep.witness +
                                ")");
            }
            // The all-zero map is the structure map.
            {
                std::vector<int> structure(npts);
                for (int p = 0; p < npts; ++p) {
                    int q = xi[p];
                    for (int back = level - 1; back >= 1; --back) q = t.levels[back - 1].xi[q];
                    structure[p] = q;
                }
                if (structure != pi_eta[0])
                    throw Error("tower internal error: structure map mismatch");
            }

            t.levels.push_back(TowerLevel{std::move(sys), std::move(h), std::move(theta),
                                          std::move(phi), std::move(z), std::move(xi0),
                                          std::move(xi1), std::move(coind), std::move(alpha),
                                          std::move(xi), std::move(pi_eta), xi1_ok});
        } catch (SizeError& e) {
            throw SizeError("tower level " + std::to_string(level) + ": " + e.what());
        }
    }
    return t;
}

Rat hk_integral(const CubeTower& t, int k, const Obs& f) {
    if (k < 1 || k > t.depth()) throw Error("hk_integral: level out of range");
    require_same_space(f.base(), t.base.space(), "hk_integral");
    const GdSystem& top = t.level_system(k);
    GaussRat acc;
    for (int p : top.space()->support()) {
        GaussRat prod(1);
        for (unsigned eta = 0; eta < (1u << k); ++eta) {
            GaussRat v = f.value(t.pi(k, eta)[p]);
            if (std::popcount(eta) & 1) v = v.conj();
            prod *= v;
        }
        acc += prod * top.space()->weight(p);
    }
    if (!acc.is_real() || acc.re < 0)
        throw Error("hk_integral internal error: value " + gauss_to_string(acc) +
                    " is not a nonnegative real");
    return acc.re;
}

Rat hk_seminorm_pow(const CubeTower& t, int k, const Obs& f) { return hk_integral(t, k, f); }

IntertwineReport verify_intertwine(const CubeTower& t, int k, unsigned eta) {
    IntertwineReport rep;
    if (k < 1 || k > t.depth()) throw Error("verify_intertwine: level out of range");
    if (eta >= (1u << k)) throw Error("verify_intertwine: eta out of range");
    const GdSystem& top = t.level_system(k);
    const GdSystem& base = t.base;
    const int d = base.d();
    const std::vector<int>& pi = t.pi(k, eta);
    const long long ng = base.group()->size();

    auto fail = [&](const std::string& what, int g, int p) {
        rep.pass = false;
        rep.witness = what + " fails at element " + base.group()->name(g) + ", point " +
                      top.space()->label(p);
    };

    if (eta != 0) {
        int l = 0;
        for (int i = 1; i <= k; ++i)
            if ((eta >> (i - 1)) & 1u) l = i;
        for (int g = 0; g < ng && rep.pass; ++g) {
            for (int i = 1; i < d - l && rep.pass; ++i)
                for (int p : top.space()->support())
                    if (pi[top.action(i, g)[p]] != base.action(i, g)[pi[p]]) {
                        fail("coordinate relation (i=" + std::to_string(i) + ")", g, p);
                        break;
                    }
            if (rep.pass && d - l >= 1) {
                auto stop = top.window_table(d - l, d - l);
                auto tbase = base.window_table(d - l, d);
                for (int p : top.space()->support())
                    if (pi[stop[g][p]] != tbase[g][pi[p]]) {
                        fail("collapsed window relation", g, p);
                        break;
                    }
            }
            if (rep.pass && d - l + 1 <= d) {
                auto stail = top.window_table(d - l + 1, d);
                for (int p : top.space()->support())
                    if (pi[stail[g][p]] != pi[p]) {
                        fail("trailing invariance", g, p);
                        break;
                    }
            }
        }
    }
    // Trailing-window equivariance for every j covering the support of eta.
    for (int j = 1; j <= std::min(k, d - 1) && rep.pass; ++j) {
        if (eta >> j) continue;  // requires eta_i = 0 for all i >= j+1
        auto stail = top.window_table(d - j, d);
        auto ttail = base.window_table(d - j, d);
        for (int g = 0; g < ng && rep.pass; ++g)
            for (int p : top.space()->support())
                if (pi[stail[g][p]] != ttail[g][pi[p]]) {
                    fail("trailing window equivariance (j=" + std::to_string(j) + ")", g, p);
                    break;
                }
    }
    return rep;
}

}  // namespace ergolab
