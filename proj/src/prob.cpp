#include "ergolab/prob.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ergolab {

ProbSpace::ProbSpace(std::vector<std::string> labels, std::vector<Rat> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
    if (labels_.size() != weights_.size())
        throw Error("probability space: label/weight count mismatch");
    if (labels_.empty()) throw Error("probability space: no points");
    for (Rat& w : weights_) w.canonicalize();
    Rat total(0);
    for (size_t p = 0; p < weights_.size(); ++p) {
        if (weights_[p] < 0)
            throw Error("probability space: negative weight at point " + labels_[p]);
        if (weights_[p] > 0) support_.push_back(static_cast<int>(p));
        total += weights_[p];
    }
    if (total != 1) throw Error("probability space: weights sum to " + rat_to_string(total));
    if (support_.empty()) throw Error("probability space: empty support");
    for (size_t p = 0; p < labels_.size(); ++p) {
        if (!index_.emplace(labels_[p], static_cast<int>(p)).second)
            throw Error("probability space: duplicate point label '" + labels_[p] + "'");
    }
}

SpacePtr ProbSpace::make(std::vector<std::string> labels, std::vector<Rat> weights) {
    return std::make_shared<const ProbSpace>(std::move(labels), std::move(weights));
}

SpacePtr ProbSpace::uniform(std::vector<std::string> labels) {
    size_t n = labels.size();
    if (n == 0) throw Error("uniform space: no points");
    std::vector<Rat> w(n, Rat(1, static_cast<unsigned long>(n)));
    return make(std::move(labels), std::move(w));
}

SpacePtr ProbSpace::uniform(int n, const std::string& prefix) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
    return uniform(std::move(labels));
}

int ProbSpace::index_of(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : it->second;
}

bool ProbSpace::same_as(const ProbSpace& o) const {
    return this == &o || (labels_ == o.labels_ && weights_ == o.weights_);
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
    return a && b && (a == b || a->same_as(*b));
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* where) {
    if (!same_space(a, b)) throw Error(std::string(where) + ": mismatched base spaces");
}

namespace {

// Sorts points within cells and cells by minimal point, the canonical order.
std::vector<std::vector<int>> canonicalize_cells(std::vector<std::vector<int>> cells) {
    for (auto& c : cells) std::sort(c.begin(), c.end());
    std::sort(cells.begin(), cells.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  return a.front() < b.front();
              });
    return cells;
}

}  // namespace

SigmaAlg::SigmaAlg(SpacePtr base, std::vector<std::vector<int>> cells)
    : base_(std::move(base)), cells_(canonicalize_cells(std::move(cells))) {
    if (!base_) throw Error("sigma-algebra: null base space");
    cell_of_.assign(base_->size(), -1);
    for (size_t c = 0; c < cells_.size(); ++c) {
        if (cells_[c].empty()) throw Error("sigma-algebra: empty cell");
        for (int p : cells_[c]) {
            if (p < 0 || p >= base_->size()) throw Error("sigma-algebra: point out of range");
            if (!base_->in_support(p))
                throw Error("sigma-algebra: zero-weight point " + base_->label(p) +
                            " in a cell (null points belong to the null cell)");
            if (cell_of_[p] != -1) throw Error("sigma-algebra: point covered twice");
            cell_of_[p] = static_cast<int>(c);
        }
    }
    for (int p : base_->support())
        if (cell_of_[p] == -1)
            throw Error("sigma-algebra: support point " + base_->label(p) + " not covered");
}

SigmaAlg SigmaAlg::singletons(SpacePtr base) {
    std::vector<std::vector<int>> cells;
    for (int p : base->support()) cells.push_back({p});
    return SigmaAlg(std::move(base), std::move(cells));
}

SigmaAlg SigmaAlg::trivial(SpacePtr base) {
    std::vector<std::vector<int>> cells{base->support()};
    return SigmaAlg(std::move(base), std::move(cells));
}

SigmaAlg SigmaAlg::from_cell_ids(SpacePtr base, const std::vector<int>& ids) {
    if (static_cast<int>(ids.size()) != base->size())
        throw Error("sigma-algebra: cell-id vector has wrong length");
    std::map<int, std::vector<int>> groups;
    for (int p : base->support()) groups[ids[p]].push_back(p);
    std::vector<std::vector<int>> cells;
    for (auto& [id, pts] : groups) cells.push_back(std::move(pts));
    return SigmaAlg(std::move(base), std::move(cells));
}

Rat SigmaAlg::cell_weight(int c) const {
    Rat w(0);
    for (int p : cells_[c]) w += base_->weight(p);
    return w;
}

bool SigmaAlg::refines(const SigmaAlg& coarser) const {
    if (!same_space(base_, coarser.base_)) return false;
    for (const auto& cell : cells_) {
        int target = coarser.cell_of(cell.front());
        for (int p : cell)
            if (coarser.cell_of(p) != target) return false;
    }
    return true;
}

SigmaAlg join_sigma(const SpacePtr& base, const std::vector<SigmaAlg>& parts) {
    if (parts.empty()) return SigmaAlg::trivial(base);
    for (const auto& s : parts) require_same_space(base, s.base(), "join_sigma");
    // Points sharing every part's cell land in the same joined cell.
    std::map<std::vector<int>, std::vector<int>> groups;
    for (int p : base->support()) {
        std::vector<int> key;
        key.reserve(parts.size());
        for (const auto& s : parts) key.push_back(s.cell_of(p));
        groups[key].push_back(p);
    }
    std::vector<std::vector<int>> cells;
    cells.reserve(groups.size());
    for (auto& [key, pts] : groups) cells.push_back(std::move(pts));
    return SigmaAlg(base, std::move(cells));
}

SigmaAlg join_sigma(const std::vector<SigmaAlg>& parts) {
    if (parts.empty()) throw Error("join_sigma: empty list without a base space");
    return join_sigma(parts.front().base(), parts);
}

Obs::Obs(SpacePtr base, std::vector<GaussRat> values)
    : base_(std::move(base)), values_(std::move(values)) {
    if (!base_) throw Error("observable: null base space");
    if (static_cast<int>(values_.size()) != base_->size())
        throw Error("observable: value count does not match point count");
    for (GaussRat& v : values_) {
        v.re.canonicalize();
        v.im.canonicalize();
    }
}

Obs Obs::constant(SpacePtr base, const GaussRat& v) {
    std::vector<GaussRat> vals(base->size(), v);
    return Obs(std::move(base), std::move(vals));
}

Obs Obs::indicator(SpacePtr base, const std::vector<int>& points) {
    std::vector<GaussRat> vals(base->size());
    for (int p : points) {
        if (p < 0 || p >= base->size()) throw Error("indicator: point out of range");
        vals[p] = GaussRat(1);
    }
    return Obs(std::move(base), std::move(vals));
}

Obs Obs::conj() const {
    std::vector<GaussRat> vals;
    vals.reserve(values_.size());
    for (const auto& v : values_) vals.push_back(v.conj());
    return Obs(base_, std::move(vals));
}

bool Obs::bounded_by_one() const {
    for (int p : base_->support())
        if (values_[p].norm_sq() > 1) return false;
    return true;
}

Obs operator+(const Obs& a, const Obs& b) {
    require_same_space(a.base_, b.base_, "obs +");
    std::vector<GaussRat> vals(a.values_);
    for (size_t p = 0; p < vals.size(); ++p) vals[p] += b.values_[p];
    return Obs(a.base_, std::move(vals));
}

Obs operator-(const Obs& a, const Obs& b) {
    require_same_space(a.base_, b.base_, "obs -");
    std::vector<GaussRat> vals(a.values_);
    for (size_t p = 0; p < vals.size(); ++p) vals[p] -= b.values_[p];
    return Obs(a.base_, std::move(vals));
}

Obs operator*(const Obs& a, const Obs& b) {
    require_same_space(a.base_, b.base_, "obs *");
    std::vector<GaussRat> vals(a.values_);
    for (size_t p = 0; p < vals.size(); ++p) vals[p] *= b.values_[p];
    return Obs(a.base_, std::move(vals));
}

Obs operator*(const GaussRat& c, const Obs& a) {
    std::vector<GaussRat> vals(a.values_);
    for (auto& v : vals) v *= c;
    return Obs(a.base_, std::move(vals));
}

bool operator==(const Obs& a, const Obs& b) {
    if (!same_space(a.base_, b.base_)) return false;
    // Values on null points never matter.
    for (int p : a.base_->support())
        if (a.values_[p] != b.values_[p]) return false;
    return true;
}

GaussRat integral(const Obs& f) {
    GaussRat acc;
    for (int p : f.base()->support()) acc += f.value(p) * f.base()->weight(p);
    return acc;
}

GaussRat l2_inner(const Obs& f, const Obs& g) {
    require_same_space(f.base(), g.base(), "l2_inner");
    GaussRat acc;
    for (int p : f.base()->support())
        acc += f.value(p) * g.value(p).conj() * f.base()->weight(p);
    return acc;
}

Rat l2_norm_sq(const Obs& f) {
    Rat acc(0);
    for (int p : f.base()->support()) acc += f.value(p).norm_sq() * f.base()->weight(p);
    return acc;
}

Obs cond_exp(const Obs& f, const SigmaAlg& phi) {
    require_same_space(f.base(), phi.base(), "cond_exp");
    const auto& base = phi.base();
    std::vector<GaussRat> cell_avg(phi.cell_count());
    for (int c = 0; c < phi.cell_count(); ++c) {
        GaussRat acc;
        for (int p : phi.cell(c)) acc += f.value(p) * base->weight(p);
        acc /= phi.cell_weight(c);
        cell_avg[c] = acc;
    }
    std::vector<GaussRat> vals(base->size());
    for (int p : base->support()) vals[p] = cell_avg[phi.cell_of(p)];
    return Obs(base, std::move(vals));
}

namespace {

std::string tuple_label(const std::vector<SpacePtr>& factors, const std::vector<int>& t) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) os << ",";
        os << factors[i]->label(t[i]);
    }
    os << ")";
    return os.str();
}

}  // namespace

Coupling::Coupling(std::vector<SpacePtr> factors, std::map<std::vector<int>, Rat> mass)
    : factors_(std::move(factors)), mass_(std::move(mass)) {
    if (factors_.empty()) throw Error("coupling: no factors");
    const size_t k = factors_.size();
    Rat total(0);
    std::vector<std::vector<Rat>> marg(k);
    for (size_t i = 0; i < k; ++i) marg[i].assign(factors_[i]->size(), Rat(0));
    for (auto& [key, val] : mass_) val.canonicalize();
    for (auto it = mass_.begin(); it != mass_.end();) {
        const auto& [t, m] = *it;
        if (t.size() != k) throw Error("coupling: tuple arity mismatch");
        if (m < 0) throw Error("coupling: negative mass");
        if (m == 0) {
            it = mass_.erase(it);  // keep the stored support sparse
            continue;
        }
        for (size_t i = 0; i < k; ++i) {
            if (t[i] < 0 || t[i] >= factors_[i]->size())
                throw Error("coupling: point out of range");
            marg[i][t[i]] += m;
        }
        total += m;
        ++it;
    }
    if (total != 1) throw Error("coupling: total mass " + rat_to_string(total));
    for (size_t i = 0; i < k; ++i)
        for (int p = 0; p < factors_[i]->size(); ++p)
            if (marg[i][p] != factors_[i]->weight(p))
                throw Error("coupling: marginal " + std::to_string(i) + " differs at point " +
                            factors_[i]->label(p) + " (" + rat_to_string(marg[i][p]) + " vs " +
                            rat_to_string(factors_[i]->weight(p)) + ")");
    std::vector<std::string> labels;
    std::vector<Rat> weights;
    tuples_.reserve(mass_.size());
    for (const auto& [t, m] : mass_) {
        tuples_.push_back(t);
        labels.push_back(tuple_label(factors_, t));
        weights.push_back(m);
    }
    product_ = ProbSpace::make(std::move(labels), std::move(weights));
}

Coupling Coupling::diagonal(const SpacePtr& base, int arity) {
    std::map<std::vector<int>, Rat> mass;
    for (int p : base->support()) mass[std::vector<int>(arity, p)] = base->weight(p);
    return Coupling(std::vector<SpacePtr>(arity, base), std::move(mass));
}

Rat Coupling::mass_of(const std::vector<int>& t) const {
    auto it = mass_.find(t);
    return it == mass_.end() ? Rat(0) : it->second;
}

std::vector<Rat> Coupling::marginal(int i) const {
    std::vector<Rat> out(factors_[i]->size(), Rat(0));
    for (const auto& [t, m] : mass_) out[t[i]] += m;
    return out;
}

Rat Coupling::rectangle_mass(const std::vector<std::vector<int>>& sets) const {
    if (static_cast<int>(sets.size()) != arity())
        throw Error("rectangle_mass: arity mismatch");
    std::vector<std::vector<char>> in(sets.size());
    for (size_t i = 0; i < sets.size(); ++i) {
        in[i].assign(factors_[i]->size(), 0);
        for (int p : sets[i]) in[i][p] = 1;
    }
    Rat acc(0);
    for (size_t idx = 0; idx < tuples_.size(); ++idx) {
        const auto& t = tuples_[idx];
        bool hit = true;
        for (size_t i = 0; i < t.size() && hit; ++i) hit = in[i][t[i]];
        if (hit) acc += product_->weight(static_cast<int>(idx));
    }
    return acc;
}

SigmaAlg Coupling::lift(int coord, const SigmaAlg& s) const {
    require_same_space(factors_[coord], s.base(), "coupling lift");
    std::vector<int> ids(product_->size());
    for (size_t idx = 0; idx < tuples_.size(); ++idx)
        ids[idx] = s.cell_of(tuples_[idx][coord]);
    return SigmaAlg::from_cell_ids(product_, ids);
}

Obs Coupling::lift(int coord, const Obs& f) const {
    require_same_space(factors_[coord], f.base(), "coupling lift");
    std::vector<GaussRat> vals(product_->size());
    for (size_t idx = 0; idx < tuples_.size(); ++idx) vals[idx] = f.value(tuples_[idx][coord]);
    return Obs(product_, std::move(vals));
}

Coupling rel_product(const SpacePtr& mu, const SigmaAlg& phi) {
    require_same_space(mu, phi.base(), "rel_product");
    std::map<std::vector<int>, Rat> mass;
    for (int c = 0; c < phi.cell_count(); ++c) {
        Rat cw = phi.cell_weight(c);
        for (int x : phi.cell(c))
            for (int y : phi.cell(c)) mass[{x, y}] = mu->weight(x) * mu->weight(y) / cw;
    }
    return Coupling({mu, mu}, std::move(mass));
}

RelIndepReport rel_indep_report(const SigmaAlg& s1, const SigmaAlg& s2, const SigmaAlg& phi) {
    require_same_space(s1.base(), s2.base(), "rel_indep_report");
    require_same_space(s1.base(), phi.base(), "rel_indep_report");
    RelIndepReport rep;
    rep.phi_refined_by_s1 = s1.refines(phi);
    rep.phi_refined_by_s2 = s2.refines(phi);
    const auto& base = phi.base();
    for (int c1 = 0; c1 < s1.cell_count(); ++c1) {
        Obs f = Obs::indicator(base, s1.cell(c1));
        Obs ef = cond_exp(f, phi);
        for (int c2 = 0; c2 < s2.cell_count(); ++c2) {
            Obs g = Obs::indicator(base, s2.cell(c2));
            GaussRat lhs = integral(f * g);
            GaussRat rhs = integral(ef * cond_exp(g, phi));
            if (lhs != rhs) {
                rep.pass = false;
                rep.witness = "cells (" + std::to_string(c1) + "," + std::to_string(c2) + ")";
                rep.lhs = lhs;
                rep.rhs = rhs;
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace ergolab
