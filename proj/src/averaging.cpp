#include "ergolab/averaging.hpp"

#include <numeric>
#include <ostream>

namespace ergolab {

FolnerKind folner_kind(const GdSystem& s) {
    return s.lazy() ? FolnerKind::IntegerBoxes : FolnerKind::FullGroup;
}

long long folner_size(const GdSystem& s, long long n) {
    if (s.lazy()) {
        if (n < 1) throw Error("folner_size: n must be positive");
        return n;
    }
    return s.group()->size();
}

namespace {

struct WindowTerm {
    int a, b;
    const Obs* f;
};

// Core evaluator: avg over the group (table) or over g in {0..n-1} (lazy) of
// prod_k f_k(T_{[a_k;b_k]}^g x), exactly.
Obs window_average(const GdSystem& s, const std::vector<WindowTerm>& terms, long long n) {
    const auto& space = s.space();
    for (const auto& t : terms) require_same_space(space, t.f->base(), "average");
    std::vector<GaussRat> vals(space->size());
    if (!s.lazy()) {
        const long long m = s.group()->size();
        std::vector<std::vector<Perm>> wins;
        wins.reserve(terms.size());
        for (const auto& t : terms) wins.push_back(s.window_table(t.a, t.b));
        for (int x : space->support()) {
            GaussRat acc;
            for (int g = 0; g < m; ++g) {
                GaussRat prod(1);
                for (size_t k = 0; k < terms.size(); ++k)
                    prod *= terms[k].f->value(wins[k][g][x]);
                acc += prod;
            }
            acc /= rat_of(m);
            vals[x] = std::move(acc);
        }
    } else {
        if (n < 1) throw Error("average: n must be positive");
        std::vector<Perm> gens;
        gens.reserve(terms.size());
        for (const auto& t : terms) gens.push_back(s.window_lazy_gen(t.a, t.b));
        for (int x : space->support()) {
            GaussRat acc;
            std::vector<int> y(terms.size(), x);
            for (long long g = 0; g < n; ++g) {
                GaussRat prod(1);
                for (size_t k = 0; k < terms.size(); ++k) prod *= terms[k].f->value(y[k]);
                acc += prod;
                for (size_t k = 0; k < terms.size(); ++k) y[k] = gens[k][y[k]];
            }
            acc /= rat_of(n);
            vals[x] = std::move(acc);
        }
    }
    return Obs(space, std::move(vals));
}

long long window_period(const GdSystem& s, const std::vector<WindowTerm>& terms) {
    if (!s.lazy()) return 1;
    long long p = 1;
    for (const auto& t : terms) p = std::lcm(p, perm_order(s.window_lazy_gen(t.a, t.b)));
    return p;
}

std::vector<WindowTerm> lambda_terms(const GdSystem& s, const std::vector<Obs>& fs) {
    if (static_cast<int>(fs.size()) != s.d())
        throw Error("lambda_n: needs exactly d observables");
    std::vector<WindowTerm> terms;
    for (int i = 1; i <= s.d(); ++i) terms.push_back({1, i, &fs[i - 1]});
    return terms;
}

std::vector<WindowTerm> lambda_j_terms(const GdSystem& s, const std::vector<Obs>& fs, int j) {
    if (j < 1 || j > s.d()) throw Error("lambda_j_n: j out of range");
    if (static_cast<int>(fs.size()) != j)
        throw Error("lambda_j_n: needs exactly j observables");
    std::vector<WindowTerm> terms;
    const int start = s.d() - j + 1;
    for (int i = start; i <= s.d(); ++i) terms.push_back({start, i, &fs[i - start]});
    return terms;
}

std::vector<WindowTerm> hat_lambda_terms(const GdSystem& s, const std::vector<Obs>& fs, int j) {
    if (j < 1 || j > s.d()) throw Error("hat_lambda_j_n: j out of range");
    if (static_cast<int>(fs.size()) != j)
        throw Error("hat_lambda_j_n: needs exactly j observables");
    std::vector<WindowTerm> terms;
    for (int i = 1; i <= j; ++i) terms.push_back({1, i, &fs[i - 1]});
    return terms;
}

}  // namespace

Obs lambda_n(const GdSystem& s, const std::vector<Obs>& fs, long long n) {
    return window_average(s, lambda_terms(s, fs), n);
}

Obs lambda_j_n(const GdSystem& s, const std::vector<Obs>& fs, int j, long long n) {
    return window_average(s, lambda_j_terms(s, fs, j), n);
}

Obs hat_lambda_j_n(const GdSystem& s, const std::vector<Obs>& fs, int j, long long n) {
    return window_average(s, hat_lambda_terms(s, fs, j), n);
}

Obs lambda_limit(const GdSystem& s, const std::vector<Obs>& fs) {
    auto terms = lambda_terms(s, fs);
    return window_average(s, terms, window_period(s, terms));
}

Obs lambda_j_limit(const GdSystem& s, const std::vector<Obs>& fs, int j) {
    auto terms = lambda_j_terms(s, fs, j);
    return window_average(s, terms, window_period(s, terms));
}

Obs hat_lambda_j_limit(const GdSystem& s, const std::vector<Obs>& fs, int j) {
    auto terms = hat_lambda_terms(s, fs, j);
    return window_average(s, terms, window_period(s, terms));
}

long long lambda_period(const GdSystem& s) {
    if (!s.lazy()) return 1;
    long long p = 1;
    for (int i = 1; i <= s.d(); ++i) p = std::lcm(p, perm_order(s.window_lazy_gen(1, i)));
    return p;
}

Coupling joining_n(const GdSystem& s, long long n) {
    const auto& space = s.space();
    const int d = s.d();
    std::map<std::vector<int>, Rat> mass;
    if (!s.lazy()) {
        const long long m = s.group()->size();
        std::vector<std::vector<Perm>> wins;
        for (int i = 1; i <= d; ++i) wins.push_back(s.window_table(1, i));
        Rat unit = rat_frac(1, m);
        for (int g = 0; g < m; ++g)
            for (int x : space->support()) {
                std::vector<int> t(d);
                for (int i = 0; i < d; ++i) t[i] = wins[i][g][x];
                mass[t] += space->weight(x) * unit;
            }
    } else {
        if (n < 1) throw Error("joining_n: n must be positive");
        std::vector<Perm> gens;
        for (int i = 1; i <= d; ++i) gens.push_back(s.window_lazy_gen(1, i));
        Rat unit(1, 1);
        unit /= rat_of(n);
        for (int x : space->support()) {
            std::vector<int> t(d, x);
            for (long long g = 0; g < n; ++g) {
                mass[t] += space->weight(x) * unit;
                for (int i = 0; i < d; ++i) t[i] = gens[i][t[i]];
            }
        }
    }
    return Coupling(std::vector<SpacePtr>(d, space), std::move(mass));
}

Coupling limit_joining(const GdSystem& s) { return joining_n(s, lambda_period(s)); }

Rat recurrence_average_n(const GdSystem& s, const std::vector<int>& a_set, long long n) {
    const auto& space = s.space();
    std::vector<char> in(space->size(), 0);
    for (int p : a_set) in[p] = 1;
    Rat acc(0);
    if (!s.lazy()) {
        const long long m = s.group()->size();
        std::vector<std::vector<Perm>> wins;
        for (int i = 1; i <= s.d(); ++i) wins.push_back(s.window_table(1, i));
        for (int g = 0; g < m; ++g)
            for (int x : space->support()) {
                bool hit = true;
                for (int i = 0; i < s.d() && hit; ++i) hit = in[wins[i][g][x]];
                if (hit) acc += space->weight(x);
            }
        acc /= rat_of(m);
    } else {
        if (n < 1) throw Error("recurrence_average_n: n must be positive");
        std::vector<Perm> gens;
        for (int i = 1; i <= s.d(); ++i) gens.push_back(s.window_lazy_gen(1, i));
        for (int x : space->support()) {
            std::vector<int> y(s.d(), x);
            for (long long g = 0; g < n; ++g) {
                bool hit = true;
                for (int i = 0; i < s.d() && hit; ++i) hit = in[y[i]];
                if (hit) acc += space->weight(x);
                for (int i = 0; i < s.d(); ++i) y[i] = gens[i][y[i]];
            }
        }
        acc /= rat_of(n);
    }
    return acc;
}

Rat recurrence_average_limit(const GdSystem& s, const std::vector<int>& a_set) {
    return recurrence_average_n(s, a_set, lambda_period(s));
}

RecurrenceSet recurrence_positive_set(const GdSystem& s, const std::vector<int>& a_set) {
    const auto& space = s.space();
    std::vector<char> in(space->size(), 0);
    for (int p : a_set) in[p] = 1;
    RecurrenceSet out;
    out.window = s.lazy() ? lambda_period(s) : s.group()->size();
    std::vector<std::vector<Perm>> wins;
    std::vector<Perm> gens;
    if (!s.lazy())
        for (int i = 1; i <= s.d(); ++i) wins.push_back(s.window_table(1, i));
    else
        for (int i = 1; i <= s.d(); ++i) gens.push_back(s.window_lazy_gen(1, i));
    std::vector<std::vector<int>> cursor;
    if (s.lazy()) {
        cursor.assign(space->support().size(), {});
        for (size_t k = 0; k < space->support().size(); ++k)
            cursor[k].assign(s.d(), space->support()[k]);
    }
    for (long long g = 0; g < out.window; ++g) {
        Rat mass(0);
        for (size_t k = 0; k < space->support().size(); ++k) {
            int x = space->support()[k];
            bool hit = true;
            for (int i = 0; i < s.d() && hit; ++i)
                hit = in[s.lazy() ? cursor[k][i] : wins[i][static_cast<int>(g)][x]];
            if (hit) mass += space->weight(x);
        }
        if (mass > 0) out.positive_g.push_back(g);
        if (s.lazy())
            for (auto& y : cursor)
                for (int i = 0; i < s.d(); ++i) y[i] = gens[i][y[i]];
    }
    out.density = Rat(mpz_class(static_cast<long>(out.positive_g.size())),
                      mpz_class(static_cast<long>(out.window)));
    out.density.canonicalize();
    return out;
}

AverageTrajectory lambda_trajectory(const GdSystem& s, const std::vector<Obs>& fs, long long n_max) {
    AverageTrajectory traj;
    traj.functional = "lambda";
    for (long long n = 1; n <= n_max; ++n) {
        traj.ns.push_back(n);
        traj.values.push_back(lambda_n(s, fs, n));
    }
    return traj;
}

void write_trajectory_csv(std::ostream& os, const AverageTrajectory& traj) {
    os << "n,point,real,imag\n";
    for (size_t k = 0; k < traj.ns.size(); ++k) {
        const Obs& v = traj.values[k];
        for (int p = 0; p < v.base()->size(); ++p)
            os << traj.ns[k] << "," << v.base()->label(p) << ","
               << rat_to_string(v.value(p).re) << "," << rat_to_string(v.value(p).im) << "\n";
    }
}

GdSystem to_table_system(const GdSystem& s) {
    if (!s.lazy()) return s;
    long long order = 1;
    for (int i = 1; i <= s.d(); ++i) order = std::lcm(order, perm_order(s.lazy_gen(i)));
    GroupPtr zn = Group::cyclic(static_cast<int>(order));
    std::vector<std::vector<Perm>> acts(s.d());
    for (int i = 1; i <= s.d(); ++i) {
        acts[i - 1].resize(order);
        acts[i - 1][0] = identity_perm(s.points());
        for (long long k = 1; k < order; ++k)
            acts[i - 1][k] = compose(s.lazy_gen(i), acts[i - 1][k - 1]);
    }
    return GdSystem::from_actions(s.space(), std::move(zn), std::move(acts));
}

}  // namespace ergolab
