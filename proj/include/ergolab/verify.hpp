#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ergolab/extensions.hpp"

namespace ergolab {

// Pass/Fail are hard verdicts for unconditional statements. HypothesisNotMet
// gates checks whose stated hypotheses fail on the given input. Informational
// records the observed outcome of a satedness-conditional diagnostic, which a
// finite system may legitimately violate.
enum class Verdict { Pass, Fail, HypothesisNotMet, Informational };

std::string verdict_name(Verdict v);

struct CheckReport {
    std::string name;
    std::string anchor;  // stable identifier of the statement being checked
    Verdict verdict = Verdict::Pass;
    bool holds = false;  // observed outcome when verdict == Informational
    std::string witness;
    std::vector<std::pair<std::string, std::string>> values;

    bool ok() const { return verdict != Verdict::Fail; }
};

// A family of observables indexed by the averaging scheme: by group element
// for table systems, by residue mod `period` for integer boxes.
struct ObsFamily {
    GroupPtr group;        // null for periodic integer families
    long long period = 0;  // used when group is null
    std::vector<Obs> u;
};

ObsFamily orbit_family(const GdSystem& s, const Obs& f, int a, int b);  // u_g = f o T_{[a;b]}^g

// The averaged second-moment estimate: the limit of ||avg_g u_g||^2 is at most
// the averaged absolute inner products of shifted pairs. Exact on both sides;
// witnesses equality for constant families.
CheckReport check_vdc(const ObsFamily& fam);

// (limit ||Lambda_n^{(j)}||_2^2)^{2^{j-1}} <= hk_integral at level j, exact,
// with equality at j = 1. fs are the system's d observables; the last j enter.
CheckReport check_cube_bound(const GdSystem& s, const std::vector<Obs>& fs, int j,
                           const TowerOptions& opt = {});
CheckReport check_cube_bound_with_tower(const CubeTower& t, const GdSystem& s,
                                      const std::vector<Obs>& fs, int j);

// Coordinates i and j of the limit coupling agree on Phi^e-measurable sets.
CheckReport check_diagonal_agreement(const GdSystem& s, const std::vector<int>& e,
                             const std::vector<int>& a_set);

// The product rearrangement: when each h_i is invariant for the window
// (i; d], the d-fold average of (f_1, ..., f_{d-1}, h_0...h_{d-1}) equals
// h_0 times the (d-1)-fold average of (f_1 h_1, ..., f_{d-1} h_{d-1}),
// for every n and at the limit.
CheckReport check_rearrangement(const GdSystem& s, const std::vector<Obs>& fs,
                                const std::vector<Obs>& hs, long long n_max = 4);

// The unconditional coupling facts (asserted) plus the satedness-conditional
// relative-independence diagnostics (informational).
std::vector<CheckReport> check_coupling_structure(const GdSystem& s, int max_d_oblique = 3);

// The removal implication in its one-set-per-coordinate special case, gated on
// the three structural hypotheses of the supplied family.
CheckReport check_removal_special(const SpacePtr& mu, const Coupling& theta,
                                  const std::map<unsigned, SigmaAlg>& psi,
                                  const std::vector<std::vector<int>>& sets);

// Positivity of the limit recurrence average for a positive-measure set, plus
// the displayed identity with the integrated functional average; emits the
// window elements with positive intersection mass and their density.
CheckReport check_recurrence_positivity(const GdSystem& s, const std::vector<int>& a_set);

// Diagnostic: replacing the last argument by its conditional expectation onto
// the trailing join leaves the limit average unchanged (conditional claim).
CheckReport check_characteristic_projection(const GdSystem& s, const std::vector<Obs>& fs);

// Builds the auxiliary non-diagonal action on the relative product over
// Phi^{i,j} and asserts its measure invariance, commutativity and first-
// coordinate factoriality (unconditional); reports the relative-independence
// conclusion informationally.
CheckReport check_pair_independence(const GdSystem& s, int i, int j,
                                const std::vector<std::vector<int>>& es);

// Diagnostic: conditioning one factor onto the join of the pairwise-union
// algebras does not change the integral against the remaining factors.
CheckReport check_join_conditioning(const GdSystem& s, const std::vector<int>& e0,
                               const std::vector<std::vector<int>>& es);

// The full battery for one system, reports in canonical name order.
std::vector<CheckReport> run_suite(const GdSystem& s, const TowerOptions& opt = {});

bool all_pass(const std::vector<CheckReport>& reports);
void write_report_json(std::ostream& os, const std::vector<CheckReport>& reports);
void write_report_human(std::ostream& os, const std::vector<CheckReport>& reports);

// Up-sets of [d] whose members all have at least two elements (the index
// families of the coupling-structure checks).
std::vector<UpSet> upsets_min2(int d);
UpSet angle_upset(int d, int i);  // supersets of {i} of size >= 2

}  // namespace ergolab
