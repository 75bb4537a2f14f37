#pragma once

#include <iosfwd>
#include <vector>

#include "ergolab/dynamics.hpp"

namespace ergolab {

// The two supported averaging schemes: F_n = G for finite table groups,
// F_n = {0,...,n-1} for the integers.
enum class FolnerKind { FullGroup, IntegerBoxes };

FolnerKind folner_kind(const GdSystem& s);
long long folner_size(const GdSystem& s, long long n);

// Multilinear averages over g of prod_i f_i(T_{[a_i; b_i]}^g x).
// lambda_n uses windows [1;i] over all d inputs; lambda_j_n the right-aligned
// windows [d-j+1; i] over the last j inputs; hat_lambda_j_n the windows [1;i]
// over the first j inputs. For table systems every n gives the same average.
Obs lambda_n(const GdSystem& s, const std::vector<Obs>& fs, long long n);
Obs lambda_j_n(const GdSystem& s, const std::vector<Obs>& fs, int j, long long n);
Obs hat_lambda_j_n(const GdSystem& s, const std::vector<Obs>& fs, int j, long long n);

// Exact limits: the full-group average, or the single-period average for
// integer boxes (the orbit data is periodic, so the Cesaro limit is reached).
Obs lambda_limit(const GdSystem& s, const std::vector<Obs>& fs);
Obs lambda_j_limit(const GdSystem& s, const std::vector<Obs>& fs, int j);
Obs hat_lambda_j_limit(const GdSystem& s, const std::vector<Obs>& fs, int j);

// The common period of the windows [1;i], i <= d (1 for table systems).
long long lambda_period(const GdSystem& s);

// Empirical couplings: mass mu(x)/|F_n| on (T_{[1;1]}^g x, ..., T_{[1;d]}^g x).
Coupling joining_n(const GdSystem& s, long long n);
Coupling limit_joining(const GdSystem& s);

// avg_g mu(T_{[1;1]}^{g^{-1}}A cap ... cap T_{[1;d]}^{g^{-1}}A); equals the
// integral of lambda_n(1_A,...,1_A).
Rat recurrence_average_n(const GdSystem& s, const std::vector<int>& a_set, long long n);
Rat recurrence_average_limit(const GdSystem& s, const std::vector<int>& a_set);

struct RecurrenceSet {
    long long window = 0;               // one period (or the group order)
    std::vector<long long> positive_g;  // g with positive intersection mass
    Rat density;
};
RecurrenceSet recurrence_positive_set(const GdSystem& s, const std::vector<int>& a_set);

struct AverageTrajectory {
    std::string functional;  // which average produced it
    std::vector<long long> ns;
    std::vector<Obs> values;
};

AverageTrajectory lambda_trajectory(const GdSystem& s, const std::vector<Obs>& fs, long long n_max);
// CSV columns: n, point, real, imag with exact "p/q" entries.
void write_trajectory_csv(std::ostream& os, const AverageTrajectory& traj);

// Lossless conversion of a LazyZ system to Z/N, N = lcm of the generator
// orders; full-group averages over Z/N agree with the integer-box limits.
GdSystem to_table_system(const GdSystem& s);

}  // namespace ergolab
