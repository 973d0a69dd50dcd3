#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <unordered_map>
#include <vector>

#include "rfisst/common.hpp"
#include "rfisst/gaussian_track.hpp"
#include "rfisst/mtt_core.hpp"
#include "rfisst/rng.hpp"

namespace rfisst {

using BigInt = boost::multiprecision::cpp_int;

/// Number of data associations of m measurements to M objects:
///   A_M = sum_n C(M,n) C(m,n) n!
/// Exact at any scale; the count reaches ~1e33 at the sizes where the
/// exhaustive method breaks.
inline BigInt count_associations(int m, int M) {
    if (m < 0 || M < 0) throw ConfigError("negative m or M");
    BigInt total = 0;
    BigInt term = 1;  // n = 0
    const int n_max = std::min(m, M);
    for (int n = 0; n <= n_max; ++n) {
        total += term;
        term = term * (M - n) * (m - n) / (n + 1);
    }
    return total;
}

/// m x (M+1) table of per-pair log-likelihoods; columns are tracks in a
/// per-scan randomized order, then the clutter column.
struct DataAssociationMatrix {
    Eigen::MatrixXd loglik;                 // m rows, M+1 columns
    std::vector<TrackLabel> track_labels;   // column -> track label
    std::vector<int> column_permutation;    // column -> index into the input track list

    int measurement_count() const { return static_cast<int>(loglik.rows()); }
    int track_count() const { return static_cast<int>(track_labels.size()); }
    int clutter_column() const { return track_count(); }
};

struct GateConfig {
    bool enabled = false;
    double mahalanobis2 = 25.0;
};

/// Fill the data-association matrix for one branch: entry (i, j) is the
/// marginal log-likelihood of measurement i under track j's predicted prior,
/// last column the clutter log-density. Track column order is randomized
/// (the numbering carries no meaning across scans); the permutation applied
/// is recorded.
template <class Urbg>
DataAssociationMatrix build_da_matrix(const std::vector<Track>& tracks,
                                      const std::vector<Vec2>& measurements,
                                      const MeasurementModel& meas,
                                      const std::function<double(const Vec2&)>& clutter_logdensity,
                                      Urbg& rng, const GateConfig& gate = {}) {
    const int M = static_cast<int>(tracks.size());
    const int m = static_cast<int>(measurements.size());
    DataAssociationMatrix da;
    da.column_permutation.resize(M);
    std::iota(da.column_permutation.begin(), da.column_permutation.end(), 0);
    std::shuffle(da.column_permutation.begin(), da.column_permutation.end(), rng);
    da.track_labels.resize(M);
    for (int j = 0; j < M; ++j) da.track_labels[j] = tracks[da.column_permutation[j]].label;
    da.loglik.resize(m, M + 1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < M; ++j) {
            const Track& t = tracks[da.column_permutation[j]];
            if (gate.enabled &&
                innovation_dist2(t, measurements[i], meas) > gate.mahalanobis2) {
                da.loglik(i, j) = kNegInf;
            } else {
                da.loglik(i, j) = measurement_loglik(t, measurements[i], meas);
            }
        }
        da.loglik(i, M) = clutter_logdensity(measurements[i]);
    }
    return da;
}

/// Assignment in column space: entry i is the column of measurement i
/// (track column 0..M-1, or M for clutter).
using ColumnAssignment = std::vector<int>;

/// Enumerate every valid one-to-one assignment of m measurements to M track
/// columns (unassigned measurements -> clutter), lexicographic on the
/// assignment vector with clutter ordered last. Yields exactly
/// count_associations(m, M) vectors.
template <class Fn>
void for_each_association(int m, int M, Fn&& fn) {
    ColumnAssignment cols(m, M);
    std::vector<char> used(M, 0);
    // lexicographic: track columns 0..M-1 sort before the clutter column M
    auto rec = [&](auto&& self, int row) -> void {
        if (row == m) {
            fn(static_cast<const ColumnAssignment&>(cols));
            return;
        }
        for (int j = 0; j < M; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            cols[row] = j;
            self(self, row + 1);
            used[j] = 0;
        }
        cols[row] = M;
        self(self, row + 1);
    };
    rec(rec, 0);
}

inline constexpr std::int64_t kDefaultEnumerationCap = 5'000'000;

/// Materialized enumeration, guarded by the association-count cap. Exceeding
/// the cap is the documented break condition of the exhaustive method.
inline std::vector<ColumnAssignment> enumerate_associations(
    int m, int M, std::int64_t cap = kDefaultEnumerationCap) {
    const BigInt count = count_associations(m, M);
    if (count > cap) {
        throw EnumerationCapError("exhaustive enumeration infeasible: " + count.str() +
                                  " associations exceed cap " + std::to_string(cap));
    }
    std::vector<ColumnAssignment> out;
    out.reserve(static_cast<std::size_t>(count));
    for_each_association(m, M, [&](const ColumnAssignment& a) { out.push_back(a); });
    return out;
}

/// Log transition prior log p_ij as a function of k, the number of
/// measurements associated to objects, for one birth/death branch:
///   p_ij = factor * pD^k (1-pD)^(N-k) / (C(m,k) k!) / Z
/// Z truncates the detection-count distribution to k <= min(m, N) so the
/// branch's priors sum to the branch factor for any m (for m >= N, Z = 1 and
/// this is exactly the paper form).
struct AssociationPrior {
    std::vector<double> log_p_by_k;

    AssociationPrior() = default;
    AssociationPrior(int m, int object_count, double pD, double log_branch_factor = 0.0) {
        if (pD < 0.0 || pD > 1.0) throw ConfigError("pD out of [0, 1]");
        const int N = object_count;
        const int k_max = std::min(m, N);
        // truncation mass Z = sum_{k<=k_max} C(N,k) pD^k (1-pD)^(N-k)
        double z = 0.0;
        for (int k = 0; k <= k_max; ++k) {
            double v = 1.0;
            for (int i = 0; i < k; ++i) v *= static_cast<double>(N - i) / (i + 1);
            v *= std::pow(pD, k) * std::pow(1.0 - pD, N - k);
            z += v;
        }
        log_p_by_k.assign(k_max + 1, kNegInf);
        if (z <= 0.0) return;  // impossible branch: pD = 1 with fewer returns than objects
        for (int k = 0; k <= k_max; ++k) {
            double pd_term;
            if (pD == 0.0) {
                pd_term = (k == 0) ? 0.0 : kNegInf;
            } else if (pD == 1.0) {
                pd_term = (k == N) ? 0.0 : kNegInf;
            } else {
                pd_term = k * std::log(pD) + (N - k) * std::log1p(-pD);
            }
            double log_comb = 0.0;  // log(C(m,k) k!) = log(m!/(m-k)!)
            for (int i = 0; i < k; ++i) log_comb += std::log(static_cast<double>(m - i));
            log_p_by_k[k] = log_branch_factor + pd_term - log_comb - std::log(z);
        }
    }

    double log_p(int k) const {
        if (k < 0 || k >= static_cast<int>(log_p_by_k.size())) return kNegInf;
        return log_p_by_k[k];
    }
};

/// Unnormalized MCMC target: log p_ij + sum of looked-up matrix entries.
inline double association_logscore(const ColumnAssignment& cols,
                                   const DataAssociationMatrix& da,
                                   const AssociationPrior& prior) {
    int k = 0;
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(cols.size()); ++i) {
        if (cols[i] != da.clutter_column()) ++k;
        sum += da.loglik(i, cols[i]);
    }
    return prior.log_p(k) + sum;
}

/// One proposal move on the association: pick a row uniformly, pick a column
/// uniformly over the M+1 options; a conflicting owner of that column is
/// bumped to clutter.
template <class Urbg>
ColumnAssignment propose(const ColumnAssignment& cols, int track_count, Urbg& rng) {
    ColumnAssignment out = cols;
    const int m = static_cast<int>(cols.size());
    std::uniform_int_distribution<int> pick_row(0, m - 1);
    std::uniform_int_distribution<int> pick_col(0, track_count);
    const int row = pick_row(rng);
    const int col = pick_col(rng);
    if (col != track_count) {
        for (int r = 0; r < m; ++r) {
            if (r != row && out[r] == col) {
                out[r] = track_count;
                break;
            }
        }
    }
    out[row] = col;
    return out;
}

struct SamplerConfig {
    std::int64_t burn_in = 10'000;
    std::int64_t post_burn_steps = 90'000;
    int max_distinct = 100;
    std::uint64_t seed = 0;

    void validate() const {
        if (burn_in < 0 || post_burn_steps < 1 || max_distinct < 1) {
            throw ConfigError("invalid sampler config");
        }
    }
};

struct ScoredAssignment {
    ColumnAssignment cols;
    double logscore = kNegInf;
    std::int64_t visits = 0;
};

namespace detail {
struct ColsHash {
    std::size_t operator()(const ColumnAssignment& cols) const {
        std::size_t h = 1469598103934665603ULL;
        for (int c : cols) {
            h ^= static_cast<std::size_t>(c) + 0x9e3779b9;
            h *= 1099511628211ULL;
        }
        return h;
    }
};
}  // namespace detail

/// Metropolis walk over associations (Algorithm 1 with the row/column
/// proposal). Accept an improving move outright, a worsening one with
/// probability exp(delta); a -inf target is never accepted. Records every
/// distinct map visited after burn-in and returns the best max_distinct,
/// sorted by score descending (exact ties by assignment vector).
inline std::vector<ScoredAssignment> mcmc_sample(const DataAssociationMatrix& da,
                                                 const AssociationPrior& prior,
                                                 const SamplerConfig& cfg) {
    cfg.validate();
    const int m = da.measurement_count();
    const int M = da.track_count();
    if (m == 0) {
        return {ScoredAssignment{{}, prior.log_p(0), 1}};
    }
    std::mt19937_64 rng(detail::mix64(cfg.seed));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> pick_row(0, m - 1);
    std::uniform_int_distribution<int> pick_col(0, M);

    ColumnAssignment cols(m, M);  // start at all-clutter
    double score = association_logscore(cols, da, prior);
    std::unordered_map<ColumnAssignment, std::pair<double, std::int64_t>, detail::ColsHash>
        visited;
    const std::int64_t total = cfg.burn_in + cfg.post_burn_steps;
    for (std::int64_t step = 0; step < total; ++step) {
        const int row = pick_row(rng);
        const int col = pick_col(rng);
        // apply move in place, remembering how to undo it
        const int old_col = cols[row];
        int bumped_row = -1;
        if (col != M) {
            for (int r = 0; r < m; ++r) {
                if (r != row && cols[r] == col) {
                    bumped_row = r;
                    break;
                }
            }
        }
        if (bumped_row >= 0) cols[bumped_row] = M;
        cols[row] = col;
        const double cand = association_logscore(cols, da, prior);

        bool accept;
        if (cand == kNegInf) {
            accept = false;
        } else if (cand >= score) {
            accept = true;
        } else {
            accept = u01(rng) < std::exp(cand - score);
        }
        if (accept) {
            score = cand;
        } else {
            cols[row] = old_col;
            if (bumped_row >= 0) cols[bumped_row] = col;
        }
        if (step >= cfg.burn_in && score != kNegInf) {
            auto [it, inserted] = visited.try_emplace(cols, score, 0);
            it->second.second += 1;
        }
    }

    std::vector<ScoredAssignment> out;
    out.reserve(visited.size());
    for (const auto& [c, sv] : visited) out.push_back({c, sv.first, sv.second});
    std::sort(out.begin(), out.end(), [](const ScoredAssignment& a, const ScoredAssignment& b) {
        if (a.logscore != b.logscore) return a.logscore > b.logscore;
        return a.cols < b.cols;
    });
    if (static_cast<int>(out.size()) > cfg.max_distinct) out.resize(cfg.max_distinct);
    return out;
}

}  // namespace rfisst
