#pragma once

#include <chrono>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rfisst/association.hpp"
#include "rfisst/common.hpp"
#include "rfisst/gaussian_track.hpp"
#include "rfisst/mtt_core.hpp"
#include "rfisst/report.hpp"
#include "rfisst/rng.hpp"
#include "rfisst/ssa_models.hpp"

namespace rfisst {

/// One-event birth/death model: at most one birth (probability alpha per FOV
/// partition) or one death (probability beta per in-FOV object) between scans.
struct BirthDeathConfig {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<BirthPartition> partitions;
    std::function<bool(const Track&)> death_rule;  // applied to predicted tracks

    static BirthDeathConfig none() { return {}; }
};

struct Branch {
    BranchTag tag;
    double log_factor = 0.0;
};

/// Models shared by every hypothesis in a scan.
struct ScanModels {
    DynamicsModel dynamics;
    double dt = 30.0;
    MeasurementModel meas;
    std::function<double(const Vec2&)> clutter_logdensity;
    double pD = 0.9;
};

enum class ChildWeighting { kHfisst, kMht };
enum class LikelihoodForm { kMarginal, kAtMeanR };

struct ScanConfig {
    bool exhaustive = false;
    std::int64_t enumeration_cap = kDefaultEnumerationCap;
    SamplerConfig sampler;      // seed field is ignored; streams derive from master_seed
    int h_inf = 100;
    bool random_resample = false;
    double weight_floor = 1e-12;
    GateConfig gate;
    std::uint64_t master_seed = 0;
    int threads = 1;
};

/// Branch transition prior: log p_ij as a function of the association's k,
/// for a child hypothesis with object_count tracks.
inline double association_prior(int k, int m, int object_count, const BranchTag& tag,
                                const BirthDeathConfig& bd, double pD, int death_candidates) {
    double factor;
    const double m_b = static_cast<double>(bd.partitions.size());
    const double m_d = static_cast<double>(death_candidates);
    switch (tag.kind) {
        case BranchTag::Kind::kBirth: factor = bd.alpha; break;
        case BranchTag::Kind::kDeath: factor = bd.beta; break;
        default: factor = 1.0 - m_b * bd.alpha - m_d * bd.beta; break;
    }
    if (factor <= 0.0) return kNegInf;
    AssociationPrior prior(m, object_count, pD, std::log(factor));
    return prior.log_p(k);
}

/// Enumerate the one-event branches of a parent whose tracks have already
/// been predicted: one no-birth-death branch, one birth per FOV partition,
/// one death per in-FOV track.
inline std::vector<Branch> spawn_children(const Hypothesis& predicted_parent,
                                          const BirthDeathConfig& bd) {
    int death_candidates = 0;
    std::vector<TrackLabel> dying;
    if (bd.beta > 0.0 && bd.death_rule) {
        for (const Track& t : predicted_parent.tracks) {
            if (bd.death_rule(t)) dying.push_back(t.label);
        }
        death_candidates = static_cast<int>(dying.size());
    }
    const double m_b = bd.alpha > 0.0 ? static_cast<double>(bd.partitions.size()) : 0.0;
    const double survive = 1.0 - m_b * bd.alpha - death_candidates * bd.beta;
    if (survive <= 0.0) {
        throw ConfigError("birth/death rates too large for one-event model");
    }
    std::vector<Branch> out;
    out.push_back({BranchTag::no_birth_death(), std::log(survive)});
    if (bd.beta > 0.0) {
        for (TrackLabel l : dying) out.push_back({BranchTag::death(l), std::log(bd.beta)});
    }
    if (bd.alpha > 0.0) {
        for (const BirthPartition& p : bd.partitions) {
            out.push_back({BranchTag::birth(p.index), std::log(bd.alpha)});
        }
    }
    return out;
}

/// Label for a track birthed at a given scan from a given FOV partition.
inline TrackLabel birth_label(int scan_index, int partition) {
    return (1ULL << 40) | (static_cast<std::uint64_t>(scan_index) << 16) |
           static_cast<std::uint64_t>(partition);
}

/// Predict a parent through one branch: every surviving track through the
/// dynamics; a death removes its track, a birth appends the partition pdf.
inline Hypothesis predict_hypothesis(const Hypothesis& parent, const BranchTag& tag,
                                     const DynamicsModel& dyn, double dt,
                                     const BirthDeathConfig& bd, int next_scan_index) {
    Hypothesis out;
    out.id = parent.id;
    out.log_weight = parent.log_weight;
    out.lineage.parent = parent.id;
    out.lineage.has_parent = true;
    out.lineage.branch = tag;
    out.tracks.reserve(parent.tracks.size() + 1);
    for (const Track& t : parent.tracks) {
        if (tag.kind == BranchTag::Kind::kDeath && t.label == tag.dead_label) continue;
        out.tracks.push_back(predict_track(t, dyn, dt));
    }
    if (tag.kind == BranchTag::Kind::kBirth) {
        const BirthPartition& p = bd.partitions.at(static_cast<std::size_t>(tag.birth_partition));
        Track birth;
        birth.label = birth_label(next_scan_index, p.index);
        birth.mean = p.mean;
        birth.covariance = p.covariance;
        out.tracks.push_back(birth);
    }
    return out;
}

/// Kalman-update the tracks named by the association; unassociated tracks
/// keep their predicted pdfs. Returns the child and log l_ij (track
/// likelihood terms plus clutter densities).
inline std::pair<Hypothesis, double> update_child(
    const Hypothesis& predicted, const AssociationMap& assoc,
    const std::vector<Vec2>& measurements, const MeasurementModel& meas,
    const std::function<double(const Vec2&)>& clutter_logdensity) {
    Hypothesis out = predicted;
    out.lineage.association = assoc;
    double log_l = 0.0;
    for (std::size_t i = 0; i < assoc.assignments.size(); ++i) {
        const AssociationEntry& e = assoc.assignments[i];
        if (e.kind == AssociationEntry::Kind::kClutter) {
            log_l += clutter_logdensity(measurements[i]);
            continue;
        }
        auto it = std::find_if(out.tracks.begin(), out.tracks.end(),
                               [&](const Track& t) { return t.label == e.label; });
        if (it == out.tracks.end()) {
            throw ConfigError("association names a track absent from the hypothesis");
        }
        auto [updated, ll] = update_track(*it, measurements[i], meas);
        *it = updated;
        log_l += ll;
    }
    return {out, log_l};
}

/// Keep the h_inf highest-weight hypotheses (ties by canonical key) and
/// renormalize.
inline HypothesisForest prune(HypothesisForest forest, int h_inf) {
    if (h_inf < 1) throw ConfigError("h_inf must be >= 1");
    if (static_cast<int>(forest.hypotheses.size()) > h_inf) {
        std::vector<std::pair<std::string, std::size_t>> order;
        order.reserve(forest.hypotheses.size());
        for (std::size_t i = 0; i < forest.hypotheses.size(); ++i) {
            order.emplace_back(canonical_key(forest.hypotheses[i]), i);
        }
        std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
            const double wa = forest.hypotheses[a.second].log_weight;
            const double wb = forest.hypotheses[b.second].log_weight;
            if (wa != wb) return wa > wb;
            return a.first < b.first;
        });
        std::vector<Hypothesis> kept;
        kept.reserve(h_inf);
        for (int i = 0; i < h_inf; ++i) kept.push_back(forest.hypotheses[order[i].second]);
        forest.hypotheses = std::move(kept);
    }
    return normalize_weights(std::move(forest));
}

struct CardinalityStats {
    std::map<int, double> distribution;
    double mean = 0.0;
    int mode = 0;
};

/// Weight-weighted object-count statistic over the forest: distribution,
/// mean, and mode (ties resolved to the larger count).
inline CardinalityStats expected_object_count(const HypothesisForest& forest) {
    CardinalityStats out;
    for (const Hypothesis& h : forest.hypotheses) {
        out.distribution[static_cast<int>(h.tracks.size())] += h.weight();
    }
    double best = -1.0;
    for (const auto& [n, p] : out.distribution) {
        out.mean += n * p;
        if (p >= best) {
            best = p;
            out.mode = n;
        }
    }
    return out;
}

/// Pure time update for intervals with no sensor report: every track of every
/// hypothesis is predicted, weights unchanged.
inline HypothesisForest time_update(const HypothesisForest& forest, const DynamicsModel& dyn,
                                    double dt) {
    HypothesisForest out = forest;
    for (Hypothesis& h : out.hypotheses) {
        for (Track& t : h.tracks) t = predict_track(t, dyn, dt);
    }
    return out;
}

namespace detail {

struct ChildRecord {
    int parent_index = 0;
    int branch_index = 0;
    ColumnAssignment cols;
    double local_logscore = kNegInf;  // log p_ij + log l_ij (or MHT analogue)
    double log_weight = kNegInf;      // unnormalized, then normalized in place
};

struct BranchWork {
    Branch branch;
    std::vector<Track> tracks;
    DataAssociationMatrix da;
    AssociationPrior prior;  // H-FISST transition prior
    int death_candidates = 0;
};

struct ParentResult {
    std::vector<BranchWork> branches;
    std::vector<ChildRecord> records;
    std::int64_t mcmc_steps = 0;
};

inline double mht_logscore(const ColumnAssignment& cols, const DataAssociationMatrix& da,
                           double pD, int object_count, double log_factor) {
    int k = 0;
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(cols.size()); ++i) {
        if (cols[i] != da.clutter_column()) ++k;
        sum += da.loglik(i, cols[i]);
    }
    double pd_term;
    if (pD == 0.0) {
        pd_term = (k == 0) ? 0.0 : kNegInf;
    } else if (pD == 1.0) {
        pd_term = (k == object_count) ? 0.0 : kNegInf;
    } else {
        pd_term = k * std::log(pD) + (object_count - k) * std::log1p(-pD);
    }
    return log_factor + pd_term + sum;
}

template <class Urbg>
DataAssociationMatrix build_da_matrix_impl(const std::vector<Track>& tracks,
                                           const std::vector<Vec2>& measurements,
                                           const MeasurementModel& meas,
                                           const std::function<double(const Vec2&)>& clutter,
                                           Urbg& rng, const GateConfig& gate,
                                           LikelihoodForm form) {
    if (form == LikelihoodForm::kMarginal) {
        return build_da_matrix(tracks, measurements, meas, clutter, rng, gate);
    }
    // likelihood evaluated at the predicted mean with R only (the literal MHT form)
    DataAssociationMatrix da = build_da_matrix(tracks, measurements, meas, clutter, rng, gate);
    const Eigen::LLT<Mat2> llt(meas.R);
    for (int i = 0; i < da.measurement_count(); ++i) {
        for (int j = 0; j < da.track_count(); ++j) {
            if (da.loglik(i, j) == kNegInf) continue;
            const Track& t = tracks[da.column_permutation[j]];
            const Vec2 innovation = measurements[i] - meas.h(t.mean);
            da.loglik(i, j) = innovation_loglik<2>(innovation, llt);
        }
    }
    return da;
}

inline AssociationMap to_association_map(const ColumnAssignment& cols,
                                         const DataAssociationMatrix& da,
                                         const BranchTag& tag, TrackLabel birthed) {
    AssociationMap out;
    out.assignments.reserve(cols.size());
    for (int c : cols) {
        if (c == da.clutter_column()) {
            out.assignments.push_back(AssociationEntry::clutter());
        } else {
            const TrackLabel label = da.track_labels[c];
            if (tag.kind == BranchTag::Kind::kBirth && label == birthed) {
                out.assignments.push_back(AssociationEntry::birth(label, tag.birth_partition));
            } else {
                out.assignments.push_back(AssociationEntry::track(label));
            }
        }
    }
    return out;
}

}  // namespace detail

/// One full Bayes scan of the forest against a measurement set: spawn
/// birth/death branches, generate children per branch (exhaustively or by
/// MCMC), weight them at the hypothesis level, normalize across all children
/// of all parents, floor, prune to h_inf, and renumber.
inline std::pair<HypothesisForest, ScanReport> scan_with_weighting(
    const HypothesisForest& forest, const std::vector<Vec2>& measurements,
    const ScanModels& models, const BirthDeathConfig& bd, const ScanConfig& cfg,
    ChildWeighting weighting, LikelihoodForm lform = LikelihoodForm::kMarginal) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    const int m = static_cast<int>(measurements.size());
    const int num_parents = static_cast<int>(forest.hypotheses.size());
    const int next_scan = forest.scan_index + 1;
    ScanReport report;
    report.scan = next_scan;
    report.measurement_count = m;

    auto run_parent = [&](int pi) {
        detail::ParentResult result;
        const Hypothesis& parent = forest.hypotheses[pi];
        auto rng = substream(cfg.master_seed, Stream::kParent,
                             {static_cast<std::uint64_t>(next_scan),
                              static_cast<std::uint64_t>(pi)});
        // shared per-track prediction; branches reuse it
        Hypothesis base = predict_hypothesis(parent, BranchTag::no_birth_death(), models.dynamics,
                                             models.dt, bd, next_scan);
        const std::vector<Branch> branches = spawn_children(base, bd);
        int death_candidates = 0;
        for (const Branch& b : branches) {
            if (b.tag.kind == BranchTag::Kind::kDeath) ++death_candidates;
        }
        for (int bi = 0; bi < static_cast<int>(branches.size()); ++bi) {
            const Branch& br = branches[bi];
            detail::BranchWork work;
            work.branch = br;
            work.death_candidates = death_candidates;
            switch (br.tag.kind) {
                case BranchTag::Kind::kNoBirthDeath:
                    work.tracks = base.tracks;
                    break;
                case BranchTag::Kind::kDeath: {
                    work.tracks.reserve(base.tracks.size() - 1);
                    for (const Track& t : base.tracks) {
                        if (t.label != br.tag.dead_label) work.tracks.push_back(t);
                    }
                    break;
                }
                case BranchTag::Kind::kBirth: {
                    work.tracks = base.tracks;
                    const BirthPartition& p =
                        bd.partitions.at(static_cast<std::size_t>(br.tag.birth_partition));
                    Track birth;
                    birth.label = birth_label(next_scan, p.index);
                    birth.mean = p.mean;
                    birth.covariance = p.covariance;
                    work.tracks.push_back(birth);
                    break;
                }
            }
            const int n_obj = static_cast<int>(work.tracks.size());
            work.da = detail::build_da_matrix_impl(work.tracks, measurements, models.meas,
                                                   models.clutter_logdensity, rng, cfg.gate,
                                                   lform);
            work.prior = AssociationPrior(m, n_obj, models.pD, br.log_factor);

            auto local_score = [&](const ColumnAssignment& cols) {
                if (weighting == ChildWeighting::kHfisst) {
                    return association_logscore(cols, work.da, work.prior);
                }
                return detail::mht_logscore(cols, work.da, models.pD, n_obj, br.log_factor);
            };

            if (cfg.exhaustive) {
                // stream the enumeration; lazily compact children that can
                // no longer clear the weight floor
                const BigInt count = count_associations(m, n_obj);
                if (count > cfg.enumeration_cap) {
                    throw EnumerationCapError("exhaustive enumeration infeasible: " +
                                              count.str() + " associations exceed cap " +
                                              std::to_string(cfg.enumeration_cap));
                }
                const double floor_margin =
                    cfg.weight_floor > 0.0 ? -std::log(cfg.weight_floor) + 5.0 : kNegInf;
                double best = kNegInf;
                const std::size_t compact_at = 200'000;
                for_each_association(m, n_obj, [&](const ColumnAssignment& cols) {
                    const double s = local_score(cols);
                    if (s == kNegInf) return;
                    best = std::max(best, s);
                    if (std::isfinite(floor_margin) && s < best - floor_margin) return;
                    result.records.push_back(
                        {pi, bi, cols, s, parent.log_weight + s});
                    if (result.records.size() > compact_at) {
                        double global_best = kNegInf;
                        for (const auto& r : result.records) {
                            global_best = std::max(global_best, r.local_logscore +
                                                   (r.parent_index == pi ? 0.0 : 0.0));
                        }
                        std::erase_if(result.records, [&](const detail::ChildRecord& r) {
                            return r.local_logscore < global_best - floor_margin;
                        });
                    }
                });
            } else {
                SamplerConfig sc = cfg.sampler;
                sc.seed = derive_seed(cfg.master_seed, Stream::kParent,
                                      {static_cast<std::uint64_t>(next_scan),
                                       static_cast<std::uint64_t>(pi),
                                       static_cast<std::uint64_t>(bi) + 1000});
                std::vector<ScoredAssignment> scored;
                if (weighting == ChildWeighting::kHfisst) {
                    scored = mcmc_sample(work.da, work.prior, sc);
                } else {
                    // MHT differs only in the k-dependent factor; reuse the chain on
                    // the H-FISST target and rescore
                    scored = mcmc_sample(work.da, work.prior, sc);
                    for (ScoredAssignment& s : scored) s.logscore = local_score(s.cols);
                    std::sort(scored.begin(), scored.end(),
                              [](const ScoredAssignment& a, const ScoredAssignment& b) {
                                  if (a.logscore != b.logscore) return a.logscore > b.logscore;
                                  return a.cols < b.cols;
                              });
                }
                result.mcmc_steps += m == 0 ? 0 : cfg.sampler.burn_in + cfg.sampler.post_burn_steps;
                for (const ScoredAssignment& s : scored) {
                    if (s.logscore == kNegInf) continue;
                    result.records.push_back(
                        {pi, bi, s.cols, s.logscore, parent.log_weight + s.logscore});
                }
            }
            result.branches.push_back(std::move(work));
        }
        return result;
    };

    std::vector<detail::ParentResult> results(num_parents);
    const int threads = std::max(1, cfg.threads);
    if (threads == 1 || num_parents <= 1) {
        for (int pi = 0; pi < num_parents; ++pi) results[pi] = run_parent(pi);
    } else {
        std::vector<std::future<detail::ParentResult>> futures;
        futures.reserve(num_parents);
        std::atomic<int> next{0};
        auto worker = [&]() {
            // not used; chunked below
        };
        (void)worker;
        for (int pi = 0; pi < num_parents; ++pi) {
            futures.push_back(std::async(std::launch::deferred, run_parent, pi));
        }
        // bounded parallel evaluation, deterministic merge by index
        std::vector<std::thread> pool;
        std::atomic<int> cursor{0};
        pool.reserve(threads);
        std::vector<std::optional<detail::ParentResult>> slots(num_parents);
        std::exception_ptr error;
        std::mutex error_mutex;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                while (true) {
                    const int pi = cursor.fetch_add(1);
                    if (pi >= num_parents) break;
                    try {
                        slots[pi] = run_parent(pi);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!error) error = std::current_exception();
                        break;
                    }
                }
            });
        }
        for (std::thread& th : pool) th.join();
        if (error) std::rethrow_exception(error);
        for (int pi = 0; pi < num_parents; ++pi) results[pi] = std::move(*slots[pi]);
        futures.clear();
    }

    // merge records in parent order
    std::vector<detail::ChildRecord> records;
    std::size_t total_records = 0;
    for (const auto& r : results) total_records += r.records.size();
    records.reserve(total_records);
    for (auto& r : results) {
        for (auto& rec : r.records) records.push_back(std::move(rec));
        report.mcmc_steps += r.mcmc_steps;
        r.records.clear();
    }
    report.distinct_children = static_cast<int>(records.size());
    const auto t1 = Clock::now();
    report.generation_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();

    if (records.empty()) {
        throw TrackingError("scan produced no children");
    }

    // hypothesis-level weight update: normalize across all children of all parents
    double max_lw = kNegInf;
    for (const auto& r : records) max_lw = std::max(max_lw, r.log_weight);
    bool degenerate = !std::isfinite(max_lw);
    if (degenerate) {
        const double lw = -std::log(static_cast<double>(records.size()));
        for (auto& r : records) r.log_weight = lw;
        report.degenerate_fallback = true;
        report.warnings.push_back("degenerate forest: uniform fallback over children");
    } else {
        double sum = 0.0;
        for (const auto& r : records) sum += std::exp(r.log_weight - max_lw);
        const double log_norm = max_lw + std::log(sum);
        for (auto& r : records) r.log_weight -= log_norm;
        if (cfg.weight_floor > 0.0) {
            const double log_floor = std::log(cfg.weight_floor);
            std::erase_if(records,
                          [&](const detail::ChildRecord& r) { return r.log_weight < log_floor; });
        }
    }

    // prune to h_inf: deterministic top-weight selection (ties by lineage),
    // or weighted random resampling behind the flag
    auto record_order = [&](const detail::ChildRecord& a, const detail::ChildRecord& b) {
        if (a.log_weight != b.log_weight) return a.log_weight > b.log_weight;
        if (a.parent_index != b.parent_index) return a.parent_index < b.parent_index;
        if (a.branch_index != b.branch_index) return a.branch_index < b.branch_index;
        return a.cols < b.cols;
    };
    if (static_cast<int>(records.size()) > cfg.h_inf) {
        if (cfg.random_resample) {
            auto rng = substream(cfg.master_seed, Stream::kParent,
                                 {static_cast<std::uint64_t>(next_scan), 0xfeedULL});
            std::uniform_real_distribution<double> u01(0.0, 1.0);
            // Efraimidis-Spirakis weighted sampling without replacement
            std::vector<std::pair<double, std::size_t>> keys(records.size());
            for (std::size_t i = 0; i < records.size(); ++i) {
                const double u = u01(rng);
                keys[i] = {std::log(u) / std::exp(records[i].log_weight), i};
            }
            std::sort(keys.begin(), keys.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            std::vector<detail::ChildRecord> kept;
            kept.reserve(cfg.h_inf);
            for (int i = 0; i < cfg.h_inf; ++i) kept.push_back(records[keys[i].second]);
            records = std::move(kept);
            std::sort(records.begin(), records.end(), record_order);
        } else {
            std::sort(records.begin(), records.end(), record_order);
            records.resize(cfg.h_inf);
        }
    } else {
        std::sort(records.begin(), records.end(), record_order);
    }

    // renormalize survivors
    {
        double mx = kNegInf;
        for (const auto& r : records) mx = std::max(mx, r.log_weight);
        double sum = 0.0;
        for (const auto& r : records) sum += std::exp(r.log_weight - mx);
        const double log_norm = mx + std::log(sum);
        for (auto& r : records) r.log_weight -= log_norm;
    }

    // materialize surviving children: Kalman updates of the associated tracks
    HypothesisForest next;
    next.scan_index = next_scan;
    next.hypotheses.reserve(records.size());
    bool dropped_any = false;
    for (const auto& r : records) {
        const auto& parent_result = results[r.parent_index];
        const detail::BranchWork& work = parent_result.branches[r.branch_index];
        Hypothesis pred;
        pred.id = forest.hypotheses[r.parent_index].id;
        pred.tracks = work.tracks;
        pred.log_weight = r.log_weight;
        pred.lineage.parent = forest.hypotheses[r.parent_index].id;
        pred.lineage.has_parent = true;
        pred.lineage.branch = work.branch.tag;
        const TrackLabel birthed = work.branch.tag.kind == BranchTag::Kind::kBirth
                                       ? birth_label(next_scan, work.branch.tag.birth_partition)
                                       : 0;
        const AssociationMap assoc =
            detail::to_association_map(r.cols, work.da, work.branch.tag, birthed);
        try {
            auto [child, log_l] = update_child(pred, assoc, measurements, models.meas,
                                               models.clutter_logdensity);
            child.log_weight = r.log_weight;
            next.hypotheses.push_back(std::move(child));
        } catch (const TrackingError& e) {
            dropped_any = true;
            report.warnings.push_back(std::string("child dropped: ") + e.what());
        }
    }
    if (next.hypotheses.empty()) throw TrackingError("every child failed its update");
    if (dropped_any) next = normalize_weights(std::move(next));

    // renumber children as the next generation's parents
    for (std::size_t i = 0; i < next.hypotheses.size(); ++i) {
        next.hypotheses[i].id = static_cast<HypothesisId>(i);
    }

    report.hypothesis_count = static_cast<int>(next.hypotheses.size());
    for (const Hypothesis& h : next.hypotheses) {
        report.weights.emplace_back(h.id, h.weight());
    }
    const CardinalityStats stats = expected_object_count(next);
    report.cardinality = stats.distribution;
    report.cardinality_mean = stats.mean;
    report.cardinality_mode = stats.mode;
    report.top_track_count = static_cast<int>(next.hypotheses.front().tracks.size());
    return {std::move(next), std::move(report)};
}

inline std::pair<HypothesisForest, ScanReport> scan(const HypothesisForest& forest,
                                                    const std::vector<Vec2>& measurements,
                                                    const ScanModels& models,
                                                    const BirthDeathConfig& bd,
                                                    const ScanConfig& cfg) {
    return scan_with_weighting(forest, measurements, models, bd, cfg, ChildWeighting::kHfisst);
}

}  // namespace rfisst
