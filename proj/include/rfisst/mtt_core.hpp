#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "rfisst/common.hpp"

namespace rfisst {

using TrackLabel = std::uint64_t;
using HypothesisId = std::uint64_t;

/// A labeled single-object Gaussian belief. State is planar position and
/// velocity: (x km, y km, vx km/s, vy km/s).
struct Track {
    TrackLabel label = 0;
    Vec4 mean = Vec4::Zero();
    Mat4 covariance = Mat4::Identity();
};

/// One measurement slot's assignment: a track, clutter, or the track birthed
/// by this hypothesis' birth branch (tagged with the FOV partition index).
struct AssociationEntry {
    enum class Kind : std::uint8_t { kTrack, kClutter, kBirth };
    Kind kind = Kind::kClutter;
    TrackLabel label = 0;  // valid for kTrack and kBirth
    int partition = -1;    // valid for kBirth

    static AssociationEntry track(TrackLabel l) { return {Kind::kTrack, l, -1}; }
    static AssociationEntry clutter() { return {Kind::kClutter, 0, -1}; }
    static AssociationEntry birth(TrackLabel l, int partition) {
        return {Kind::kBirth, l, partition};
    }

    bool operator==(const AssociationEntry&) const = default;
};

/// Assignment of each measurement index to a track / clutter / birthed track.
/// One-to-one on the track side.
struct AssociationMap {
    std::vector<AssociationEntry> assignments;

    /// Number of measurements associated to objects (tracks or a birth).
    int associated_count() const {
        return static_cast<int>(std::count_if(
            assignments.begin(), assignments.end(),
            [](const AssociationEntry& e) { return e.kind != AssociationEntry::Kind::kClutter; }));
    }

    bool operator==(const AssociationMap&) const = default;
};

/// Which one-event branch produced a child hypothesis.
struct BranchTag {
    enum class Kind : std::uint8_t { kNoBirthDeath, kBirth, kDeath };
    Kind kind = Kind::kNoBirthDeath;
    int birth_partition = -1;  // kBirth
    TrackLabel dead_label = 0; // kDeath

    static BranchTag no_birth_death() { return {Kind::kNoBirthDeath, -1, 0}; }
    static BranchTag birth(int partition) { return {Kind::kBirth, partition, 0}; }
    static BranchTag death(TrackLabel l) { return {Kind::kDeath, -1, l}; }

    bool operator==(const BranchTag&) const = default;
};

/// Parent pointer plus the discrete choices that produced this hypothesis.
struct Lineage {
    HypothesisId parent = 0;
    bool has_parent = false;
    BranchTag branch = BranchTag::no_birth_death();
    AssociationMap association;
};

/// A weighted set of tracks: one complete explanation of the world.
struct Hypothesis {
    HypothesisId id = 0;
    std::vector<Track> tracks;
    double log_weight = 0.0;
    Lineage lineage;

    double weight() const { return std::exp(log_weight); }
};

struct HypothesisForest {
    std::vector<Hypothesis> hypotheses;
    int scan_index = 0;
};

/// Normalize hypothesis weights in log space (max-subtraction). Relative
/// ratios are preserved exactly; throws DegenerateForestError when every
/// weight is -inf.
inline HypothesisForest normalize_weights(HypothesisForest forest) {
    if (forest.hypotheses.empty()) throw DegenerateForestError();
    double max_lw = kNegInf;
    for (const Hypothesis& h : forest.hypotheses) max_lw = std::max(max_lw, h.log_weight);
    if (!std::isfinite(max_lw)) throw DegenerateForestError();
    double sum = 0.0;
    for (const Hypothesis& h : forest.hypotheses) sum += std::exp(h.log_weight - max_lw);
    const double log_norm = max_lw + std::log(sum);
    for (Hypothesis& h : forest.hypotheses) h.log_weight -= log_norm;
    return forest;
}

/// Stable identity of a hypothesis' discrete lineage: parent id, branch tag
/// and the full association vector. Equal keys identify duplicate children
/// of the same parent; used for MCMC distinct-sample bookkeeping and for
/// deterministic tie-breaks when pruning.
inline std::string canonical_key(const Hypothesis& h) {
    std::string key;
    key.reserve(16 + 4 * h.lineage.association.assignments.size());
    if (h.lineage.has_parent) {
        key += 'P';
        key += std::to_string(h.lineage.parent);
    } else {
        key += 'R';
        key += std::to_string(h.id);
    }
    key += '|';
    switch (h.lineage.branch.kind) {
        case BranchTag::Kind::kNoBirthDeath: key += 'N'; break;
        case BranchTag::Kind::kBirth:
            key += 'B';
            key += std::to_string(h.lineage.branch.birth_partition);
            break;
        case BranchTag::Kind::kDeath:
            key += 'D';
            key += std::to_string(h.lineage.branch.dead_label);
            break;
    }
    key += '|';
    for (const AssociationEntry& e : h.lineage.association.assignments) {
        switch (e.kind) {
            case AssociationEntry::Kind::kTrack:
                key += 'T';
                key += std::to_string(e.label);
                break;
            case AssociationEntry::Kind::kClutter: key += 'C'; break;
            case AssociationEntry::Kind::kBirth:
                key += 'b';
                key += std::to_string(e.partition);
                break;
        }
        key += ',';
    }
    return key;
}

}  // namespace rfisst
