#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rfisst/mtt_core.hpp"

namespace rfisst {

struct ObjectMatch {
    std::uint64_t object_id = 0;
    double distance_km = 0.0;
    bool hit = false;
};

/// Per-scan record of everything the run emits: weights, cardinality
/// statistics, estimate classification and hypothesis-generation timing.
struct ScanReport {
    int scan = 0;
    int hypothesis_count = 0;
    std::vector<std::pair<HypothesisId, double>> weights;
    std::map<int, double> cardinality;  // track count -> probability
    double cardinality_mean = 0.0;
    int cardinality_mode = 0;
    std::vector<ObjectMatch> matches;   // filled against truth by the caller
    int unmatched_tracks = 0;
    std::int64_t generation_ns = 0;
    std::int64_t mcmc_steps = 0;
    int distinct_children = 0;
    int measurement_count = 0;
    int top_track_count = 0;
    bool degenerate_fallback = false;
    std::vector<std::string> warnings;
};

/// One row of the timing benchmark (also emitted per scan during runs).
struct TimingRow {
    int M = 0;
    int m = 0;
    std::string a_m;  // exact association count, decimal string
    std::string method;
    std::int64_t nanoseconds = 0;
    std::int64_t steps = 0;
    bool brk = false;
};

namespace csv {

inline void write_weights_header(std::ostream& os) { os << "scan,hypothesis_id,weight\n"; }

inline void write_weights_rows(std::ostream& os, const ScanReport& r) {
    for (const auto& [id, w] : r.weights) os << r.scan << ',' << id << ',' << w << '\n';
}

inline void write_cardinality_header(std::ostream& os) {
    os << "scan,n,probability,mean,mode\n";
}

inline void write_cardinality_rows(std::ostream& os, const ScanReport& r) {
    for (const auto& [n, p] : r.cardinality) {
        os << r.scan << ',' << n << ',' << p << ',' << r.cardinality_mean << ','
           << r.cardinality_mode << '\n';
    }
}

inline void write_estimates_header(std::ostream& os) {
    os << "scan,object,match_distance_km,hit\n";
}

inline void write_estimates_rows(std::ostream& os, const ScanReport& r) {
    for (const ObjectMatch& m : r.matches) {
        os << r.scan << ',' << m.object_id << ',' << m.distance_km << ',' << (m.hit ? 1 : 0)
           << '\n';
    }
    if (r.matches.empty()) os << r.scan << ",-1,0,1\n";  // keep one row per scan
}

inline void write_timing_header(std::ostream& os) {
    os << "M,m,A_M,method,nanoseconds,steps,break\n";
}

inline void write_timing_row(std::ostream& os, const TimingRow& t) {
    os << t.M << ',' << t.m << ',' << t.a_m << ',' << t.method << ',' << t.nanoseconds << ','
       << t.steps << ',' << (t.brk ? 1 : 0) << '\n';
}

}  // namespace csv
}  // namespace rfisst
