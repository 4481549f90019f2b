#pragma once

// Simplified pairwise-comparison deck-of-cards method.
//
// Interval scales: an ordered list of levels, blank-card counts between
// consecutive levels and two anchor levels with assigned values. A gap with k
// cards is worth k + 1 units; the unit value is the anchor span divided by the
// number of units between the anchors.
//
// Ratio scales (weights): swing situations ranked in tiers, cards between
// consecutive tiers and the ratio z between the first and last tier weights.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "paci/error.hpp"

namespace paci::dcm {

struct Anchor {
    std::size_t index = 0;
    double value = 0.0;
};

struct LevelSequence {
    std::vector<double> levels;
    Anchor lo;
    Anchor hi;
};

struct CardJudgements {
    std::vector<int> gaps;
};

struct IntervalScaleResult {
    double unit_value = 0.0;  // alpha
    std::vector<double> values;
    int unit_count = 0;  // h, units between the anchors
};

inline std::vector<std::string> validate(const LevelSequence& seq, const CardJudgements& cards) {
    std::vector<std::string> v;
    if (seq.levels.size() < 2) v.push_back("at least two levels are required");
    for (std::size_t i = 1; i < seq.levels.size(); ++i) {
        if (!(seq.levels[i] > seq.levels[i - 1])) {
            v.push_back("levels must be strictly increasing (index " + std::to_string(i) + ")");
        }
    }
    if (seq.lo.index >= seq.levels.size() || seq.hi.index >= seq.levels.size()) {
        v.push_back("anchor index out of range");
    }
    if (seq.lo.index == seq.hi.index) v.push_back("anchor indices must be distinct");
    if (seq.lo.value == seq.hi.value) v.push_back("anchor values must be distinct");
    if (!seq.levels.empty() && cards.gaps.size() != seq.levels.size() - 1) {
        v.push_back("gaps must have one entry per consecutive level pair (" +
                    std::to_string(seq.levels.size() - 1) + " expected, " + std::to_string(cards.gaps.size()) +
                    " given)");
    }
    for (std::size_t i = 0; i < cards.gaps.size(); ++i) {
        if (cards.gaps[i] < 0) v.push_back("gap " + std::to_string(i) + " is negative");
    }
    return v;
}

// Values of every level on the interval scale fixed by the two anchors. Levels
// outside the anchor bracket are extended with the same unit value.
inline IntervalScaleResult build_interval_scale(const LevelSequence& seq, const CardJudgements& cards) {
    if (auto violations = validate(seq, cards); !violations.empty()) {
        throw Error(ErrorCode::invalid_judgements, "invalid judgements", std::move(violations));
    }
    // units[i] = cumulative units from level 0 to level i
    std::vector<int> units(seq.levels.size(), 0);
    for (std::size_t i = 1; i < units.size(); ++i) units[i] = units[i - 1] + cards.gaps[i - 1] + 1;

    Anchor lo = seq.lo;
    Anchor hi = seq.hi;
    if (lo.index > hi.index) std::swap(lo, hi);
    const int h = units[hi.index] - units[lo.index];
    const double alpha = (hi.value - lo.value) / static_cast<double>(h);
    if (alpha < 0.0) {
        throw Error(ErrorCode::invalid_judgements, "anchor values decrease along the levels",
                    {"negative unit value"});
    }

    IntervalScaleResult out;
    out.unit_value = alpha;
    out.unit_count = h;
    out.values.reserve(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (i == lo.index) {
            out.values.push_back(lo.value);
        } else if (i == hi.index) {
            out.values.push_back(hi.value);
        } else {
            out.values.push_back(lo.value + alpha * static_cast<double>(units[i] - units[lo.index]));
        }
    }
    return out;
}

// Upper-triangular table of card counts between level i and level j (i < j).
// Entries may be absent when an expert only judged some pairs.
class PairwiseTable {
public:
    PairwiseTable() = default;
    explicit PairwiseTable(std::size_t levels) : n_(levels), cells_(levels * levels) {}

    std::size_t levels() const { return n_; }

    std::optional<int> get(std::size_t i, std::size_t j) const { return cells_[index(i, j)]; }
    void set(std::size_t i, std::size_t j, std::optional<int> cards) { cells_[index(i, j)] = cards; }

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        if (!(i < j && j < n_)) throw Error(ErrorCode::out_of_range, "pairwise table index must satisfy i < j < n");
        return i * n_ + j;
    }

    std::size_t n_ = 0;
    std::vector<std::optional<int>> cells_;
};

// Complete table filled by e_ij = e_ik + e_kj + 1.
inline PairwiseTable fill_pairwise_table(const CardJudgements& cards) {
    const std::size_t n = cards.gaps.size() + 1;
    PairwiseTable table(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        int e = cards.gaps[i];
        table.set(i, i + 1, e);
        for (std::size_t j = i + 2; j < n; ++j) {
            e = e + cards.gaps[j - 1] + 1;
            table.set(i, j, e);
        }
    }
    return table;
}

struct Violation {
    std::size_t i = 0;
    std::size_t k = 0;
    std::size_t j = 0;
    int residual = 0;  // e_ij - (e_ik + e_kj + 1)
};

struct ConsistencyReport {
    std::vector<Violation> violations;
    bool consistent() const { return violations.empty(); }
};

// Every triple i < k < j with all three entries present whose entries break the
// transitivity rule. Reports only; no repair.
inline ConsistencyReport check_consistency(const PairwiseTable& table) {
    ConsistencyReport report;
    const std::size_t n = table.levels();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            const auto eij = table.get(i, j);
            if (!eij) continue;
            for (std::size_t k = i + 1; k < j; ++k) {
                const auto eik = table.get(i, k);
                const auto ekj = table.get(k, j);
                if (!eik || !ekj) continue;
                const int residual = *eij - (*eik + *ekj + 1);
                if (residual != 0) report.violations.push_back({i, k, j, residual});
            }
        }
    }
    return report;
}

// Criteria are identified by index 0..n-1. Tiers run from the highest-impact
// swing to the lowest. tier_gaps are counted upward from the last tier:
// tier_gaps[0] sits between the last tier and the one above it. This is the
// reading under which the published ranking {p1} {p3,p4,p5} {p2} with cards
// [2, 3] and z = 2 yields the published weights 2, 1.42858 and 1.
struct SwingRanking {
    std::vector<std::vector<std::size_t>> tiers;
    std::vector<int> tier_gaps;
    double z_ratio = 1.0;
};

inline std::size_t criteria_count(const SwingRanking& ranking) {
    std::size_t n = 0;
    for (const auto& tier : ranking.tiers) n += tier.size();
    return n;
}

inline std::vector<std::string> validate(const SwingRanking& ranking) {
    std::vector<std::string> v;
    if (ranking.tiers.empty()) v.push_back("at least one tier is required");
    const std::size_t n = criteria_count(ranking);
    std::vector<int> seen(n, 0);
    for (const auto& tier : ranking.tiers) {
        if (tier.empty()) v.push_back("tiers must not be empty");
        for (std::size_t c : tier) {
            if (c >= n) {
                v.push_back("criterion index " + std::to_string(c) + " out of range");
            } else {
                ++seen[c];
            }
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (seen[c] != 1) v.push_back("criterion " + std::to_string(c) + " must appear in exactly one tier");
    }
    if (!ranking.tiers.empty() && ranking.tier_gaps.size() != ranking.tiers.size() - 1) {
        v.push_back("tier_gaps must have one entry per consecutive tier pair");
    }
    for (int g : ranking.tier_gaps) {
        if (g < 0) v.push_back("tier gaps must be non-negative");
    }
    if (ranking.tiers.size() > 1 && !(ranking.z_ratio > 1.0)) {
        v.push_back("z ratio must be greater than 1 when there is more than one tier");
    }
    return v;
}

struct WeightDerivation {
    double unit_value = 0.0;
    int unit_count = 0;
    std::vector<double> raw;         // non-normalised, per criterion
    std::vector<double> normalized;  // per criterion, sums to 1
};

inline WeightDerivation derive_weights(const SwingRanking& ranking) {
    if (auto violations = validate(ranking); !violations.empty()) {
        throw Error(ErrorCode::invalid_judgements, "invalid swing ranking", std::move(violations));
    }
    const std::size_t tiers = ranking.tiers.size();
    WeightDerivation out;
    out.raw.assign(criteria_count(ranking), 1.0);
    if (tiers > 1) {
        int h = 0;
        for (int g : ranking.tier_gaps) h += g + 1;
        out.unit_count = h;
        out.unit_value = (ranking.z_ratio - 1.0) / static_cast<double>(h);
        // units_above[k]: units between tier k and the last tier
        int units = 0;
        for (std::size_t step = 0; step + 1 < tiers; ++step) {
            units += ranking.tier_gaps[step] + 1;
            const std::size_t tier = tiers - 2 - step;
            const double w = (tier == 0) ? ranking.z_ratio : 1.0 + out.unit_value * units;
            for (std::size_t c : ranking.tiers[tier]) out.raw[c] = w;
        }
    }
    double total = 0.0;
    for (double w : out.raw) total += w;
    out.normalized.reserve(out.raw.size());
    for (double w : out.raw) out.normalized.push_back(w / total);
    return out;
}

inline std::vector<double> build_weights(const SwingRanking& ranking) { return derive_weights(ranking).normalized; }

}  // namespace paci::dcm
