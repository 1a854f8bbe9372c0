#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seqlab/corpus.hpp"

namespace seqlab {

/// Role type -> spans for one instance.
using SpanSet = std::map<std::string, std::vector<Span>>;

SpanSet spans_by_role(const std::vector<RoleSpan>& roles);

struct PRF {
    double p = 0.0;
    double r = 0.0;
    double f1 = 0.0;
};

/// Harmonic mean; 0 when p + r == 0.
double f1_of(double p, double r);

/// Micro counts for overlap ("binary") credit: a predicted span counts if it
/// overlaps any gold span of the same role, a gold span if any predicted
/// span overlaps it.
struct BinaryCounts {
    std::int64_t pred_total = 0;
    std::int64_t pred_matched = 0;
    std::int64_t gold_total = 0;
    std::int64_t gold_matched = 0;

    void add(const BinaryCounts& o);
    PRF prf() const;
};

/// One span's token overlap with the other side, as an exact fraction.
struct SpanFraction {
    std::int64_t overlap = 0;
    std::int64_t length = 0;
};

/// Proportional ("partial") credit: each span contributes the fraction of
/// its tokens covered by the other side; precision averages over predicted
/// spans, recall over gold spans. Fractions are kept as exact integer pairs,
/// pooled over the corpus before averaging. Per-span fractions never exceed
/// the binary credit of the same span, so proportional P/R/F1 <= binary.
struct PropCounts {
    std::vector<SpanFraction> pred_fractions;
    std::vector<SpanFraction> gold_fractions;

    void add(const PropCounts& o);
    PRF prf() const;
};

BinaryCounts binary_counts(const std::vector<Span>& pred, const std::vector<Span>& gold);
PropCounts proportional_counts(const std::vector<Span>& pred, const std::vector<Span>& gold);

/// Instance-level convenience wrappers (micro over one instance).
PRF binary_prf(const SpanSet& pred, const SpanSet& gold, const std::string& role);
PRF proportional_prf(const SpanSet& pred, const SpanSet& gold, const std::string& role);

struct RoleScore {
    BinaryCounts binary;
    PropCounts prop;
};

/// Corpus-level accumulator, micro-averaged per role type.
class SpanScorer {
public:
    void add(const SpanSet& pred, const SpanSet& gold);
    const std::map<std::string, RoleScore>& roles() const { return roles_; }
    const RoleScore& role(const std::string& name) const;

private:
    std::map<std::string, RoleScore> roles_;
};

/// Machine-readable report: per role binary/proportional P, R, F1 + counts.
std::string span_report_json(const SpanScorer& scorer);

// ---------------------------------------------------------------------------
// SRL exact-match scoring

struct SrlCounts {
    std::int64_t n_pred = 0;
    std::int64_t n_gold = 0;
    std::int64_t n_correct = 0;

    void add(const SrlCounts& o);
    PRF prf() const;
};

SrlCounts srl_counts(const std::vector<RoleSpan>& pred, const std::vector<RoleSpan>& gold);

// ---------------------------------------------------------------------------
// Two-sample Kolmogorov-Smirnov test

struct KsResult {
    double d = 0.0;
    double p_value = 1.0;
};

/// D = sup |ECDF_a - ECDF_b|; p-value from the asymptotic Kolmogorov
/// distribution at sqrt(n_eff) * D with n_eff = na*nb/(na+nb).
KsResult ks_test(std::vector<double> a, std::vector<double> b);

/// Survival function Q(lambda) of the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

// ---------------------------------------------------------------------------
// Cross-validation aggregation

struct CVStats {
    double mean = 0.0;
    double sd = 0.0;  // sample (n-1)
};

CVStats aggregate_cv(const std::vector<double>& fold_scores);  // needs >= 2 folds

// ---------------------------------------------------------------------------
// Prediction dumps and stability analysis

struct PredictedInstance {
    std::string doc_id;
    int sent_id = 0;
    Task task = Task::ORL;
    Span trigger;
    std::vector<RoleSpan> roles;
};

std::string predictions_to_json(const std::vector<PredictedInstance>& preds);
std::vector<PredictedInstance> predictions_from_json(const std::string& text);

enum class StabilityCategory { EasyCorrect, HardIncorrect, Unstable };

std::string category_name(StabilityCategory c);

struct StabilityItem {
    std::string doc_id;
    int sent_id = 0;
    Span trigger;
    std::string role;
    int gold_span_count = 0;
    int correct_trials = 0;
    int total_trials = 0;
    StabilityCategory category = StabilityCategory::Unstable;
};

/// One item per (gold instance, role type with at least one gold span).
/// Correct in a trial = some predicted span of that role overlaps a gold
/// span of it. With n trials: easy-correct needs >= n-2 correct trials,
/// hard-incorrect <= 2, everything else is unstable.
std::vector<StabilityItem> stability_analysis(
    const std::vector<std::vector<PredictedInstance>>& trials,
    const std::vector<RoleInstance>& gold, int expected_trials = 8);

// ---------------------------------------------------------------------------
// Role / trigger distance statistics

/// Min over token pairs of |i - j|: 0 for overlapping spans, 1 for adjacent.
int span_distance(const Span& a, const Span& b);

struct DistanceStats {
    std::map<std::string, double> mean_distance;     // by category name + "all"
    std::map<std::string, std::int64_t> span_count;
};

/// Mean distance between gold role spans of `role_label` and their triggers,
/// grouped by the stability category of the owning (instance, role) item.
DistanceStats distance_by_category(const std::vector<RoleInstance>& gold,
                                   const std::vector<StabilityItem>& items,
                                   const std::string& role_label);

double mean_role_trigger_distance(const std::vector<RoleInstance>& instances,
                                  const std::string& role_label);

// ---------------------------------------------------------------------------
// Results table (model x {binary F1, prop F1} x {holder, target})

struct CvCell {
    CVStats stats;
    bool sig_vs_stl = false;
    bool sig_vs_fs = false;
};

struct CvRow {
    std::string arch;
    // keys: "holder/binary_f1", "holder/prop_f1", "target/binary_f1", "target/prop_f1"
    std::map<std::string, CvCell> cells;
};

/// Aligned-column text table; significance markers: "*" = differs from STL,
/// "#" = differs from FS (p < 0.05, two-sample KS).
std::string render_cv_table(const std::vector<CvRow>& rows, const std::string& title);

}  // namespace seqlab
