#include "seqlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "seqlab/errors.hpp"

namespace seqlab {

using nlohmann::json;

SpanSet spans_by_role(const std::vector<RoleSpan>& roles) {
    SpanSet out;
    for (const auto& r : roles) out[r.label].push_back(r.span);
    return out;
}

double f1_of(double p, double r) {
    if (p + r <= 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

void BinaryCounts::add(const BinaryCounts& o) {
    pred_total += o.pred_total;
    pred_matched += o.pred_matched;
    gold_total += o.gold_total;
    gold_matched += o.gold_matched;
}

PRF BinaryCounts::prf() const {
    PRF out;
    out.p = pred_total > 0 ? static_cast<double>(pred_matched) / static_cast<double>(pred_total) : 0.0;
    out.r = gold_total > 0 ? static_cast<double>(gold_matched) / static_cast<double>(gold_total) : 0.0;
    out.f1 = f1_of(out.p, out.r);
    return out;
}

void PropCounts::add(const PropCounts& o) {
    pred_fractions.insert(pred_fractions.end(), o.pred_fractions.begin(), o.pred_fractions.end());
    gold_fractions.insert(gold_fractions.end(), o.gold_fractions.begin(), o.gold_fractions.end());
}

namespace {
double mean_fraction(const std::vector<SpanFraction>& fractions) {
    if (fractions.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& f : fractions) {
        sum += static_cast<double>(f.overlap) / static_cast<double>(f.length);
    }
    return sum / static_cast<double>(fractions.size());
}
}  // namespace

PRF PropCounts::prf() const {
    PRF out;
    out.p = mean_fraction(pred_fractions);
    out.r = mean_fraction(gold_fractions);
    out.f1 = f1_of(out.p, out.r);
    return out;
}

BinaryCounts binary_counts(const std::vector<Span>& pred, const std::vector<Span>& gold) {
    BinaryCounts c;
    c.pred_total = static_cast<std::int64_t>(pred.size());
    c.gold_total = static_cast<std::int64_t>(gold.size());
    for (const auto& p : pred) {
        for (const auto& g : gold) {
            if (p.overlaps(g)) {
                ++c.pred_matched;
                break;
            }
        }
    }
    for (const auto& g : gold) {
        for (const auto& p : pred) {
            if (g.overlaps(p)) {
                ++c.gold_matched;
                break;
            }
        }
    }
    return c;
}

namespace {

// tokens of `s` covered by the union of `others`
std::int64_t covered_tokens(const Span& s, const std::vector<Span>& others) {
    std::int64_t n = 0;
    for (int tok = s.start; tok <= s.end; ++tok) {
        for (const auto& o : others) {
            if (tok >= o.start && tok <= o.end) {
                ++n;
                break;
            }
        }
    }
    return n;
}

}  // namespace

PropCounts proportional_counts(const std::vector<Span>& pred, const std::vector<Span>& gold) {
    PropCounts c;
    for (const auto& p : pred) {
        c.pred_fractions.push_back({covered_tokens(p, gold), p.length()});
    }
    for (const auto& g : gold) {
        c.gold_fractions.push_back({covered_tokens(g, pred), g.length()});
    }
    return c;
}

namespace {
const std::vector<Span> kNoSpans;

const std::vector<Span>& spans_for(const SpanSet& set, const std::string& role) {
    auto it = set.find(role);
    return it == set.end() ? kNoSpans : it->second;
}
}  // namespace

PRF binary_prf(const SpanSet& pred, const SpanSet& gold, const std::string& role) {
    return binary_counts(spans_for(pred, role), spans_for(gold, role)).prf();
}

PRF proportional_prf(const SpanSet& pred, const SpanSet& gold, const std::string& role) {
    return proportional_counts(spans_for(pred, role), spans_for(gold, role)).prf();
}

void SpanScorer::add(const SpanSet& pred, const SpanSet& gold) {
    std::vector<std::string> roles;
    for (const auto& [k, v] : pred) roles.push_back(k);
    for (const auto& [k, v] : gold) {
        if (std::find(roles.begin(), roles.end(), k) == roles.end()) roles.push_back(k);
    }
    for (const auto& role : roles) {
        RoleScore& rs = roles_[role];
        rs.binary.add(binary_counts(spans_for(pred, role), spans_for(gold, role)));
        rs.prop.add(proportional_counts(spans_for(pred, role), spans_for(gold, role)));
    }
}

const RoleScore& SpanScorer::role(const std::string& name) const {
    static const RoleScore empty;
    auto it = roles_.find(name);
    return it == roles_.end() ? empty : it->second;
}

std::string span_report_json(const SpanScorer& scorer) {
    json out = json::object();
    for (const auto& [role, rs] : scorer.roles()) {
        const PRF b = rs.binary.prf();
        const PRF p = rs.prop.prf();
        out[role] = {
            {"binary", {{"p", b.p}, {"r", b.r}, {"f1", b.f1}}},
            {"proportional", {{"p", p.p}, {"r", p.r}, {"f1", p.f1}}},
            {"n_gold", rs.binary.gold_total},
            {"n_pred", rs.binary.pred_total},
        };
    }
    return out.dump(2);
}

// ---------------------------------------------------------------------------
// SRL exact match

void SrlCounts::add(const SrlCounts& o) {
    n_pred += o.n_pred;
    n_gold += o.n_gold;
    n_correct += o.n_correct;
}

PRF SrlCounts::prf() const {
    PRF out;
    out.p = n_pred > 0 ? static_cast<double>(n_correct) / static_cast<double>(n_pred) : 0.0;
    out.r = n_gold > 0 ? static_cast<double>(n_correct) / static_cast<double>(n_gold) : 0.0;
    out.f1 = f1_of(out.p, out.r);
    return out;
}

SrlCounts srl_counts(const std::vector<RoleSpan>& pred, const std::vector<RoleSpan>& gold) {
    SrlCounts c;
    c.n_pred = static_cast<std::int64_t>(pred.size());
    c.n_gold = static_cast<std::int64_t>(gold.size());
    for (const auto& p : pred) {
        for (const auto& g : gold) {
            if (p == g) {
                ++c.n_correct;
                break;
            }
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16 && j >= 4) break;
    }
    const double q = 2.0 * sum;
    return std::min(1.0, std::max(0.0, q));
}

KsResult ks_test(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ContractError("ks_test: samples must be nonempty");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t na = a.size(), nb = b.size();
    std::size_t i = 0, j = 0;
    // sup |i/na - j/nb| with an exact integer numerator |i*nb - j*na|
    std::int64_t numerator = 0;
    while (i < na && j < nb) {
        const double x = std::min(a[i], b[j]);
        while (i < na && a[i] <= x) ++i;
        while (j < nb && b[j] <= x) ++j;
        const std::int64_t diff = std::llabs(static_cast<std::int64_t>(i * nb) -
                                             static_cast<std::int64_t>(j * na));
        numerator = std::max(numerator, diff);
    }
    KsResult res;
    res.d = static_cast<double>(numerator) / static_cast<double>(na * nb);
    const double n_eff = static_cast<double>(na) * static_cast<double>(nb) /
                         static_cast<double>(na + nb);
    res.p_value = kolmogorov_survival(std::sqrt(n_eff) * res.d);
    return res;
}

// ---------------------------------------------------------------------------
// CV aggregation

CVStats aggregate_cv(const std::vector<double>& fold_scores) {
    if (fold_scores.size() < 2) {
        throw ContractError("aggregate_cv: need at least 2 folds, got " +
                            std::to_string(fold_scores.size()));
    }
    CVStats s;
    for (double v : fold_scores) s.mean += v;
    s.mean /= static_cast<double>(fold_scores.size());
    double ss = 0.0;
    for (double v : fold_scores) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(fold_scores.size() - 1));
    return s;
}

// ---------------------------------------------------------------------------
// Prediction dumps

std::string predictions_to_json(const std::vector<PredictedInstance>& preds) {
    json arr = json::array();
    for (const auto& p : preds) {
        json roles = json::array();
        for (const auto& r : p.roles) {
            roles.push_back({{"label", r.label}, {"start", r.span.start}, {"end", r.span.end}});
        }
        arr.push_back({{"doc_id", p.doc_id},
                       {"sent_id", p.sent_id},
                       {"task", task_name(p.task)},
                       {"trigger", {p.trigger.start, p.trigger.end}},
                       {"roles", roles}});
    }
    return arr.dump(2);
}

std::vector<PredictedInstance> predictions_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("prediction dump: ") + e.what());
    }
    if (!root.is_array()) throw IngestError("prediction dump: top level must be an array");
    std::vector<PredictedInstance> out;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const json& jp = root[i];
        const std::string where = "prediction " + std::to_string(i);
        try {
            PredictedInstance p;
            p.doc_id = jp.at("doc_id").get<std::string>();
            p.sent_id = jp.at("sent_id").get<int>();
            p.task = task_from_name(jp.at("task").get<std::string>());
            p.trigger = {jp.at("trigger").at(0).get<int>(), jp.at("trigger").at(1).get<int>()};
            for (const auto& jr : jp.at("roles")) {
                p.roles.push_back({jr.at("label").get<std::string>(),
                                   {jr.at("start").get<int>(), jr.at("end").get<int>()}});
            }
            out.push_back(std::move(p));
        } catch (const json::exception& e) {
            throw IngestError(where + ": " + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stability analysis

std::string category_name(StabilityCategory c) {
    switch (c) {
        case StabilityCategory::EasyCorrect: return "easy-correct";
        case StabilityCategory::HardIncorrect: return "hard-incorrect";
        case StabilityCategory::Unstable: return "unstable";
    }
    return "?";
}

namespace {

std::string instance_key(const std::string& doc, int sent, const Span& trigger) {
    return doc + "\x1f" + std::to_string(sent) + "\x1f" + std::to_string(trigger.start) + "," +
           std::to_string(trigger.end);
}

}  // namespace

std::vector<StabilityItem> stability_analysis(
    const std::vector<std::vector<PredictedInstance>>& trials,
    const std::vector<RoleInstance>& gold, int expected_trials) {
    if (static_cast<int>(trials.size()) != expected_trials) {
        throw ContractError("stability_analysis: got " + std::to_string(trials.size()) +
                            " trials, expected " + std::to_string(expected_trials));
    }
    const int n = expected_trials;

    std::vector<std::map<std::string, const PredictedInstance*>> index(trials.size());
    for (std::size_t t = 0; t < trials.size(); ++t) {
        for (const auto& p : trials[t]) {
            index[t][instance_key(p.doc_id, p.sent_id, p.trigger)] = &p;
        }
    }

    std::vector<StabilityItem> items;
    for (const auto& g : gold) {
        const SpanSet gold_spans = spans_by_role(g.roles);
        const std::string key = instance_key(g.sentence->doc_id, g.sentence->sent_id, g.trigger);
        for (const auto& [role, spans] : gold_spans) {
            StabilityItem item;
            item.doc_id = g.sentence->doc_id;
            item.sent_id = g.sentence->sent_id;
            item.trigger = g.trigger;
            item.role = role;
            item.gold_span_count = static_cast<int>(spans.size());
            item.total_trials = n;
            for (std::size_t t = 0; t < trials.size(); ++t) {
                auto it = index[t].find(key);
                if (it == index[t].end()) continue;
                bool correct = false;
                for (const auto& pr : it->second->roles) {
                    if (pr.label != role) continue;
                    for (const auto& gs : spans) {
                        if (pr.span.overlaps(gs)) {
                            correct = true;
                            break;
                        }
                    }
                    if (correct) break;
                }
                if (correct) ++item.correct_trials;
            }
            if (item.correct_trials >= n - 2) {
                item.category = StabilityCategory::EasyCorrect;
            } else if (item.correct_trials <= 2) {
                item.category = StabilityCategory::HardIncorrect;
            } else {
                item.category = StabilityCategory::Unstable;
            }
            items.push_back(std::move(item));
        }
    }
    return items;
}

// ---------------------------------------------------------------------------
// Distances

int span_distance(const Span& a, const Span& b) {
    if (a.overlaps(b)) return 0;
    if (a.end < b.start) return b.start - a.end;
    return a.start - b.end;
}

DistanceStats distance_by_category(const std::vector<RoleInstance>& gold,
                                   const std::vector<StabilityItem>& items,
                                   const std::string& role_label) {
    std::map<std::string, std::pair<const RoleInstance*, const StabilityItem*>> by_key;
    for (const auto& item : items) {
        if (item.role == role_label) {
            by_key[instance_key(item.doc_id, item.sent_id, item.trigger)] = {nullptr, &item};
        }
    }
    std::map<std::string, double> sums{{"all", 0.0}};
    std::map<std::string, std::int64_t> counts{{"all", 0}};
    for (const auto& g : gold) {
        const std::string key = instance_key(g.sentence->doc_id, g.sentence->sent_id, g.trigger);
        auto it = by_key.find(key);
        for (const auto& r : g.roles) {
            if (r.label != role_label) continue;
            const int d = span_distance(r.span, g.trigger);
            sums["all"] += d;
            ++counts["all"];
            if (it != by_key.end()) {
                const std::string cat = category_name(it->second.second->category);
                sums[cat] += d;
                ++counts[cat];
            }
        }
    }
    DistanceStats out;
    for (const auto& [cat, cnt] : counts) {
        out.span_count[cat] = cnt;
        out.mean_distance[cat] = cnt > 0 ? sums[cat] / static_cast<double>(cnt) : 0.0;
    }
    return out;
}

double mean_role_trigger_distance(const std::vector<RoleInstance>& instances,
                                  const std::string& role_label) {
    double sum = 0.0;
    std::int64_t count = 0;
    for (const auto& inst : instances) {
        for (const auto& r : inst.roles) {
            if (r.label != role_label) continue;
            sum += span_distance(r.span, inst.trigger);
            ++count;
        }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

// ---------------------------------------------------------------------------
// Table rendering

std::string render_cv_table(const std::vector<CvRow>& rows, const std::string& title) {
    static const char* kCols[] = {"holder/binary_f1", "holder/prop_f1", "target/binary_f1",
                                  "target/prop_f1"};
    static const char* kHeads[] = {"holder bin.F1", "holder prop.F1", "target bin.F1",
                                   "target prop.F1"};
    std::ostringstream os;
    os << title << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-10s", "model");
    os << buf;
    for (const char* h : kHeads) {
        std::snprintf(buf, sizeof(buf), "  %16s", h);
        os << buf;
    }
    os << "\n";
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%-10s", row.arch.c_str());
        os << buf;
        for (const char* c : kCols) {
            auto it = row.cells.find(c);
            if (it == row.cells.end()) {
                std::snprintf(buf, sizeof(buf), "  %16s", "-");
                os << buf;
                continue;
            }
            const CvCell& cell = it->second;
            std::string marks;
            if (cell.sig_vs_stl) marks += "*";
            if (cell.sig_vs_fs) marks += "#";
            char val[48];
            std::snprintf(val, sizeof(val), "%.2f(%.2f)%s", 100.0 * cell.stats.mean,
                          100.0 * cell.stats.sd, marks.c_str());
            std::snprintf(buf, sizeof(buf), "  %16s", val);
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace seqlab
