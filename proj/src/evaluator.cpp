#include "perio/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "perio/normalizer.hpp"
#include "perio/sectionizer.hpp"

namespace perio {

namespace {

std::string lowered(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Span surfaces may carry the anchoring keyword ("stage iii"); the value is
// what remains after it.
std::string span_value(const EntitySpan& span) {
    const std::string low = lowered(span.surface);
    if (span.label == SpanLabel::Stage && low.rfind("stage", 0) == 0)
        return span.surface.substr(5);
    if (span.label == SpanLabel::Grade && low.rfind("grade", 0) == 0)
        return span.surface.substr(5);
    return span.surface;
}

}  // namespace

std::string to_string(Attribute a) {
    switch (a) {
        case Attribute::Stage: return "stage";
        case Attribute::Grade: return "grade";
        default: return "extent";
    }
}

std::optional<Diagnosis> predictions_to_note_diagnosis(const std::vector<EntitySpan>& spans,
                                                       const std::string& note_text) {
    if (spans.empty()) return std::nullopt;
    ClinicalNote tmp{"", note_text};
    const std::vector<Section> sections = split_sections(tmp);
    auto section_of = [&](std::size_t pos) -> std::size_t {
        for (std::size_t s = 0; s < sections.size(); ++s)
            if (pos >= sections[s].start && pos < sections[s].end) return s;
        return sections.size();
    };

    std::map<std::size_t, std::vector<const EntitySpan*>> groups;
    for (const auto& span : spans) groups[section_of(span.start)].push_back(&span);

    std::vector<Diagnosis> candidates;
    for (auto& [sec, group] : groups) {
        std::sort(group.begin(), group.end(),
                  [](const EntitySpan* a, const EntitySpan* b) { return a->start < b->start; });
        Diagnosis d;
        bool have_stage = false, have_grade = false, have_extent = false;
        for (const EntitySpan* span : group) {
            if (span->label == SpanLabel::Stage && !have_stage) {
                d.stage = normalize_stage(span_value(*span));
                have_stage = true;
            } else if (span->label == SpanLabel::Grade && !have_grade) {
                d.grade = normalize_grade(span_value(*span));
                have_grade = true;
            } else if (span->label == SpanLabel::Extent && !have_extent) {
                d.extent = normalize_extent(span_value(*span));
                have_extent = true;
            }
        }
        if (d.stage == Stage::Unknown && d.grade == Grade::Unknown) continue;
        candidates.push_back(d);
    }
    return resolve_most_severe(candidates);
}

DiagnosisMap diagnoses_from_spans(const std::map<std::string, std::vector<EntitySpan>>& spans,
                                  const std::vector<ClinicalNote>& notes) {
    DiagnosisMap map;
    for (const auto& note : notes) {
        auto it = spans.find(note.note_id);
        map[note.note_id] = it == spans.end()
                                ? std::nullopt
                                : predictions_to_note_diagnosis(it->second, note.text);
    }
    return map;
}

DiagnosisMap diagnoses_from_captures(const std::vector<RawCapture>& captures,
                                     const std::vector<ClinicalNote>& notes) {
    std::map<std::string, std::vector<Diagnosis>> per_note;
    for (const auto& cap : captures) per_note[cap.note_id].push_back(to_diagnosis(cap));
    DiagnosisMap map;
    for (const auto& note : notes) {
        auto it = per_note.find(note.note_id);
        map[note.note_id] =
            it == per_note.end() ? std::nullopt : resolve_most_severe(it->second);
    }
    return map;
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t sum = 0;
    for (const auto& row : counts)
        for (std::int64_t c : row) sum += c;
    return sum;
}

namespace {

std::vector<std::string> attribute_classes(Attribute a) {
    switch (a) {
        case Attribute::Stage: return {"I", "II", "III", "IV", "absent"};
        case Attribute::Grade: return {"A", "B", "C", "absent"};
        default: return {"localized", "generalized", "absent"};
    }
}

// Unknown values and absent diagnoses share the "absent" class.
std::size_t class_of(const std::optional<Diagnosis>& d, Attribute a,
                     const std::vector<std::string>& classes) {
    const std::size_t absent = classes.size() - 1;
    if (!d) return absent;
    switch (a) {
        case Attribute::Stage:
            return d->stage == Stage::Unknown ? absent
                                              : static_cast<std::size_t>(d->stage) - 1;
        case Attribute::Grade:
            return d->grade == Grade::Unknown ? absent
                                              : static_cast<std::size_t>(d->grade) - 1;
        default:
            return d->extent == Extent::Unknown ? absent
                                                : static_cast<std::size_t>(d->extent) - 1;
    }
}

}  // namespace

ConfusionMatrix build_confusion(const DiagnosisMap& predictions,
                                const std::vector<GoldRecord>& gold, Attribute attribute) {
    ConfusionMatrix m;
    m.attribute = attribute;
    m.classes = attribute_classes(attribute);
    m.counts.assign(m.classes.size(), std::vector<std::int64_t>(m.classes.size(), 0));

    std::map<std::string, bool> gold_ids;
    for (const auto& rec : gold) gold_ids[rec.note_id] = true;
    for (const auto& [note_id, diag] : predictions)
        if (!gold_ids.count(note_id))
            throw Error(ErrorKind::Invalid, "prediction for note_id outside the gold set: " + note_id);

    for (const auto& rec : gold) {
        auto it = predictions.find(rec.note_id);
        const std::optional<Diagnosis> pred =
            it == predictions.end() ? std::nullopt : it->second;
        m.counts[class_of(rec.diagnosis, attribute, m.classes)]
                [class_of(pred, attribute, m.classes)] += 1;
    }
    return m;
}

MetricsReport compute_metrics(const ConfusionMatrix& matrix) {
    const std::size_t n = matrix.classes.size();
    if (n == 0 || matrix.total() == 0)
        throw Error(ErrorKind::Invalid, "empty confusion matrix");
    MetricsReport report;
    report.classes = matrix.classes;
    const double total = static_cast<double>(matrix.total());

    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };

    double macro_n = 0.0, weight_sum = 0.0;
    MetricValues macro_acc, weighted_acc;
    for (std::size_t c = 0; c < n; ++c) {
        double tp = 0, row = 0, col = 0;
        for (std::size_t k = 0; k < n; ++k) {
            row += static_cast<double>(matrix.counts[c][k]);
            col += static_cast<double>(matrix.counts[k][c]);
        }
        tp = static_cast<double>(matrix.counts[c][c]);
        const double fp = col - tp;
        const double fn = row - tp;
        const double tn = total - tp - fp - fn;

        ClassMetrics cm;
        cm.support = static_cast<std::int64_t>(row);
        cm.values.precision = ratio(tp, tp + fp);
        cm.values.recall = ratio(tp, tp + fn);
        cm.values.specificity = ratio(tn, tn + fp);
        cm.values.f1 = ratio(2.0 * cm.values.precision * cm.values.recall,
                             cm.values.precision + cm.values.recall);
        report.per_class[matrix.classes[c]] = cm;

        if (matrix.classes[c] == "absent") continue;
        macro_n += 1.0;
        macro_acc.precision += cm.values.precision;
        macro_acc.recall += cm.values.recall;
        macro_acc.specificity += cm.values.specificity;
        macro_acc.f1 += cm.values.f1;
        const double w = row;
        weight_sum += w;
        weighted_acc.precision += w * cm.values.precision;
        weighted_acc.recall += w * cm.values.recall;
        weighted_acc.specificity += w * cm.values.specificity;
        weighted_acc.f1 += w * cm.values.f1;
    }
    if (macro_n > 0.0) {
        report.macro.precision = macro_acc.precision / macro_n;
        report.macro.recall = macro_acc.recall / macro_n;
        report.macro.specificity = macro_acc.specificity / macro_n;
        report.macro.f1 = macro_acc.f1 / macro_n;
    }
    if (weight_sum > 0.0) {
        report.weighted.precision = weighted_acc.precision / weight_sum;
        report.weighted.recall = weighted_acc.recall / weight_sum;
        report.weighted.specificity = weighted_acc.specificity / weight_sum;
        report.weighted.f1 = weighted_acc.f1 / weight_sum;
    }
    return report;
}

DiagnosisMap merge_combined(const DiagnosisMap& advanced, const DiagnosisMap& simple) {
    if (advanced.size() != simple.size())
        throw Error(ErrorKind::Invalid, "merge inputs cover different note sets");
    DiagnosisMap merged;
    for (const auto& [note_id, adv] : advanced) {
        auto it = simple.find(note_id);
        if (it == simple.end())
            throw Error(ErrorKind::Invalid, "merge inputs cover different note sets: " + note_id);
        const auto& simp = it->second;
        if (!adv) {
            merged[note_id] = simp;
            continue;
        }
        Diagnosis d = *adv;
        if (simp) {
            if (d.stage == Stage::Unknown) d.stage = simp->stage;
            if (d.grade == Grade::Unknown) d.grade = simp->grade;
            if (d.extent == Extent::Unknown) d.extent = simp->extent;
        }
        merged[note_id] = d;
    }
    return merged;
}

const AttributeReport& EvalReport::for_attribute(Attribute a) const {
    switch (a) {
        case Attribute::Stage: return stage;
        case Attribute::Grade: return grade;
        default: return extent;
    }
}

EvalReport evaluate(const DiagnosisMap& predictions, const std::vector<GoldRecord>& gold) {
    EvalReport report;
    for (Attribute a : {Attribute::Stage, Attribute::Grade, Attribute::Extent}) {
        AttributeReport ar;
        ar.confusion = build_confusion(predictions, gold, a);
        ar.metrics = compute_metrics(ar.confusion);
        if (a == Attribute::Stage) report.stage = std::move(ar);
        else if (a == Attribute::Grade) report.grade = std::move(ar);
        else report.extent = std::move(ar);
    }
    return report;
}

namespace {

void render_attribute(std::ostringstream& out, const std::string& title,
                      const AttributeReport& ar) {
    out << "== " << title << " ==\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %10s %10s %12s %10s %9s\n", "class", "precision",
                  "recall", "specificity", "f1", "support");
    out << line;
    for (const auto& cls : ar.metrics.classes) {
        const auto& cm = ar.metrics.per_class.at(cls);
        std::snprintf(line, sizeof line, "%-12s %10.4f %10.4f %12.4f %10.4f %9lld\n", cls.c_str(),
                      cm.values.precision, cm.values.recall, cm.values.specificity, cm.values.f1,
                      static_cast<long long>(cm.support));
        out << line;
    }
    std::snprintf(line, sizeof line, "%-12s %10.4f %10.4f %12.4f %10.4f\n", "macro",
                  ar.metrics.macro.precision, ar.metrics.macro.recall,
                  ar.metrics.macro.specificity, ar.metrics.macro.f1);
    out << line;
    std::snprintf(line, sizeof line, "%-12s %10.4f %10.4f %12.4f %10.4f\n", "weighted",
                  ar.metrics.weighted.precision, ar.metrics.weighted.recall,
                  ar.metrics.weighted.specificity, ar.metrics.weighted.f1);
    out << line;
}

nlohmann::ordered_json metrics_json(const MetricValues& v) {
    return {{"precision", v.precision},
            {"recall", v.recall},
            {"specificity", v.specificity},
            {"f1", v.f1}};
}

nlohmann::ordered_json attribute_json(const AttributeReport& ar) {
    nlohmann::ordered_json j;
    j["attribute"] = to_string(ar.confusion.attribute);
    j["classes"] = ar.confusion.classes;
    j["counts"] = ar.confusion.counts;
    nlohmann::ordered_json per_class;
    for (const auto& cls : ar.metrics.classes) {
        const auto& cm = ar.metrics.per_class.at(cls);
        nlohmann::ordered_json cj = metrics_json(cm.values);
        cj["support"] = cm.support;
        per_class[cls] = cj;
    }
    j["per_class"] = per_class;
    j["macro"] = metrics_json(ar.metrics.macro);
    j["weighted"] = metrics_json(ar.metrics.weighted);
    return j;
}

}  // namespace

std::string render_report_text(const EvalReport& report) {
    std::ostringstream out;
    render_attribute(out, "Stage", report.stage);
    render_attribute(out, "Grade", report.grade);
    render_attribute(out, "Extent", report.extent);
    return out.str();
}

void write_report_json(const EvalReport& report, const std::string& path) {
    nlohmann::ordered_json j;
    j["stage"] = attribute_json(report.stage);
    j["grade"] = attribute_json(report.grade);
    j["extent"] = attribute_json(report.extent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

double report_value(const EvalReport& report, Attribute attribute, const std::string& avg,
                    const std::string& metric) {
    const MetricsReport& m = report.for_attribute(attribute).metrics;
    const MetricValues* v = nullptr;
    if (avg == "macro") v = &m.macro;
    else if (avg == "weighted") v = &m.weighted;
    else throw Error(ErrorKind::Invalid, "avg must be macro or weighted: " + avg);
    if (metric == "precision") return v->precision;
    if (metric == "recall") return v->recall;
    if (metric == "specificity") return v->specificity;
    if (metric == "f1") return v->f1;
    throw Error(ErrorKind::Invalid, "unknown metric: " + metric);
}

}  // namespace perio
