// Note-level evaluation: span/capture groups to diagnoses, per-attribute
// confusion matrices against gold, the metric set (precision, recall,
// specificity, F1 with macro and support-weighted averages), and the
// combined merge strategy.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perio/types.hpp"

namespace perio {

enum class Attribute { Stage, Grade, Extent };

std::string to_string(Attribute a);

// Groups spans by the section containing them, normalizes each group, drops
// groups with both stage and grade unknown, then picks the most severe.
std::optional<Diagnosis> predictions_to_note_diagnosis(const std::vector<EntitySpan>& spans,
                                                       const std::string& note_text);

// Note-keyed diagnosis maps covering every corpus note (absent when nothing
// was predicted for it).
DiagnosisMap diagnoses_from_spans(const std::map<std::string, std::vector<EntitySpan>>& spans,
                                  const std::vector<ClinicalNote>& notes);
DiagnosisMap diagnoses_from_captures(const std::vector<RawCapture>& captures,
                                     const std::vector<ClinicalNote>& notes);

// Rows = gold class, columns = predicted class; Unknown and absent both land
// in the trailing "absent" class.
struct ConfusionMatrix {
    Attribute attribute = Attribute::Stage;
    std::vector<std::string> classes;
    std::vector<std::vector<std::int64_t>> counts;

    std::int64_t total() const;
};

ConfusionMatrix build_confusion(const DiagnosisMap& predictions,
                                const std::vector<GoldRecord>& gold, Attribute attribute);

struct MetricValues {
    double precision = 0.0;
    double recall = 0.0;
    double specificity = 0.0;
    double f1 = 0.0;
};

struct ClassMetrics {
    MetricValues values;
    std::int64_t support = 0;
};

// Macro/weighted averages run over the diagnosis classes; the "absent" class
// participates in the one-vs-rest counts but not in the averages.
struct MetricsReport {
    std::vector<std::string> classes;
    std::map<std::string, ClassMetrics> per_class;
    MetricValues macro;
    MetricValues weighted;
};

MetricsReport compute_metrics(const ConfusionMatrix& matrix);

// Advanced as the base; unknown attributes filled from simple, and notes
// where advanced found nothing taken from simple wholesale.
DiagnosisMap merge_combined(const DiagnosisMap& advanced, const DiagnosisMap& simple);

struct AttributeReport {
    ConfusionMatrix confusion;
    MetricsReport metrics;
};

struct EvalReport {
    AttributeReport stage;
    AttributeReport grade;
    AttributeReport extent;

    const AttributeReport& for_attribute(Attribute a) const;
};

EvalReport evaluate(const DiagnosisMap& predictions, const std::vector<GoldRecord>& gold);

std::string render_report_text(const EvalReport& report);
void write_report_json(const EvalReport& report, const std::string& path);

// Lookup for scripting surfaces: avg is "macro" or "weighted", metric one of
// precision/recall/specificity/f1.
double report_value(const EvalReport& report, Attribute attribute, const std::string& avg,
                    const std::string& metric);

}  // namespace perio
