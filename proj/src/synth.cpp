#include "perio/synth.hpp"

#include <array>
#include <cstdio>

#include "perio/normalizer.hpp"
#include "perio/rng.hpp"

namespace perio {

namespace {

const std::vector<std::string> kMarkers = {"d:", "d-", "d :", "diagnosis:"};

const std::vector<std::string> kConnectives = {
    "tentative diagnosis is",
    "final diagnosis is",
    "clinical impression is",
};

// Typos stay within the optional-letter extent patterns.
const std::vector<std::string> kGeneralizedTypos = {"generlized", "generalzed", "generaized",
                                                    "generalizd", "generalize"};
const std::vector<std::string> kLocalizedTypos = {"localzed", "locaized", "localizd", "localize"};

// None of these may start with a diagnosis marker or contain the tokens
// stage/grade or anything the extent patterns match.
const std::vector<std::string> kBoilerplate = {
    "cc: routine recall visit",
    "patient reports no pain or sensitivity today",
    "medical history reviewed, no changes since last visit",
    "bp: 118/76 mmhg, pulse 72",
    "oral cancer screening negative",
    "probing depths recorded in perio chart",
    "bitewings taken, no new caries noted",
    "tx: prophylaxis completed, oral hygiene instructions given",
    "oh: fair, moderate plaque on posterior molars",
    "next visit: 3 month recall",
    "radiographic bone loss noted on posterior teeth",
    "pt tolerated procedure well, no complications",
    "flossing technique demonstrated, patient compliant",
    "occlusion stable, no mobility noted",
    "scaling and root planing completed on upper right quadrant",
    "home care reviewed with patient",
};

const std::vector<std::string> kStageRoman = {"i", "ii", "iii", "iv"};
const std::vector<std::string> kStageArabic = {"1", "2", "3", "4"};
const std::vector<std::string> kGradeLetters = {"a", "b", "c"};

struct RenderedLine {
    std::string text;
    std::vector<EntitySpan> spans;  // line-local offsets
    Diagnosis diagnosis;
};

class NoiseRates {
public:
    explicit NoiseRates(const SynthConfig& cfg) : rates_(cfg.noise_rates) {}
    double operator[](const std::string& kind) const {
        auto it = rates_.find(kind);
        return it == rates_.end() ? 0.0 : it->second;
    }

private:
    std::map<std::string, double> rates_;
};

void append_span(RenderedLine& line, SpanLabel label, const std::string& piece) {
    EntitySpan span;
    span.label = label;
    span.start = line.text.size();
    line.text += piece;
    span.end = line.text.size();
    span.surface = piece;
    line.spans.push_back(std::move(span));
}

// Grade spans absorb any punctuation directly after the value, matching what
// the grammars capture for that field.
void extend_grade_span(RenderedLine& line) {
    for (auto& span : line.spans) {
        if (span.label != SpanLabel::Grade) continue;
        std::size_t e = span.end;
        while (e < line.text.size() && std::string(".,;:!?").find(line.text[e]) != std::string::npos)
            ++e;
        span.end = e;
        span.surface = line.text.substr(span.start, span.end - span.start);
    }
}

RenderedLine render_perio_line(Rng& rng, const NoiseRates& noise) {
    RenderedLine line;
    line.diagnosis.stage = static_cast<Stage>(1 + static_cast<int>(rng.below(4)));
    line.diagnosis.grade = static_cast<Grade>(1 + static_cast<int>(rng.below(3)));
    line.diagnosis.extent = rng.chance(0.5) ? Extent::Generalized : Extent::Localized;

    const bool arabic = rng.chance(noise["arabic_stage"]);
    const bool extent_typo = rng.chance(noise["extent_typo"]);
    const bool grade_symbol = rng.chance(noise["grade_trailing_symbol"]);
    const bool perio_typo = rng.chance(noise["extent_typo"]);

    int family;
    if (rng.chance(noise["missing_extent"])) family = 4;
    else if (rng.chance(noise["order_permuted"])) family = rng.chance(0.5) ? 2 : 3;
    else family = 1;
    if (family == 4) line.diagnosis.extent = Extent::Unknown;

    const std::string stage_tok = arabic
        ? kStageArabic[static_cast<int>(line.diagnosis.stage) - 1]
        : kStageRoman[static_cast<int>(line.diagnosis.stage) - 1];
    const std::string grade_tok = kGradeLetters[static_cast<int>(line.diagnosis.grade) - 1];
    std::string extent_tok;
    if (line.diagnosis.extent == Extent::Generalized)
        extent_tok = extent_typo ? rng.pick(kGeneralizedTypos) : "generalized";
    else if (line.diagnosis.extent == Extent::Localized)
        extent_tok = extent_typo ? rng.pick(kLocalizedTypos) : "localized";
    const std::string symbol = grade_symbol ? (rng.chance(0.5) ? "." : ",") : "";
    const std::string perio_word = perio_typo ? "periodontis" : "periodontitis";

    line.text = rng.pick(kMarkers);
    line.text += ' ';
    switch (family) {
        case 1:
            append_span(line, SpanLabel::Extent, extent_tok);
            line.text += " ";
            append_span(line, SpanLabel::Stage, "stage " + stage_tok);
            line.text += " ";
            append_span(line, SpanLabel::Grade, "grade " + grade_tok);
            line.text += symbol + " " + perio_word + ".";
            break;
        case 2:
            append_span(line, SpanLabel::Extent, extent_tok);
            line.text += " " + perio_word + ", ";
            append_span(line, SpanLabel::Stage, "stage " + stage_tok);
            line.text += " ";
            append_span(line, SpanLabel::Grade, "grade " + grade_tok);
            line.text += symbol + ".";
            break;
        case 3:
            line.text += rng.pick(kConnectives) + " ";
            append_span(line, SpanLabel::Stage, "stage " + stage_tok);
            line.text += " ";
            append_span(line, SpanLabel::Grade, "grade " + grade_tok);
            line.text += symbol + " ";
            append_span(line, SpanLabel::Extent, extent_tok);
            break;
        default:  // family 4: extent never stated
            append_span(line, SpanLabel::Stage, "stage " + stage_tok);
            line.text += " ";
            append_span(line, SpanLabel::Grade, "grade " + grade_tok);
            line.text += symbol + " " + perio_word + ".";
            break;
    }
    extend_grade_span(line);
    return line;
}

RenderedLine render_non_perio_line(Rng& rng) {
    RenderedLine line;
    line.text = rng.chance(0.5) ? "d : " : "d: ";
    if (rng.chance(0.7)) line.text += rng.chance(0.5) ? "generalized " : "localized ";
    line.text += rng.chance(0.5) ? "plaque induced gingivitis" : "gingival inflammation noted";
    return line;
}

}  // namespace

SynthCorpus generate_synthetic_corpus(const SynthConfig& config) {
    config.validate();
    const NoiseRates noise(config);
    Rng rng(config.seed);
    SynthCorpus corpus;
    corpus.notes.reserve(config.n_notes);
    corpus.gold.reserve(config.n_notes);

    for (std::size_t i = 0; i < config.n_notes; ++i) {
        std::vector<RenderedLine> diagnosis_lines;
        std::optional<Diagnosis> gold_diagnosis;
        if (rng.chance(noise["non_perio_line"])) {
            diagnosis_lines.push_back(render_non_perio_line(rng));
        } else {
            diagnosis_lines.push_back(render_perio_line(rng, noise));
            if (rng.chance(noise["multi_diagnosis"]))
                diagnosis_lines.push_back(render_perio_line(rng, noise));
            std::vector<Diagnosis> rendered;
            for (const auto& line : diagnosis_lines) rendered.push_back(line.diagnosis);
            gold_diagnosis = resolve_most_severe(rendered);
        }

        std::vector<std::string> lines;
        const std::size_t n_boiler = 3 + rng.below(8);
        for (std::size_t b = 0; b < n_boiler; ++b) lines.push_back(rng.pick(kBoilerplate));

        // Diagnosis lines keep their relative order under random placement.
        std::vector<std::size_t> dx_positions;
        std::size_t pos1 = rng.below(lines.size() + 1);
        lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(pos1), diagnosis_lines[0].text);
        dx_positions.push_back(pos1);
        if (diagnosis_lines.size() > 1) {
            std::size_t pos2 = pos1 + 1 + rng.below(lines.size() - pos1);
            lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(pos2), diagnosis_lines[1].text);
            dx_positions.push_back(pos2);
        }

        char id[32];
        std::snprintf(id, sizeof id, "synth-%06zu", i + 1);
        ClinicalNote note;
        note.note_id = id;
        note.source = Source::Synthetic;

        std::vector<std::size_t> line_offsets;
        for (std::size_t k = 0; k < lines.size(); ++k) {
            line_offsets.push_back(note.text.size());
            note.text += lines[k];
            if (k + 1 < lines.size()) note.text += '\n';
        }

        GoldRecord gold;
        gold.note_id = note.note_id;
        gold.diagnosis = gold_diagnosis;
        for (std::size_t d = 0; d < diagnosis_lines.size(); ++d) {
            const std::size_t offset = line_offsets[dx_positions[d]];
            for (EntitySpan span : diagnosis_lines[d].spans) {
                span.start += offset;
                span.end += offset;
                gold.spans.push_back(std::move(span));
            }
        }

        corpus.notes.push_back(std::move(note));
        corpus.gold.push_back(std::move(gold));
    }
    return corpus;
}

}  // namespace perio
