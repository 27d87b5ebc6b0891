#include "perio/tagger.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "perio/io.hpp"
#include "perio/rng.hpp"
#include "perio/sectionizer.hpp"

namespace perio {

namespace {

// Bytes >= 128 count as word characters so multi-byte UTF-8 stays glued.
bool is_word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 128; }
bool is_space(unsigned char c) { return std::isspace(c); }

std::string lowered(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string word_shape(const std::string& s) {
    std::string shape;
    for (unsigned char c : s) {
        if (shape.size() >= 8) break;
        if (std::isupper(c)) shape += 'X';
        else if (std::islower(c)) shape += 'x';
        else if (std::isdigit(c)) shape += 'd';
        else shape += static_cast<char>(c);
    }
    return shape;
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (is_space(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && !is_space(static_cast<unsigned char>(text[j]))) ++j;
        // Peel single-character punctuation tokens off both ends.
        std::size_t core_begin = i, core_end = j;
        while (core_begin < core_end &&
               !is_word_char(static_cast<unsigned char>(text[core_begin])))
            ++core_begin;
        while (core_end > core_begin &&
               !is_word_char(static_cast<unsigned char>(text[core_end - 1])))
            --core_end;
        for (std::size_t k = i; k < core_begin; ++k)
            tokens.push_back(Token{text.substr(k, 1), k, k + 1});
        if (core_end > core_begin)
            tokens.push_back(
                Token{text.substr(core_begin, core_end - core_begin), core_begin, core_end});
        for (std::size_t k = core_end; k < j; ++k)
            tokens.push_back(Token{text.substr(k, 1), k, k + 1});
        i = j;
    }
    return tokens;
}

const std::array<std::string, kNumTags>& tag_names() {
    static const std::array<std::string, kNumTags> names = {
        "O", "B-EXTENT", "B-GRADE", "B-STAGE", "I-EXTENT", "I-GRADE", "I-STAGE"};
    return names;
}

int tag_index(const std::string& name) {
    const auto& names = tag_names();
    for (int i = 0; i < kNumTags; ++i)
        if (names[i] == name) return i;
    throw Error(ErrorKind::Domain, "unknown tag: " + name);
}

namespace {

int begin_tag(SpanLabel label) {
    switch (label) {
        case SpanLabel::Extent: return 1;
        case SpanLabel::Grade: return 2;
        default: return 3;
    }
}

int inside_tag(SpanLabel label) { return begin_tag(label) + 3; }

bool is_inside_tag(int tag) { return tag >= 4; }
bool is_begin_tag(int tag) { return tag >= 1 && tag <= 3; }

SpanLabel tag_label(int tag) {
    switch ((tag - 1) % 3) {
        case 0: return SpanLabel::Extent;
        case 1: return SpanLabel::Grade;
        default: return SpanLabel::Stage;
    }
}

}  // namespace

std::vector<int> spans_to_tags(const AnnotatedSentence& sentence) {
    const std::vector<Token> tokens = tokenize(sentence.text);
    std::vector<int> tags(tokens.size(), 0);
    for (const auto& span : sentence.spans) {
        bool first = true;
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            const Token& tok = tokens[t];
            const bool overlaps = tok.start < span.end && tok.end > span.start;
            if (!overlaps) continue;
            const bool contained = tok.start >= span.start && tok.end <= span.end;
            if (!contained)
                throw Error(ErrorKind::Invalid,
                            "span " + to_string(span.label) + " [" + std::to_string(span.start) +
                                "," + std::to_string(span.end) + ") crosses a token boundary");
            tags[t] = first ? begin_tag(span.label) : inside_tag(span.label);
            first = false;
        }
    }
    return tags;
}

std::vector<EntitySpan> tags_to_spans(const std::vector<Token>& tokens,
                                      const std::vector<int>& tags, const std::string& text) {
    std::vector<EntitySpan> spans;
    std::optional<std::size_t> open;  // index into spans
    std::optional<SpanLabel> open_label;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        const int tag = tags[t];
        if (tag == 0) {
            open.reset();
            open_label.reset();
            continue;
        }
        const SpanLabel label = tag_label(tag);
        const bool continues = is_inside_tag(tag) && open && open_label == label;
        if (continues) {
            spans[*open].end = tokens[t].end;
        } else {
            // B-X, or an orphan I-X promoted to B-X.
            EntitySpan span;
            span.label = label;
            span.start = tokens[t].start;
            span.end = tokens[t].end;
            spans.push_back(span);
            open = spans.size() - 1;
            open_label = label;
        }
    }
    for (auto& span : spans) span.surface = text.substr(span.start, span.end - span.start);
    return spans;
}

namespace {

constexpr const char* kBos = "<s>";
constexpr const char* kEos = "</s>";

std::string neighbor(const std::vector<std::string>& lower, std::ptrdiff_t i) {
    if (i < 0) return kBos;
    if (i >= static_cast<std::ptrdiff_t>(lower.size())) return kEos;
    return lower[static_cast<std::size_t>(i)];
}

// Feature template v1: lowercased token, shape, 3-char prefix/suffix,
// neighbors at +-1/+-2, previous predicted tag, bias.
std::vector<std::string> features_at(const std::vector<std::string>& lower,
                                     const std::vector<std::string>& shapes, std::size_t i,
                                     int prev_tag) {
    const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
    const std::string& w = lower[i];
    std::vector<std::string> feats;
    feats.reserve(10);
    feats.push_back("bias");
    feats.push_back("w=" + w);
    feats.push_back("shape=" + shapes[i]);
    feats.push_back("p3=" + w.substr(0, 3));
    feats.push_back("s3=" + (w.size() > 3 ? w.substr(w.size() - 3) : w));
    feats.push_back("w-1=" + neighbor(lower, p - 1));
    feats.push_back("w-2=" + neighbor(lower, p - 2));
    feats.push_back("w+1=" + neighbor(lower, p + 1));
    feats.push_back("w+2=" + neighbor(lower, p + 2));
    feats.push_back("t-1=" + tag_names()[static_cast<std::size_t>(prev_tag)]);
    return feats;
}

struct TokenizedSentence {
    std::vector<std::string> lower;
    std::vector<std::string> shapes;
    std::vector<int> gold;
};

TokenizedSentence prepare(const AnnotatedSentence& sentence) {
    TokenizedSentence out;
    for (const Token& tok : tokenize(sentence.text)) {
        out.lower.push_back(lowered(tok.surface));
        out.shapes.push_back(word_shape(tok.surface));
    }
    out.gold = spans_to_tags(sentence);
    return out;
}

class Perceptron {
public:
    int predict_one(const std::vector<std::string>& feats) const {
        std::array<double, kNumTags> scores{};
        for (const auto& f : feats) {
            auto it = weights_.find(f);
            if (it == weights_.end()) continue;
            for (int t = 0; t < kNumTags; ++t) scores[t] += it->second[t];
        }
        int best = 0;
        for (int t = 1; t < kNumTags; ++t)
            if (scores[t] > scores[best]) best = t;
        return best;
    }

    void update(const std::vector<std::string>& feats, int gold, int pred) {
        if (gold == pred) return;
        for (const auto& f : feats) {
            bump(f, gold, 1.0);
            bump(f, pred, -1.0);
        }
    }

    void tick() { ++now_; }

    std::unordered_map<std::string, std::array<double, kNumTags>> averaged() const {
        std::unordered_map<std::string, std::array<double, kNumTags>> avg;
        if (now_ == 0) return avg;
        for (const auto& [f, w] : weights_) {
            const auto& tot = totals_.at(f);
            const auto& ts = stamps_.at(f);
            std::array<double, kNumTags> a{};
            bool any = false;
            for (int t = 0; t < kNumTags; ++t) {
                double total = tot[t] + w[t] * static_cast<double>(now_ - ts[t]);
                a[t] = total / static_cast<double>(now_);
                if (a[t] != 0.0) any = true;
            }
            if (any) avg[f] = a;
        }
        return avg;
    }

private:
    void bump(const std::string& f, int tag, double v) {
        auto& w = weights_[f];
        auto& tot = totals_[f];
        auto& ts = stamps_[f];
        tot[tag] += w[tag] * static_cast<double>(now_ - ts[tag]);
        ts[tag] = now_;
        w[tag] += v;
    }

    std::unordered_map<std::string, std::array<double, kNumTags>> weights_;
    std::unordered_map<std::string, std::array<double, kNumTags>> totals_;
    std::unordered_map<std::string, std::array<std::uint64_t, kNumTags>> stamps_;
    std::uint64_t now_ = 0;
};

std::vector<int> decode(const TaggerModel& model, const std::vector<std::string>& lower,
                        const std::vector<std::string>& shapes) {
    std::vector<int> tags(lower.size(), 0);
    int prev = 0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        const auto feats = features_at(lower, shapes, i, prev);
        std::array<double, kNumTags> scores{};
        for (const auto& f : feats) {
            auto it = model.weights.find(f);
            if (it == model.weights.end()) continue;
            for (int t = 0; t < kNumTags; ++t) scores[t] += it->second[t];
        }
        int best = 0;
        for (int t = 1; t < kNumTags; ++t)
            if (scores[t] > scores[best]) best = t;
        tags[i] = best;
        prev = best;
    }
    return tags;
}

double validation_f1(const TaggerModel& snapshot, const std::vector<AnnotatedSentence>& sentences) {
    if (sentences.empty()) return 0.0;
    std::vector<std::vector<EntitySpan>> predicted, reference;
    for (const auto& s : sentences) {
        predicted.push_back(predict(snapshot, s.text));
        reference.push_back(s.spans);
    }
    return span_prf(predicted, reference).f1;
}

}  // namespace

TaggerModel train(const DatasetSplit& split, const TrainParams& params, EpochCallback on_epoch,
                  void* user) {
    if (params.epochs < 1) throw Error(ErrorKind::Invalid, "epochs must be >= 1");
    if (split.train.empty()) throw Error(ErrorKind::Invalid, "training set is empty");

    std::vector<TokenizedSentence> prepared;
    prepared.reserve(split.train.size());
    for (const auto& s : split.train) prepared.push_back(prepare(s));

    TaggerModel model;
    model.epochs = params.epochs;
    model.seed = params.seed;

    Perceptron learner;
    Rng rng(params.seed);
    std::vector<std::size_t> order(prepared.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= params.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t idx : order) {
            const TokenizedSentence& s = prepared[idx];
            int prev = 0;
            for (std::size_t i = 0; i < s.lower.size(); ++i) {
                learner.tick();
                const auto feats = features_at(s.lower, s.shapes, i, prev);
                const int pred = learner.predict_one(feats);
                learner.update(feats, s.gold[i], pred);
                prev = pred;
            }
        }
        TaggerModel snapshot = model;
        snapshot.weights = learner.averaged();
        const double f1 = validation_f1(snapshot, split.validation);
        model.val_f1_history.push_back(f1);
        if (on_epoch) on_epoch(epoch, f1, user);
    }
    model.weights = learner.averaged();
    return model;
}

std::vector<EntitySpan> predict(const TaggerModel& model, const std::string& text) {
    const std::vector<Token> tokens = tokenize(text);
    std::vector<std::string> lower, shapes;
    lower.reserve(tokens.size());
    shapes.reserve(tokens.size());
    for (const Token& tok : tokens) {
        lower.push_back(lowered(tok.surface));
        shapes.push_back(word_shape(tok.surface));
    }
    return tags_to_spans(tokens, decode(model, lower, shapes), text);
}

std::map<std::string, std::vector<EntitySpan>> predict_notes(
    const TaggerModel& model, const std::vector<ClinicalNote>& notes, int workers) {
    std::vector<std::vector<EntitySpan>> results(notes.size());
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::vector<EntitySpan> note_spans;
            for (const Section& section : split_sections(notes[i])) {
                for (EntitySpan span : predict(model, section.text)) {
                    span.start += section.start;
                    span.end += section.start;
                    note_spans.push_back(std::move(span));
                }
            }
            results[i] = std::move(note_spans);
        }
    };
    const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(notes.size())));
    if (n_workers == 1) {
        run_range(0, notes.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (notes.size() + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            const std::size_t begin = static_cast<std::size_t>(w) * chunk;
            const std::size_t end = std::min(notes.size(), begin + chunk);
            if (begin < end) pool.emplace_back(run_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    std::map<std::string, std::vector<EntitySpan>> out;
    for (std::size_t i = 0; i < notes.size(); ++i) out[notes[i].note_id] = std::move(results[i]);
    return out;
}

void save_model(const TaggerModel& model, const std::string& path) {
    nlohmann::ordered_json j;
    j["format_version"] = model.format_version;
    j["feature_template"] = model.feature_template;
    j["labels"] = tag_names();
    j["epochs"] = model.epochs;
    j["seed"] = model.seed;
    j["val_f1_history"] = model.val_f1_history;
    std::map<std::string, std::array<double, kNumTags>> sorted(model.weights.begin(),
                                                               model.weights.end());
    nlohmann::ordered_json weights;
    for (const auto& [f, w] : sorted) weights[f] = w;
    j["weights"] = weights;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    out << j.dump() << '\n';
}

TaggerModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open for reading: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, path + ": invalid JSON: " + e.what());
    }
    TaggerModel model;
    model.format_version = j.at("format_version").get<int>();
    if (model.format_version != 1)
        throw Error(ErrorKind::Parse, path + ": unsupported model format version");
    model.feature_template = j.at("feature_template").get<std::string>();
    const auto labels = j.at("labels").get<std::vector<std::string>>();
    if (!std::equal(labels.begin(), labels.end(), tag_names().begin(), tag_names().end()))
        throw Error(ErrorKind::Parse, path + ": unexpected label set");
    model.epochs = j.at("epochs").get<int>();
    model.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("val_f1_history"))
        model.val_f1_history = j.at("val_f1_history").get<std::vector<double>>();
    for (const auto& [f, w] : j.at("weights").items())
        model.weights[f] = w.get<std::array<double, kNumTags>>();
    return model;
}

std::map<std::string, std::vector<EntitySpan>> import_predictions(
    const std::string& path, const std::vector<ClinicalNote>& notes) {
    auto predictions = load_predictions(path);
    std::map<std::string, const ClinicalNote*> index;
    for (const auto& n : notes) index[n.note_id] = &n;
    for (auto& [note_id, spans] : predictions) {
        auto it = index.find(note_id);
        if (it == index.end())
            throw Error(ErrorKind::Invalid, "prediction for unknown note_id: " + note_id);
        const std::string& text = it->second->text;
        for (auto& span : spans) {
            if (span.end > text.size())
                throw Error(ErrorKind::Bounds, "span out of bounds for note " + note_id);
            span.surface = text.substr(span.start, span.end - span.start);
        }
    }
    return predictions;
}

SpanPrf span_prf(const std::vector<std::vector<EntitySpan>>& predicted,
                 const std::vector<std::vector<EntitySpan>>& reference) {
    std::size_t tp = 0, n_pred = 0, n_ref = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        n_pred += predicted[i].size();
        n_ref += reference[i].size();
        for (const auto& p : predicted[i])
            for (const auto& r : reference[i])
                if (p.label == r.label && p.start == r.start && p.end == r.end) {
                    ++tp;
                    break;
                }
    }
    SpanPrf prf;
    prf.precision = n_pred ? static_cast<double>(tp) / static_cast<double>(n_pred) : 0.0;
    prf.recall = n_ref ? static_cast<double>(tp) / static_cast<double>(n_ref) : 0.0;
    prf.f1 = (prf.precision + prf.recall) > 0.0
                 ? 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall)
                 : 0.0;
    return prf;
}

}  // namespace perio
