#include "perio.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "perio/dataset.hpp"
#include "perio/evaluator.hpp"
#include "perio/extractor.hpp"
#include "perio/io.hpp"
#include "perio/synth.hpp"
#include "perio/tables.hpp"
#include "perio/tagger.hpp"
#include "perio/types.hpp"

namespace {

thread_local std::string g_last_error;

perio_status status_of(perio::ErrorKind kind) {
    switch (kind) {
        case perio::ErrorKind::Io: return PERIO_E_IO;
        case perio::ErrorKind::Parse: return PERIO_E_PARSE;
        case perio::ErrorKind::Domain: return PERIO_E_DOMAIN;
        case perio::ErrorKind::Bounds: return PERIO_E_BOUNDS;
        default: return PERIO_E_INVALID;
    }
}

perio_status fail(perio_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

template <typename Fn>
perio_status guarded(Fn fn) {
    try {
        fn();
        g_last_error.clear();
        return PERIO_OK;
    } catch (const perio::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::exception& e) {
        return fail(PERIO_E_INVALID, e.what());
    }
}

perio_status require(bool cond, const char* what) {
    if (cond) return PERIO_OK;
    return fail(PERIO_E_INVALID, std::string("null argument: ") + what);
}

}  // namespace

struct perio_corpus {
    std::vector<perio::ClinicalNote> notes;
    std::vector<perio::GoldRecord> gold;
    bool has_gold = false;
};

struct perio_captures {
    std::vector<perio::RawCapture> captures;
};

struct perio_dataset {
    perio::DatasetSplit split;
};

struct perio_model {
    perio::TaggerModel model;
};

struct perio_spans {
    std::map<std::string, std::vector<perio::EntitySpan>> spans;
};

struct perio_diagnoses {
    perio::DiagnosisMap map;
};

struct perio_report {
    perio::EvalReport report;
    std::string text;
};

extern "C" {

const char* perio_version(void) { return "1.0.0"; }

const char* perio_last_error(void) { return g_last_error.c_str(); }

perio_status perio_synth(const char* config_json, perio_corpus** out) {
    if (auto st = require(config_json && out, "config_json/out")) return st;
    return guarded([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(config_json);
        } catch (const nlohmann::json::exception& e) {
            throw perio::Error(perio::ErrorKind::Parse,
                               std::string("invalid config JSON: ") + e.what());
        }
        auto cfg = perio::SynthConfig::with_defaults(j.at("n_notes").get<std::size_t>(),
                                                     j.value("seed", std::uint64_t{42}));
        if (j.contains("noise_rates"))
            for (const auto& [kind, rate] : j["noise_rates"].items())
                cfg.noise_rates[kind] = rate.get<double>();
        auto corpus = perio::generate_synthetic_corpus(cfg);
        auto* handle = new perio_corpus;
        handle->notes = std::move(corpus.notes);
        handle->gold = std::move(corpus.gold);
        handle->has_gold = true;
        *out = handle;
    });
}

perio_status perio_corpus_open(const char* notes_path, const char* format, perio_corpus** out) {
    if (auto st = require(notes_path && format && out, "notes_path/format/out")) return st;
    return guarded([&] {
        auto* handle = new perio_corpus;
        try {
            handle->notes =
                perio::load_notes(notes_path, perio::notes_format_from_string(format));
        } catch (...) {
            delete handle;
            throw;
        }
        *out = handle;
    });
}

perio_status perio_corpus_load_gold(perio_corpus* corpus, const char* gold_path) {
    if (auto st = require(corpus && gold_path, "corpus/gold_path")) return st;
    return guarded([&] {
        auto gold = perio::load_gold(gold_path);
        perio::validate_gold(gold, corpus->notes);
        corpus->gold = std::move(gold);
        corpus->has_gold = true;
    });
}

perio_status perio_corpus_write_notes(const perio_corpus* corpus, const char* path,
                                      const char* format) {
    if (auto st = require(corpus && path && format, "corpus/path/format")) return st;
    return guarded([&] {
        perio::write_notes(corpus->notes, path, perio::notes_format_from_string(format));
    });
}

perio_status perio_corpus_write_gold(const perio_corpus* corpus, const char* path) {
    if (auto st = require(corpus && path, "corpus/path")) return st;
    return guarded([&] {
        if (!corpus->has_gold)
            throw perio::Error(perio::ErrorKind::Invalid, "corpus has no gold records");
        perio::write_gold(corpus->gold, path);
    });
}

perio_status perio_corpus_size(const perio_corpus* corpus, size_t* out) {
    if (auto st = require(corpus && out, "corpus/out")) return st;
    *out = corpus->notes.size();
    return PERIO_OK;
}

void perio_corpus_close(perio_corpus* corpus) { delete corpus; }

perio_status perio_extract(const perio_corpus* corpus, perio_method method,
                           perio_captures** out) {
    if (auto st = require(corpus && out, "corpus/out")) return st;
    return guarded([&] {
        auto* handle = new perio_captures;
        const auto m = method == PERIO_METHOD_SIMPLE ? perio::Method::Simple
                                                     : perio::Method::Advanced;
        for (const auto& note : corpus->notes)
            for (auto& cap : perio::extract_note(note, m))
                handle->captures.push_back(std::move(cap));
        *out = handle;
    });
}

perio_status perio_captures_open(const char* path, perio_captures** out) {
    if (auto st = require(path && out, "path/out")) return st;
    return guarded([&] { *out = new perio_captures{perio::load_captures(path)}; });
}

perio_status perio_captures_write(const perio_captures* captures, const char* path) {
    if (auto st = require(captures && path, "captures/path")) return st;
    return guarded([&] { perio::write_captures(captures->captures, path); });
}

perio_status perio_captures_size(const perio_captures* captures, size_t* out) {
    if (auto st = require(captures && out, "captures/out")) return st;
    *out = captures->captures.size();
    return PERIO_OK;
}

perio_status perio_captures_to_diagnoses(const perio_captures* captures,
                                         const perio_corpus* corpus, perio_diagnoses** out) {
    if (auto st = require(captures && corpus && out, "captures/corpus/out")) return st;
    return guarded([&] {
        *out = new perio_diagnoses{
            perio::diagnoses_from_captures(captures->captures, corpus->notes)};
    });
}

void perio_captures_close(perio_captures* captures) { delete captures; }

perio_status perio_dataset_build(const perio_captures* captures, uint64_t seed,
                                 perio_dataset** out) {
    if (auto st = require(captures && out, "captures/out")) return st;
    return guarded([&] {
        auto sentences = perio::sentences_from_captures(captures->captures);
        *out = new perio_dataset{perio::split_dataset(sentences, seed)};
    });
}

perio_status perio_dataset_write(const perio_dataset* dataset, const char* dir) {
    if (auto st = require(dataset && dir, "dataset/dir")) return st;
    return guarded([&] { perio::write_split(dataset->split, dir); });
}

perio_status perio_dataset_open(const char* dir, perio_dataset** out) {
    if (auto st = require(dir && out, "dir/out")) return st;
    return guarded([&] { *out = new perio_dataset{perio::load_split(dir)}; });
}

perio_status perio_dataset_sizes(const perio_dataset* dataset, size_t* train, size_t* validation,
                                 size_t* test) {
    if (auto st = require(dataset && train && validation && test, "dataset/out sizes")) return st;
    *train = dataset->split.train.size();
    *validation = dataset->split.validation.size();
    *test = dataset->split.test.size();
    return PERIO_OK;
}

void perio_dataset_close(perio_dataset* dataset) { delete dataset; }

perio_status perio_train(const perio_dataset* dataset, int epochs, uint64_t seed,
                         perio_epoch_fn on_epoch, void* user, perio_model** out) {
    if (auto st = require(dataset && out, "dataset/out")) return st;
    return guarded([&] {
        perio::TrainParams params;
        params.epochs = epochs;
        params.seed = seed;
        *out = new perio_model{perio::train(dataset->split, params, on_epoch, user)};
    });
}

perio_status perio_model_write(const perio_model* model, const char* path) {
    if (auto st = require(model && path, "model/path")) return st;
    return guarded([&] { perio::save_model(model->model, path); });
}

perio_status perio_model_open(const char* path, perio_model** out) {
    if (auto st = require(path && out, "path/out")) return st;
    return guarded([&] { *out = new perio_model{perio::load_model(path)}; });
}

void perio_model_close(perio_model* model) { delete model; }

perio_status perio_predict(const perio_model* model, const perio_corpus* corpus, int workers,
                           perio_spans** out) {
    if (auto st = require(model && corpus && out, "model/corpus/out")) return st;
    return guarded([&] {
        *out = new perio_spans{perio::predict_notes(model->model, corpus->notes, workers)};
    });
}

perio_status perio_spans_open(const char* path, const perio_corpus* corpus, perio_spans** out) {
    if (auto st = require(path && corpus && out, "path/corpus/out")) return st;
    return guarded([&] {
        *out = new perio_spans{perio::import_predictions(path, corpus->notes)};
    });
}

perio_status perio_spans_write(const perio_spans* spans, const char* path) {
    if (auto st = require(spans && path, "spans/path")) return st;
    return guarded([&] { perio::write_predictions(spans->spans, path); });
}

perio_status perio_spans_to_diagnoses(const perio_spans* spans, const perio_corpus* corpus,
                                      perio_diagnoses** out) {
    if (auto st = require(spans && corpus && out, "spans/corpus/out")) return st;
    return guarded([&] {
        *out = new perio_diagnoses{perio::diagnoses_from_spans(spans->spans, corpus->notes)};
    });
}

void perio_spans_close(perio_spans* spans) { delete spans; }

perio_status perio_diagnoses_open(const char* path, perio_diagnoses** out) {
    if (auto st = require(path && out, "path/out")) return st;
    return guarded([&] { *out = new perio_diagnoses{perio::load_diagnoses(path)}; });
}

perio_status perio_diagnoses_write(const perio_diagnoses* diagnoses, const char* path) {
    if (auto st = require(diagnoses && path, "diagnoses/path")) return st;
    return guarded([&] { perio::write_diagnoses(diagnoses->map, path); });
}

perio_status perio_merge(const perio_diagnoses* advanced, const perio_diagnoses* simple,
                         perio_diagnoses** out) {
    if (auto st = require(advanced && simple && out, "advanced/simple/out")) return st;
    return guarded([&] {
        *out = new perio_diagnoses{perio::merge_combined(advanced->map, simple->map)};
    });
}

void perio_diagnoses_close(perio_diagnoses* diagnoses) { delete diagnoses; }

perio_status perio_evaluate(const perio_diagnoses* diagnoses, const perio_corpus* corpus,
                            perio_report** out) {
    if (auto st = require(diagnoses && corpus && out, "diagnoses/corpus/out")) return st;
    return guarded([&] {
        if (!corpus->has_gold)
            throw perio::Error(perio::ErrorKind::Invalid, "corpus has no gold records");
        auto* handle = new perio_report;
        try {
            handle->report = perio::evaluate(diagnoses->map, corpus->gold);
            handle->text = perio::render_report_text(handle->report);
        } catch (...) {
            delete handle;
            throw;
        }
        *out = handle;
    });
}

perio_status perio_report_write(const perio_report* report, const char* path) {
    if (auto st = require(report && path, "report/path")) return st;
    return guarded([&] { perio::write_report_json(report->report, path); });
}

const char* perio_report_text(const perio_report* report) {
    return report ? report->text.c_str() : "";
}

perio_status perio_report_value(const perio_report* report, const char* attribute,
                                const char* avg, const char* metric, double* out) {
    if (auto st = require(report && attribute && avg && metric && out,
                          "report/attribute/avg/metric/out"))
        return st;
    return guarded([&] {
        perio::Attribute a;
        const std::string attr = attribute;
        if (attr == "stage") a = perio::Attribute::Stage;
        else if (attr == "grade") a = perio::Attribute::Grade;
        else if (attr == "extent") a = perio::Attribute::Extent;
        else throw perio::Error(perio::ErrorKind::Invalid, "unknown attribute: " + attr);
        *out = perio::report_value(report->report, a, avg, metric);
    });
}

void perio_report_close(perio_report* report) { delete report; }

perio_status perio_reproduce_tables(int* matched, char* buf, size_t buflen) {
    if (auto st = require(matched && buf && buflen > 0, "matched/buf")) return st;
    return guarded([&] {
        const perio::TableCheck check = perio::reproduce_tables();
        *matched = check.ok ? 1 : 0;
        const size_t n = std::min(buflen - 1, check.text.size());
        std::memcpy(buf, check.text.data(), n);
        buf[n] = '\0';
    });
}

}  // extern "C"
