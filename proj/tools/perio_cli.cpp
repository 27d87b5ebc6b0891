// Pipeline driver over the perio C API. One subcommand per stage with
// file-based handoff: synth -> extract -> dataset -> train -> predict ->
// eval, plus merge and the built-in reference-table check.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perio.h"

namespace {

int fail(perio_status st) {
    std::fprintf(stderr, "error: %s\n", perio_last_error());
    return st == PERIO_OK ? 1 : static_cast<int>(st);
}

#define CHECK(call)                     \
    do {                                \
        perio_status st_ = (call);      \
        if (st_ != PERIO_OK) return fail(st_); \
    } while (0)

struct CorpusGuard {
    perio_corpus* h = nullptr;
    ~CorpusGuard() { perio_corpus_close(h); }
};
struct CapturesGuard {
    perio_captures* h = nullptr;
    ~CapturesGuard() { perio_captures_close(h); }
};
struct DatasetGuard {
    perio_dataset* h = nullptr;
    ~DatasetGuard() { perio_dataset_close(h); }
};
struct ModelGuard {
    perio_model* h = nullptr;
    ~ModelGuard() { perio_model_close(h); }
};
struct SpansGuard {
    perio_spans* h = nullptr;
    ~SpansGuard() { perio_spans_close(h); }
};
struct DiagnosesGuard {
    perio_diagnoses* h = nullptr;
    ~DiagnosesGuard() { perio_diagnoses_close(h); }
};
struct ReportGuard {
    perio_report* h = nullptr;
    ~ReportGuard() { perio_report_close(h); }
};

std::string synth_config_json(std::uint64_t count, std::uint64_t seed,
                              const std::vector<std::string>& noise) {
    std::string json = "{\"n_notes\": " + std::to_string(count) +
                       ", \"seed\": " + std::to_string(seed);
    if (!noise.empty()) {
        json += ", \"noise_rates\": {";
        for (std::size_t i = 0; i < noise.size(); ++i) {
            const auto eq = noise[i].find('=');
            if (eq == std::string::npos) {
                std::fprintf(stderr, "error: --noise expects kind=rate, got '%s'\n",
                             noise[i].c_str());
                std::exit(2);
            }
            if (i) json += ", ";
            json += "\"" + noise[i].substr(0, eq) + "\": " + noise[i].substr(eq + 1);
        }
        json += "}";
    }
    json += "}";
    return json;
}

perio_method method_of(const std::string& name) {
    return name == "simple" ? PERIO_METHOD_SIMPLE : PERIO_METHOD_ADVANCED;
}

void print_epoch(int epoch, double validation_f1, void*) {
    std::printf("epoch %d: validation span F1 = %.4f\n", epoch, validation_f1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodontitis diagnosis extraction pipeline"};
    app.require_subcommand(1);

    // synth
    std::uint64_t count = 0, seed = 42;
    std::string notes_path, gold_path, out_path, format = "jsonl";
    std::vector<std::string> noise;
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with gold labels");
    synth->add_option("--count", count, "number of notes")->required();
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--notes", notes_path, "output notes file")->required();
    synth->add_option("--gold", gold_path, "output gold file")->required();
    synth->add_option("--noise", noise, "noise rate override, kind=rate (repeatable)");
    synth->add_option("--format", format, "notes file format: jsonl|csv");

    // extract
    std::string method = "advanced", captures_path, diagnoses_path;
    auto* extract = app.add_subcommand("extract", "run a regex grammar over a corpus");
    extract->add_option("--notes", notes_path, "input notes file")->required();
    extract->add_option("--format", format, "notes file format: jsonl|csv");
    extract->add_option("--method", method, "simple|advanced")->required();
    extract->add_option("--out", captures_path, "output captures file")->required();
    extract->add_option("--diagnoses", diagnoses_path, "also write note-level diagnoses here");

    // dataset
    auto* dataset = app.add_subcommand("dataset", "build and split the weak-label dataset");
    dataset->add_option("--captures", captures_path, "input captures file")->required();
    dataset->add_option("--seed", seed, "shuffle seed");
    dataset->add_option("--out", out_path, "output dataset directory")->required();

    // train
    std::string dataset_dir, model_path;
    int epochs = 10, workers = 1;
    auto* train = app.add_subcommand("train", "train the tagger on a dataset directory");
    train->add_option("--dataset", dataset_dir, "dataset directory")->required();
    train->add_option("--epochs", epochs, "training epochs");
    train->add_option("--seed", seed, "shuffle seed");
    train->add_option("--out", model_path, "output model file")->required();

    // predict
    std::string predictions_path;
    auto* predict = app.add_subcommand("predict", "tag a corpus with a trained model");
    predict->add_option("--model", model_path, "model file")->required();
    predict->add_option("--notes", notes_path, "input notes file")->required();
    predict->add_option("--format", format, "notes file format: jsonl|csv");
    predict->add_option("--out", predictions_path, "output predictions file")->required();
    predict->add_option("--diagnoses", diagnoses_path, "also write note-level diagnoses here");
    predict->add_option("--workers", workers, "worker threads");

    // eval
    std::string eval_method, report_path;
    auto* eval = app.add_subcommand("eval", "score diagnoses against gold");
    eval->add_option("--notes", notes_path, "input notes file")->required();
    eval->add_option("--format", format, "notes file format: jsonl|csv");
    eval->add_option("--gold", gold_path, "gold file")->required();
    auto* opt_pred = eval->add_option("--predictions", predictions_path, "span predictions file");
    auto* opt_diag = eval->add_option("--diagnoses", diagnoses_path, "note-level diagnoses file");
    auto* opt_meth = eval->add_option("--method", eval_method,
                                      "run a regex grammar instead: simple|advanced");
    opt_pred->excludes(opt_diag)->excludes(opt_meth);
    opt_diag->excludes(opt_meth);
    eval->add_option("--out", report_path, "output report JSON");

    // merge
    std::string advanced_path, simple_path;
    auto* merge = app.add_subcommand("merge", "combine advanced and simple diagnoses");
    merge->add_option("--advanced", advanced_path, "advanced diagnoses file")->required();
    merge->add_option("--simple", simple_path, "simple diagnoses file")->required();
    merge->add_option("--out", out_path, "output diagnoses file")->required();

    auto* tables = app.add_subcommand("reproduce-tables",
                                      "check the built-in capture matrix and split sizes");

    CLI11_PARSE(app, argc, argv);

    if (synth->parsed()) {
        CorpusGuard corpus;
        CHECK(perio_synth(synth_config_json(count, seed, noise).c_str(), &corpus.h));
        CHECK(perio_corpus_write_notes(corpus.h, notes_path.c_str(), format.c_str()));
        CHECK(perio_corpus_write_gold(corpus.h, gold_path.c_str()));
        size_t n = 0;
        CHECK(perio_corpus_size(corpus.h, &n));
        std::printf("synth: %zu notes (seed %" PRIu64 ") -> %s, gold -> %s\n", n, seed,
                    notes_path.c_str(), gold_path.c_str());
        return 0;
    }

    if (extract->parsed()) {
        CorpusGuard corpus;
        CapturesGuard captures;
        CHECK(perio_corpus_open(notes_path.c_str(), format.c_str(), &corpus.h));
        CHECK(perio_extract(corpus.h, method_of(method), &captures.h));
        CHECK(perio_captures_write(captures.h, captures_path.c_str()));
        if (!diagnoses_path.empty()) {
            DiagnosesGuard diagnoses;
            CHECK(perio_captures_to_diagnoses(captures.h, corpus.h, &diagnoses.h));
            CHECK(perio_diagnoses_write(diagnoses.h, diagnoses_path.c_str()));
        }
        size_t n_notes = 0, n_caps = 0;
        CHECK(perio_corpus_size(corpus.h, &n_notes));
        CHECK(perio_captures_size(captures.h, &n_caps));
        std::printf("extract: %zu captures from %zu notes (%s) -> %s\n", n_caps, n_notes,
                    method.c_str(), captures_path.c_str());
        return 0;
    }

    if (dataset->parsed()) {
        CapturesGuard captures;
        DatasetGuard ds;
        CHECK(perio_captures_open(captures_path.c_str(), &captures.h));
        CHECK(perio_dataset_build(captures.h, seed, &ds.h));
        CHECK(perio_dataset_write(ds.h, out_path.c_str()));
        size_t tr = 0, va = 0, te = 0;
        CHECK(perio_dataset_sizes(ds.h, &tr, &va, &te));
        std::printf("dataset: split sizes %zu/%zu/%zu (seed %" PRIu64 ") -> %s\n", tr, va, te,
                    seed, out_path.c_str());
        return 0;
    }

    if (train->parsed()) {
        DatasetGuard ds;
        ModelGuard model;
        CHECK(perio_dataset_open(dataset_dir.c_str(), &ds.h));
        CHECK(perio_train(ds.h, epochs, seed, print_epoch, nullptr, &model.h));
        CHECK(perio_model_write(model.h, model_path.c_str()));
        std::printf("train: %d epochs (seed %" PRIu64 ") -> %s\n", epochs, seed,
                    model_path.c_str());
        return 0;
    }

    if (predict->parsed()) {
        CorpusGuard corpus;
        ModelGuard model;
        SpansGuard spans;
        CHECK(perio_model_open(model_path.c_str(), &model.h));
        CHECK(perio_corpus_open(notes_path.c_str(), format.c_str(), &corpus.h));
        CHECK(perio_predict(model.h, corpus.h, workers, &spans.h));
        CHECK(perio_spans_write(spans.h, predictions_path.c_str()));
        if (!diagnoses_path.empty()) {
            DiagnosesGuard diagnoses;
            CHECK(perio_spans_to_diagnoses(spans.h, corpus.h, &diagnoses.h));
            CHECK(perio_diagnoses_write(diagnoses.h, diagnoses_path.c_str()));
        }
        size_t n = 0;
        CHECK(perio_corpus_size(corpus.h, &n));
        std::printf("predict: %zu notes -> %s\n", n, predictions_path.c_str());
        return 0;
    }

    if (eval->parsed()) {
        CorpusGuard corpus;
        DiagnosesGuard diagnoses;
        ReportGuard report;
        CHECK(perio_corpus_open(notes_path.c_str(), format.c_str(), &corpus.h));
        CHECK(perio_corpus_load_gold(corpus.h, gold_path.c_str()));
        if (!predictions_path.empty()) {
            SpansGuard spans;
            CHECK(perio_spans_open(predictions_path.c_str(), corpus.h, &spans.h));
            CHECK(perio_spans_to_diagnoses(spans.h, corpus.h, &diagnoses.h));
        } else if (!diagnoses_path.empty()) {
            CHECK(perio_diagnoses_open(diagnoses_path.c_str(), &diagnoses.h));
        } else if (!eval_method.empty()) {
            CapturesGuard captures;
            CHECK(perio_extract(corpus.h, method_of(eval_method), &captures.h));
            CHECK(perio_captures_to_diagnoses(captures.h, corpus.h, &diagnoses.h));
        } else {
            std::fprintf(stderr,
                         "error: eval needs one of --predictions, --diagnoses, --method\n");
            return 2;
        }
        CHECK(perio_evaluate(diagnoses.h, corpus.h, &report.h));
        std::fputs(perio_report_text(report.h), stdout);
        if (!report_path.empty()) {
            CHECK(perio_report_write(report.h, report_path.c_str()));
            std::printf("eval: report -> %s\n", report_path.c_str());
        }
        return 0;
    }

    if (merge->parsed()) {
        DiagnosesGuard advanced, simple, merged;
        CHECK(perio_diagnoses_open(advanced_path.c_str(), &advanced.h));
        CHECK(perio_diagnoses_open(simple_path.c_str(), &simple.h));
        CHECK(perio_merge(advanced.h, simple.h, &merged.h));
        CHECK(perio_diagnoses_write(merged.h, out_path.c_str()));
        std::printf("merge: %s + %s -> %s\n", advanced_path.c_str(), simple_path.c_str(),
                    out_path.c_str());
        return 0;
    }

    if (tables->parsed()) {
        int matched = 0;
        char buf[8192];
        CHECK(perio_reproduce_tables(&matched, buf, sizeof buf));
        std::fputs(buf, stdout);
        if (!matched) {
            std::fprintf(stderr, "error: reference tables did not reproduce\n");
            return 1;
        }
        std::printf("reproduce-tables: all rows match\n");
        return 0;
    }

    return 2;
}
