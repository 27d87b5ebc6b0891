#include <doctest.h>

#include <cstring>
#include <string>

#include "helpers.hpp"
#include "perio.h"

TEST_CASE("c api pipeline end to end") {
    testutil::TempDir tmp("capi");

    perio_corpus* corpus = nullptr;
    REQUIRE(perio_synth("{\"n_notes\": 120, \"seed\": 42}", &corpus) == PERIO_OK);
    size_t n = 0;
    REQUIRE(perio_corpus_size(corpus, &n) == PERIO_OK);
    CHECK(n == 120);

    REQUIRE(perio_corpus_write_notes(corpus, tmp.file("notes.jsonl").c_str(), "jsonl") ==
            PERIO_OK);
    REQUIRE(perio_corpus_write_gold(corpus, tmp.file("gold.jsonl").c_str()) == PERIO_OK);

    // Reopen from disk and reload gold against it.
    perio_corpus* reopened = nullptr;
    REQUIRE(perio_corpus_open(tmp.file("notes.jsonl").c_str(), "jsonl", &reopened) == PERIO_OK);
    REQUIRE(perio_corpus_load_gold(reopened, tmp.file("gold.jsonl").c_str()) == PERIO_OK);

    perio_captures* advanced = nullptr;
    REQUIRE(perio_extract(reopened, PERIO_METHOD_ADVANCED, &advanced) == PERIO_OK);
    size_t n_caps = 0;
    REQUIRE(perio_captures_size(advanced, &n_caps) == PERIO_OK);
    CHECK(n_caps > 80);
    REQUIRE(perio_captures_write(advanced, tmp.file("caps.jsonl").c_str()) == PERIO_OK);

    perio_captures* caps_in = nullptr;
    REQUIRE(perio_captures_open(tmp.file("caps.jsonl").c_str(), &caps_in) == PERIO_OK);
    size_t n_caps_in = 0;
    REQUIRE(perio_captures_size(caps_in, &n_caps_in) == PERIO_OK);
    CHECK(n_caps_in == n_caps);

    perio_dataset* dataset = nullptr;
    REQUIRE(perio_dataset_build(caps_in, 42, &dataset) == PERIO_OK);
    size_t tr = 0, va = 0, te = 0;
    REQUIRE(perio_dataset_sizes(dataset, &tr, &va, &te) == PERIO_OK);
    CHECK(tr + va + te == n_caps);
    REQUIRE(perio_dataset_write(dataset, tmp.file("ds").c_str()) == PERIO_OK);

    perio_dataset* ds_in = nullptr;
    REQUIRE(perio_dataset_open(tmp.file("ds").c_str(), &ds_in) == PERIO_OK);

    perio_model* model = nullptr;
    REQUIRE(perio_train(ds_in, 5, 42, nullptr, nullptr, &model) == PERIO_OK);
    REQUIRE(perio_model_write(model, tmp.file("model.json").c_str()) == PERIO_OK);
    perio_model* model_in = nullptr;
    REQUIRE(perio_model_open(tmp.file("model.json").c_str(), &model_in) == PERIO_OK);

    perio_spans* spans = nullptr;
    REQUIRE(perio_predict(model_in, reopened, 2, &spans) == PERIO_OK);
    REQUIRE(perio_spans_write(spans, tmp.file("preds.jsonl").c_str()) == PERIO_OK);
    perio_spans* spans_in = nullptr;
    REQUIRE(perio_spans_open(tmp.file("preds.jsonl").c_str(), reopened, &spans_in) == PERIO_OK);

    perio_diagnoses* tagger_diag = nullptr;
    REQUIRE(perio_spans_to_diagnoses(spans_in, reopened, &tagger_diag) == PERIO_OK);

    perio_diagnoses* adv_diag = nullptr;
    REQUIRE(perio_captures_to_diagnoses(advanced, reopened, &adv_diag) == PERIO_OK);

    perio_captures* simple = nullptr;
    REQUIRE(perio_extract(reopened, PERIO_METHOD_SIMPLE, &simple) == PERIO_OK);
    perio_diagnoses* sim_diag = nullptr;
    REQUIRE(perio_captures_to_diagnoses(simple, reopened, &sim_diag) == PERIO_OK);

    perio_diagnoses* combined = nullptr;
    REQUIRE(perio_merge(adv_diag, sim_diag, &combined) == PERIO_OK);
    REQUIRE(perio_diagnoses_write(combined, tmp.file("combined.jsonl").c_str()) == PERIO_OK);
    perio_diagnoses* combined_in = nullptr;
    REQUIRE(perio_diagnoses_open(tmp.file("combined.jsonl").c_str(), &combined_in) == PERIO_OK);

    perio_report* report = nullptr;
    REQUIRE(perio_evaluate(combined_in, reopened, &report) == PERIO_OK);
    double f1 = 0.0;
    REQUIRE(perio_report_value(report, "stage", "macro", "f1", &f1) == PERIO_OK);
    CHECK(f1 > 0.9);
    CHECK(std::strstr(perio_report_text(report), "== Stage ==") != nullptr);
    REQUIRE(perio_report_write(report, tmp.file("report.json").c_str()) == PERIO_OK);

    perio_report* tagger_report = nullptr;
    REQUIRE(perio_evaluate(tagger_diag, reopened, &tagger_report) == PERIO_OK);
    REQUIRE(perio_report_value(tagger_report, "grade", "weighted", "recall", &f1) == PERIO_OK);
    CHECK(f1 > 0.8);

    perio_report_close(tagger_report);
    perio_report_close(report);
    perio_diagnoses_close(combined_in);
    perio_diagnoses_close(combined);
    perio_diagnoses_close(sim_diag);
    perio_diagnoses_close(adv_diag);
    perio_diagnoses_close(tagger_diag);
    perio_captures_close(simple);
    perio_spans_close(spans_in);
    perio_spans_close(spans);
    perio_model_close(model_in);
    perio_model_close(model);
    perio_dataset_close(ds_in);
    perio_dataset_close(dataset);
    perio_captures_close(caps_in);
    perio_captures_close(advanced);
    perio_corpus_close(reopened);
    perio_corpus_close(corpus);
}

TEST_CASE("c api error codes and messages") {
    perio_corpus* corpus = nullptr;
    CHECK(perio_corpus_open("/nonexistent/notes.jsonl", "jsonl", &corpus) == PERIO_E_IO);
    CHECK(std::strlen(perio_last_error()) > 0);
    CHECK(corpus == nullptr);

    CHECK(perio_corpus_open(nullptr, "jsonl", &corpus) == PERIO_E_INVALID);
    CHECK(perio_synth("not json", &corpus) == PERIO_E_PARSE);
    CHECK(perio_synth("{\"n_notes\": 0}", &corpus) == PERIO_E_INVALID);
    CHECK(perio_corpus_size(nullptr, nullptr) == PERIO_E_INVALID);

    // Success clears the error message.
    perio_corpus* ok = nullptr;
    REQUIRE(perio_synth("{\"n_notes\": 1, \"seed\": 1}", &ok) == PERIO_OK);
    CHECK(std::strlen(perio_last_error()) == 0);

    perio_diagnoses* diag = nullptr;
    CHECK(perio_diagnoses_open("/nonexistent/d.jsonl", &diag) == PERIO_E_IO);
    perio_corpus_close(ok);
}

TEST_CASE("c api gold validation errors") {
    testutil::TempDir tmp("capi_gold");
    perio_corpus* corpus = nullptr;
    REQUIRE(perio_synth("{\"n_notes\": 5, \"seed\": 3}", &corpus) == PERIO_OK);

    {
        std::string bad = tmp.file("bad_gold.jsonl");
        FILE* f = fopen(bad.c_str(), "w");
        fputs("{\"note_id\": \"missing-note\", \"diagnosis\": null}\n", f);
        fclose(f);
        CHECK(perio_corpus_load_gold(corpus, bad.c_str()) == PERIO_E_INVALID);
        CHECK(std::strstr(perio_last_error(), "missing-note") != nullptr);
    }
    {
        std::string bad = tmp.file("domain_gold.jsonl");
        FILE* f = fopen(bad.c_str(), "w");
        fputs("{\"note_id\": \"synth-000001\", \"diagnosis\": {\"grade\": \"Z\"}}\n", f);
        fclose(f);
        CHECK(perio_corpus_load_gold(corpus, bad.c_str()) == PERIO_E_DOMAIN);
    }
    perio_corpus_close(corpus);
}

TEST_CASE("c api reproduces the reference tables") {
    int matched = -1;
    char buf[8192];
    REQUIRE(perio_reproduce_tables(&matched, buf, sizeof buf) == PERIO_OK);
    CHECK(matched == 1);
    CHECK(std::strstr(buf, "3016/377/378") != nullptr);
    CHECK(perio_version() != nullptr);
}
