// File formats: notes (JSONL/CSV), gold records, capture dumps, dataset
// sentences, split manifests, span predictions and diagnosis maps.
#pragma once

#include <string>
#include <vector>

#include "perio/types.hpp"

namespace perio {

enum class NotesFormat { Jsonl, Csv };

NotesFormat notes_format_from_string(const std::string& s);

std::vector<ClinicalNote> load_notes(const std::string& path, NotesFormat format);
void write_notes(const std::vector<ClinicalNote>& notes, const std::string& path,
                 NotesFormat format);

std::vector<GoldRecord> load_gold(const std::string& path);
void write_gold(const std::vector<GoldRecord>& gold, const std::string& path);

// Checks gold ids against the corpus and span invariants against note texts;
// fills span surfaces from the note text.
void validate_gold(std::vector<GoldRecord>& gold, const std::vector<ClinicalNote>& notes);

std::vector<RawCapture> load_captures(const std::string& path);
void write_captures(const std::vector<RawCapture>& captures, const std::string& path);

std::vector<AnnotatedSentence> load_sentences(const std::string& path);
void write_sentences(const std::vector<AnnotatedSentence>& sentences, const std::string& path);

void write_split(const DatasetSplit& split, const std::string& dir);
DatasetSplit load_split(const std::string& dir);

DiagnosisMap load_diagnoses(const std::string& path);
void write_diagnoses(const DiagnosisMap& diagnoses, const std::string& path);

// Span predictions keyed by note; duplicate note_id lines concatenate.
std::map<std::string, std::vector<EntitySpan>> load_predictions(const std::string& path);
void write_predictions(const std::map<std::string, std::vector<EntitySpan>>& predictions,
                       const std::string& path);

}  // namespace perio
