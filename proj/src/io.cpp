#include "perio/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace perio {

using json = nlohmann::ordered_json;

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open for reading: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    return out;
}

json parse_line(const std::string& line, const std::string& path, std::size_t lineno) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse,
                    path + ":" + std::to_string(lineno) + ": invalid JSON: " + e.what());
    }
}

// Applies fn to every non-empty line with its 1-based line number.
template <typename Fn>
void for_each_jsonl(const std::string& path, Fn fn) {
    std::ifstream in = open_in(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        fn(parse_line(line, path, lineno), lineno);
    }
}

[[noreturn]] void record_error(const std::string& path, std::size_t lineno, const std::string& msg) {
    throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": " + msg);
}

std::string require_string(const json& j, const char* key, const std::string& path,
                           std::size_t lineno) {
    if (!j.contains(key) || !j[key].is_string())
        record_error(path, lineno, std::string("missing or non-string field '") + key + "'");
    return j[key].get<std::string>();
}

json diagnosis_to_json(const Diagnosis& d) {
    json j;
    j["stage"] = d.stage == Stage::Unknown ? json(nullptr) : json(to_string(d.stage));
    j["grade"] = d.grade == Grade::Unknown ? json(nullptr) : json(to_string(d.grade));
    j["extent"] = d.extent == Extent::Unknown ? json(nullptr) : json(to_string(d.extent));
    return j;
}

Stage stage_from_token(const std::string& v, const std::string& path, std::size_t lineno) {
    std::string u = v;
    std::transform(u.begin(), u.end(), u.begin(), ::toupper);
    if (u == "I") return Stage::I;
    if (u == "II") return Stage::II;
    if (u == "III") return Stage::III;
    if (u == "IV") return Stage::IV;
    throw Error(ErrorKind::Domain,
                path + ":" + std::to_string(lineno) + ": stage value outside I..IV: " + v);
}

Grade grade_from_token(const std::string& v, const std::string& path, std::size_t lineno) {
    std::string u = v;
    std::transform(u.begin(), u.end(), u.begin(), ::toupper);
    if (u == "A") return Grade::A;
    if (u == "B") return Grade::B;
    if (u == "C") return Grade::C;
    throw Error(ErrorKind::Domain,
                path + ":" + std::to_string(lineno) + ": grade value outside A..C: " + v);
}

Extent extent_from_token(const std::string& v, const std::string& path, std::size_t lineno) {
    std::string u = v;
    std::transform(u.begin(), u.end(), u.begin(), ::tolower);
    if (u == "localized") return Extent::Localized;
    if (u == "generalized") return Extent::Generalized;
    throw Error(ErrorKind::Domain,
                path + ":" + std::to_string(lineno) + ": extent value outside domain: " + v);
}

std::optional<Diagnosis> diagnosis_from_json(const json& j, const std::string& path,
                                             std::size_t lineno) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_object()) record_error(path, lineno, "diagnosis must be an object or null");
    Diagnosis d;
    if (j.contains("stage") && !j["stage"].is_null())
        d.stage = stage_from_token(j["stage"].get<std::string>(), path, lineno);
    if (j.contains("grade") && !j["grade"].is_null())
        d.grade = grade_from_token(j["grade"].get<std::string>(), path, lineno);
    if (j.contains("extent") && !j["extent"].is_null())
        d.extent = extent_from_token(j["extent"].get<std::string>(), path, lineno);
    return d;
}

json span_to_json(const EntitySpan& s) {
    return json{{"label", to_string(s.label)}, {"start", s.start}, {"end", s.end}};
}

EntitySpan span_from_json(const json& j, const std::string& path, std::size_t lineno) {
    if (!j.is_object() || !j.contains("label") || !j.contains("start") || !j.contains("end"))
        record_error(path, lineno, "span needs label/start/end");
    EntitySpan s;
    try {
        s.label = span_label_from_string(j["label"].get<std::string>());
    } catch (const Error& e) {
        record_error(path, lineno, e.what());
    }
    const auto start = j["start"].get<std::int64_t>();
    const auto end = j["end"].get<std::int64_t>();
    if (start < 0 || end <= start)
        record_error(path, lineno, "span offsets must satisfy 0 <= start < end");
    s.start = static_cast<std::size_t>(start);
    s.end = static_cast<std::size_t>(end);
    return s;
}

// --- CSV (RFC 4180, quoted fields may contain commas, quotes, newlines) ---

std::vector<std::vector<std::string>> parse_csv(const std::string& content,
                                                const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t i = 0;
    auto end_field = [&] {
        row.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(row);
        row.clear();
    };
    while (i < content.size()) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            end_row();
        } else {
            field += c;
            field_started = true;
        }
        ++i;
    }
    if (in_quotes) throw Error(ErrorKind::Parse, path + ": unterminated quoted field");
    if (field_started || !row.empty()) end_row();
    return rows;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void check_note_record(const ClinicalNote& note, std::set<std::string>& seen,
                       const std::string& path, std::size_t lineno) {
    if (note.note_id.empty()) record_error(path, lineno, "empty note_id");
    if (note.text.empty()) record_error(path, lineno, "empty text");
    if (!seen.insert(note.note_id).second)
        record_error(path, lineno, "duplicate note_id '" + note.note_id + "'");
}

}  // namespace

NotesFormat notes_format_from_string(const std::string& s) {
    if (s == "jsonl") return NotesFormat::Jsonl;
    if (s == "csv") return NotesFormat::Csv;
    throw Error(ErrorKind::Invalid, "unknown notes format: " + s);
}

std::vector<ClinicalNote> load_notes(const std::string& path, NotesFormat format) {
    std::vector<ClinicalNote> notes;
    std::set<std::string> seen;
    if (format == NotesFormat::Jsonl) {
        for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
            ClinicalNote note;
            note.note_id = require_string(j, "note_id", path, lineno);
            if (!j.contains("text") || !j["text"].is_string())
                record_error(path, lineno, "missing or non-string field 'text'");
            note.text = j["text"].get<std::string>();
            check_note_record(note, seen, path, lineno);
            notes.push_back(std::move(note));
        });
    } else {
        std::ifstream in = open_in(path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        auto rows = parse_csv(buffer.str(), path);
        if (rows.empty() || rows[0] != std::vector<std::string>{"note_id", "text"})
            throw Error(ErrorKind::Parse, path + ": expected header 'note_id,text'");
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].size() != 2)
                record_error(path, r + 1, "expected 2 columns, got " + std::to_string(rows[r].size()));
            ClinicalNote note{rows[r][0], rows[r][1]};
            check_note_record(note, seen, path, r + 1);
            notes.push_back(std::move(note));
        }
    }
    return notes;
}

void write_notes(const std::vector<ClinicalNote>& notes, const std::string& path,
                 NotesFormat format) {
    std::ofstream out = open_out(path);
    if (format == NotesFormat::Jsonl) {
        for (const auto& note : notes) {
            json j{{"note_id", note.note_id}, {"text", note.text}};
            out << j.dump() << '\n';
        }
    } else {
        out << "note_id,text\n";
        for (const auto& note : notes)
            out << csv_quote(note.note_id) << ',' << csv_quote(note.text) << '\n';
    }
}

std::vector<GoldRecord> load_gold(const std::string& path) {
    std::vector<GoldRecord> gold;
    std::set<std::string> seen;
    for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
        GoldRecord rec;
        rec.note_id = require_string(j, "note_id", path, lineno);
        if (!seen.insert(rec.note_id).second)
            record_error(path, lineno, "duplicate note_id '" + rec.note_id + "'");
        if (j.contains("diagnosis"))
            rec.diagnosis = diagnosis_from_json(j["diagnosis"], path, lineno);
        if (j.contains("spans")) {
            if (!j["spans"].is_array()) record_error(path, lineno, "spans must be an array");
            for (const auto& js : j["spans"]) rec.spans.push_back(span_from_json(js, path, lineno));
        }
        gold.push_back(std::move(rec));
    });
    return gold;
}

void write_gold(const std::vector<GoldRecord>& gold, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const auto& rec : gold) {
        json j;
        j["note_id"] = rec.note_id;
        j["diagnosis"] = rec.diagnosis ? diagnosis_to_json(*rec.diagnosis) : json(nullptr);
        if (!rec.spans.empty()) {
            json spans = json::array();
            for (const auto& s : rec.spans) spans.push_back(span_to_json(s));
            j["spans"] = spans;
        }
        out << j.dump() << '\n';
    }
}

void validate_gold(std::vector<GoldRecord>& gold, const std::vector<ClinicalNote>& notes) {
    std::map<std::string, const ClinicalNote*> index;
    for (const auto& n : notes) index[n.note_id] = &n;
    for (auto& rec : gold) {
        auto it = index.find(rec.note_id);
        if (it == index.end())
            throw Error(ErrorKind::Invalid, "gold note_id not in corpus: " + rec.note_id);
        const std::string& text = it->second->text;
        for (auto& span : rec.spans) {
            if (span.end > text.size())
                throw Error(ErrorKind::Bounds, "gold span out of bounds for note " + rec.note_id);
            span.surface = text.substr(span.start, span.end - span.start);
        }
    }
}

std::vector<RawCapture> load_captures(const std::string& path) {
    std::vector<RawCapture> captures;
    for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
        RawCapture cap;
        cap.note_id = require_string(j, "note_id", path, lineno);
        cap.section_start = j.at("section_start").get<std::size_t>();
        cap.section_end = j.at("section_end").get<std::size_t>();
        cap.section_text = require_string(j, "section_text", path, lineno);
        cap.method = require_string(j, "method", path, lineno) == "simple" ? Method::Simple
                                                                           : Method::Advanced;
        if (!j.contains("fields") || !j["fields"].is_object())
            record_error(path, lineno, "missing 'fields' object");
        auto read_field = [&](const char* name) -> std::optional<FieldSpan> {
            if (!j["fields"].contains(name)) return std::nullopt;
            const json& f = j["fields"][name];
            FieldSpan span;
            span.text = f.at("text").get<std::string>();
            span.start = f.at("start").get<std::size_t>();
            span.end = f.at("end").get<std::size_t>();
            return span;
        };
        auto marker = read_field("dx_marker");
        if (!marker) record_error(path, lineno, "capture without dx_marker");
        cap.dx_marker = *marker;
        cap.extent_raw = read_field("extent_raw");
        cap.stage_kw = read_field("stage_kw");
        cap.stage_raw = read_field("stage_raw");
        cap.grade_kw = read_field("grade_kw");
        cap.grade_raw = read_field("grade_raw");
        cap.perio_token = read_field("perio_token");
        captures.push_back(std::move(cap));
    });
    return captures;
}

void write_captures(const std::vector<RawCapture>& captures, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const auto& cap : captures) {
        json fields;
        auto put = [&](const char* name, const std::optional<FieldSpan>& f) {
            if (f) fields[name] = json{{"text", f->text}, {"start", f->start}, {"end", f->end}};
        };
        put("dx_marker", cap.dx_marker);
        put("extent_raw", cap.extent_raw);
        put("stage_kw", cap.stage_kw);
        put("stage_raw", cap.stage_raw);
        put("grade_kw", cap.grade_kw);
        put("grade_raw", cap.grade_raw);
        put("perio_token", cap.perio_token);
        json j{{"note_id", cap.note_id},
               {"section_start", cap.section_start},
               {"section_end", cap.section_end},
               {"section_text", cap.section_text},
               {"method", to_string(cap.method)},
               {"fields", fields}};
        out << j.dump() << '\n';
    }
}

std::vector<AnnotatedSentence> load_sentences(const std::string& path) {
    std::vector<AnnotatedSentence> sentences;
    for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
        AnnotatedSentence s;
        s.note_id = require_string(j, "note_id", path, lineno);
        s.text = require_string(j, "text", path, lineno);
        if (j.contains("spans")) {
            for (const auto& js : j["spans"]) {
                EntitySpan span = span_from_json(js, path, lineno);
                if (span.end > s.text.size())
                    record_error(path, lineno, "span out of bounds for sentence");
                span.surface = s.text.substr(span.start, span.end - span.start);
                s.spans.push_back(std::move(span));
            }
        }
        sentences.push_back(std::move(s));
    });
    return sentences;
}

void write_sentences(const std::vector<AnnotatedSentence>& sentences, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const auto& s : sentences) {
        json spans = json::array();
        for (const auto& span : s.spans) spans.push_back(span_to_json(span));
        json j{{"note_id", s.note_id}, {"text", s.text}, {"spans", spans}};
        out << j.dump() << '\n';
    }
}

void write_split(const DatasetSplit& split, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<AnnotatedSentence> all;
    std::vector<std::pair<const std::vector<std::size_t>*, const std::vector<AnnotatedSentence>*>>
        parts = {{&split.train_indices, &split.train},
                 {&split.validation_indices, &split.validation},
                 {&split.test_indices, &split.test}};
    std::size_t total = split.train.size() + split.validation.size() + split.test.size();
    all.resize(total);
    for (auto& [indices, sentences] : parts)
        for (std::size_t k = 0; k < indices->size(); ++k) all[(*indices)[k]] = (*sentences)[k];
    write_sentences(all, (std::filesystem::path(dir) / "sentences.jsonl").string());

    json manifest{{"seed", split.seed},
                  {"train", split.train_indices},
                  {"validation", split.validation_indices},
                  {"test", split.test_indices}};
    std::ofstream out = open_out((std::filesystem::path(dir) / "split.json").string());
    out << manifest.dump(2) << '\n';
}

DatasetSplit load_split(const std::string& dir) {
    auto sentences = load_sentences((std::filesystem::path(dir) / "sentences.jsonl").string());
    const std::string manifest_path = (std::filesystem::path(dir) / "split.json").string();
    std::ifstream in = open_in(manifest_path);
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, manifest_path + ": invalid JSON: " + e.what());
    }
    DatasetSplit split;
    split.seed = manifest.at("seed").get<std::uint64_t>();
    auto take = [&](const char* key, std::vector<std::size_t>& indices,
                    std::vector<AnnotatedSentence>& part) {
        for (const auto& idx : manifest.at(key)) {
            std::size_t i = idx.get<std::size_t>();
            if (i >= sentences.size())
                throw Error(ErrorKind::Bounds, manifest_path + ": index out of range");
            indices.push_back(i);
            part.push_back(sentences[i]);
        }
    };
    take("train", split.train_indices, split.train);
    take("validation", split.validation_indices, split.validation);
    take("test", split.test_indices, split.test);
    return split;
}

DiagnosisMap load_diagnoses(const std::string& path) {
    DiagnosisMap map;
    for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
        std::string note_id = require_string(j, "note_id", path, lineno);
        if (!j.contains("diagnosis")) record_error(path, lineno, "missing 'diagnosis'");
        map[note_id] = diagnosis_from_json(j["diagnosis"], path, lineno);
    });
    return map;
}

void write_diagnoses(const DiagnosisMap& diagnoses, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const auto& [note_id, diag] : diagnoses) {
        json j;
        j["note_id"] = note_id;
        j["diagnosis"] = diag ? diagnosis_to_json(*diag) : json(nullptr);
        out << j.dump() << '\n';
    }
}

std::map<std::string, std::vector<EntitySpan>> load_predictions(const std::string& path) {
    std::map<std::string, std::vector<EntitySpan>> predictions;
    for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
        std::string note_id = require_string(j, "note_id", path, lineno);
        auto& spans = predictions[note_id];
        if (j.contains("spans")) {
            if (!j["spans"].is_array()) record_error(path, lineno, "spans must be an array");
            for (const auto& js : j["spans"]) spans.push_back(span_from_json(js, path, lineno));
        }
    });
    return predictions;
}

void write_predictions(const std::map<std::string, std::vector<EntitySpan>>& predictions,
                       const std::string& path) {
    std::ofstream out = open_out(path);
    for (const auto& [note_id, spans] : predictions) {
        json jspans = json::array();
        for (const auto& s : spans) jspans.push_back(span_to_json(s));
        json j{{"note_id", note_id}, {"spans", jspans}};
        out << j.dump() << '\n';
    }
}

}  // namespace perio
