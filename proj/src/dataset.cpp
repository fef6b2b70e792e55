#include "imgqa/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "imgqa/error.hpp"

namespace imgqa {

namespace {

std::vector<std::string> split(const std::string& text, char separator) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == separator) {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

std::string trim(const std::string& text) {
    std::size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

std::vector<std::string> parse_answer_words(const std::string& value) {
    std::vector<std::string> words;
    for (const std::string& part : split(value, ',')) {
        const std::string word = trim(part);
        if (!word.empty()) words.push_back(word);
    }
    return words;
}

}  // namespace

QaLoadResult load_qa_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read corpus file: " + path);

    QaLoadResult result;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;

        QaRecord record;
        bool have_question = false;
        for (const std::string& field : split(line, '\t')) {
            if (field.empty()) continue;
            const std::size_t eq = field.find('=');
            if (eq == std::string::npos)
                throw ParseError(path, line_no, "field without '=': '" + field + "'");
            const std::string key = field.substr(0, eq);
            const std::string value = field.substr(eq + 1);
            if (key == "id") {
                record.id = trim(value);
            } else if (key == "image") {
                record.image_id = trim(value);
            } else if (key == "question") {
                record.question = value;
                have_question = true;
            } else if (key == "answer") {
                record.answers.push_back(parse_answer_words(value));
            } else {
                throw ParseError(path, line_no, "unknown field '" + key + "'");
            }
        }
        if (record.id.empty()) throw ParseError(path, line_no, "missing id field");
        if (!have_question) throw ParseError(path, line_no, "missing question field");
        if (record.answers.empty() || record.answers[0].empty())
            throw ParseError(path, line_no, "record needs at least one non-empty answer");
        if (!seen_ids.insert(record.id).second)
            throw ParseError(path, line_no, "duplicate id '" + record.id + "'");
        if (record.question.find('?') == std::string::npos) {
            record.question += " ?";
            ++result.question_marks_appended;
        }
        result.records.push_back(std::move(record));
    }
    return result;
}

void save_qa_records(const std::string& path, const std::vector<QaRecord>& records) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write corpus file: " + path);
    for (const QaRecord& record : records) {
        out << "id=" << record.id << "\timage=" << record.image_id << "\tquestion="
            << record.question;
        for (const auto& answer : record.answers) {
            out << "\tanswer=";
            for (std::size_t i = 0; i < answer.size(); ++i) {
                if (i != 0) out << ',';
                out << answer[i];
            }
        }
        out << '\n';
    }
}

bool FeatureStore::contains(const std::string& image_id) const {
    return features_.count(image_id) != 0;
}

const std::vector<double>& FeatureStore::at(const std::string& image_id) const {
    auto it = features_.find(image_id);
    if (it == features_.end())
        throw std::out_of_range("feature store: unknown image id '" + image_id + "'");
    return it->second;
}

void FeatureStore::insert(const std::string& image_id, std::vector<double> values) {
    if (values.size() != dimension_) {
        throw ShapeError("feature store: vector for '" + image_id + "' has length " +
                         std::to_string(values.size()) + ", expected " +
                         std::to_string(dimension_));
    }
    if (!all_finite(values))
        throw InputError("feature store: non-finite value for '" + image_id + "'");
    if (!features_.emplace(image_id, std::move(values)).second)
        throw InputError("feature store: duplicate image id '" + image_id + "'");
    order_.push_back(image_id);
}

FeatureStore FeatureStore::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read feature file: " + path);

    FeatureStore store;
    bool have_dim = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        if (!have_dim) {
            std::string keyword;
            std::size_t dim = 0;
            std::string extra;
            if (!(row >> keyword >> dim) || keyword != "dim" || (row >> extra))
                throw ParseError(path, line_no, "expected header 'dim <F>'");
            store.dimension_ = dim;
            have_dim = true;
            continue;
        }
        std::string image_id;
        if (!(row >> image_id)) throw ParseError(path, line_no, "missing image id");
        std::vector<double> values;
        double v = 0.0;
        while (row >> v) values.push_back(v);
        if (!row.eof())
            throw ParseError(path, line_no, "non-numeric value for image '" + image_id + "'");
        try {
            store.insert(image_id, std::move(values));
        } catch (const std::exception& e) {
            throw ParseError(path, line_no, e.what());
        }
    }
    if (!have_dim) throw ParseError(path, line_no, "missing 'dim <F>' header");
    return store;
}

void FeatureStore::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write feature file: " + path);
    out << "dim " << dimension_ << '\n';
    char buf[32];
    for (const std::string& image_id : order_) {
        out << image_id;
        for (double v : features_.at(image_id)) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

std::vector<AnswerSet> record_answer_sets(const QaRecord& record) {
    std::vector<AnswerSet> sets;
    sets.reserve(record.answers.size());
    for (const auto& answer : record.answers) sets.push_back(normalize_answer_set(answer));
    return sets;
}

AgreementSplit split_by_agreement(const std::vector<QaRecord>& records) {
    AgreementSplit splits;
    for (const QaRecord& record : records) {
        switch (agreement_class(record_answer_sets(record))) {
            case Agreement::none: splits.none.push_back(record); break;
            case Agreement::at_least_half: splits.at_least_half.push_back(record); break;
            case Agreement::full: splits.full.push_back(record); break;
        }
    }
    return splits;
}

std::vector<PredictionRecord> load_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read predictions file: " + path);
    std::vector<PredictionRecord> records;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        PredictionRecord record;
        const std::size_t space = line.find_first_of(" \t");
        record.id = line.substr(0, space);
        if (record.id.empty()) throw ParseError(path, line_no, "missing question id");
        if (space != std::string::npos)
            record.words = parse_answer_words(line.substr(space + 1));
        if (!seen.insert(record.id).second)
            throw ParseError(path, line_no, "duplicate id '" + record.id + "'");
        records.push_back(std::move(record));
    }
    return records;
}

void save_predictions(const std::string& path, const std::vector<PredictionRecord>& records) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write predictions file: " + path);
    for (const PredictionRecord& record : records) {
        out << record.id;
        for (std::size_t i = 0; i < record.words.size(); ++i)
            out << (i == 0 ? " " : ",") << record.words[i];
        out << '\n';
    }
}

}  // namespace imgqa
