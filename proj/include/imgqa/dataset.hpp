#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "imgqa/metrics.hpp"
#include "imgqa/taxonomy.hpp"

namespace imgqa {

/// One question with its reference answers. answers[0] is the canonical
/// single reference; any further entries are consensus annotations. Each
/// answer is a list of answer words.
struct QaRecord {
    std::string id;
    std::string image_id;
    std::string question;
    std::vector<std::vector<std::string>> answers;
};

struct QaLoadResult {
    std::vector<QaRecord> records;
    std::size_t question_marks_appended = 0;  // questions that lacked "?"
};

/// Corpus grammar: one record per line, tab-separated key=value fields
///   id=<id>  image=<image_id>  question=<text>  answer=<w1,w2,...>  [answer=...]*
/// Blank lines and lines starting with '#' are skipped. Duplicate ids and
/// malformed lines raise ParseError with the line number. Questions
/// without a '?' get one appended and are counted in the result.
QaLoadResult load_qa_records(const std::string& path);
void save_qa_records(const std::string& path, const std::vector<QaRecord>& records);

/// Per-image feature vectors of one fixed dimension.
/// File grammar: first content line "dim <F>", then "<image_id> <F values>".
class FeatureStore {
public:
    FeatureStore() = default;
    explicit FeatureStore(std::size_t dimension) : dimension_(dimension) {}

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return order_.size(); }
    bool contains(const std::string& image_id) const;

    /// Throws std::out_of_range (not ParseError) for an unknown image id.
    const std::vector<double>& at(const std::string& image_id) const;

    /// Validates length and finiteness; duplicate ids are rejected.
    void insert(const std::string& image_id, std::vector<double> values);

    static FeatureStore load(const std::string& path);
    void save(const std::string& path) const;

    const std::vector<std::string>& image_ids() const { return order_; }

private:
    std::size_t dimension_ = 0;
    std::map<std::string, std::vector<double>> features_;
    std::vector<std::string> order_;  // insertion order, for stable saves
};

struct AgreementSplit {
    std::vector<QaRecord> none;
    std::vector<QaRecord> at_least_half;
    std::vector<QaRecord> full;
};

/// Exhaustive, disjoint partition of the records by the agreement class of
/// their answer sets.
AgreementSplit split_by_agreement(const std::vector<QaRecord>& records);

/// Consensus references of a record: all of its answers, normalized.
std::vector<AnswerSet> record_answer_sets(const QaRecord& record);

/// Predictions / references file: one record per line,
///   <question_id> <word1,word2,...>
/// An id alone denotes an empty answer set.
struct PredictionRecord {
    std::string id;
    std::vector<std::string> words;
};
std::vector<PredictionRecord> load_predictions(const std::string& path);
void save_predictions(const std::string& path, const std::vector<PredictionRecord>& records);

/// Synthetic scenes of colored, counted objects with one designated
/// largest object, plus question templates over them. Everything is a
/// deterministic function of the seed.
struct SynthConfig {
    std::size_t num_records = 500;
    std::size_t num_object_types = 8;
    std::size_t num_colors = 6;
    std::size_t max_count = 4;
    double noise = 0.0;
    std::uint64_t seed = 1;
    // color / count / largest question proportions
    std::vector<double> template_weights = {1.0, 1.0, 1.0};
};

struct SyntheticData {
    std::vector<QaRecord> records;
    FeatureStore features;
    Taxonomy taxonomy;
};

/// Feature layout: per object type a block of count one-hot (max_count + 1)
/// and color one-hot (num_colors), then a final largest-type one-hot. With
/// noise 0 the encoding is an injective function of the scene; noise adds
/// uniform [-noise, noise] per entry.
SyntheticData generate_synthetic(const SynthConfig& config);

}  // namespace imgqa
