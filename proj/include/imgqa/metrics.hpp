#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "imgqa/taxonomy.hpp"

namespace imgqa {

/// Order-free, deduplicated answer words.
using AnswerSet = std::set<std::string>;

/// Lowercases, trims and collapses inner whitespace, drops empty words.
AnswerSet normalize_answer_set(const std::vector<std::string>& words);
std::string normalize_answer_word(const std::string& word);

/// Word-level membership measure.
using WordSimilarity = std::function<double(const std::string&, const std::string&)>;

/// Down-weighting applied to similarities below the threshold; follows the
/// metric's defining prior work.
inline constexpr double kBelowThresholdFactor = 0.1;

double wup_similarity(const std::string& a, const std::string& b, const Taxonomy& taxonomy);

/// s if s >= threshold else below_factor * s, with s the raw WUP score.
double thresholded_mu(const std::string& a, const std::string& b, const Taxonomy& taxonomy,
                      double threshold, double below_factor = kBelowThresholdFactor);

WordSimilarity exact_match_mu();
WordSimilarity wups_mu(const Taxonomy& taxonomy, double threshold,
                       double below_factor = kBelowThresholdFactor);

/// Set-level score: min of the two directed products of best word
/// similarities. Conventions: max over an empty set is 0, a product over an
/// empty set is 1, so two empty sets score 1 and an empty set against a
/// non-empty one scores 0.
double pair_score(const AnswerSet& a, const AnswerSet& t, const WordSimilarity& mu);

/// Mean pair_score over N aligned question pairs with the thresholded WUP
/// measure. Throws InputError on a length mismatch or N = 0.
double wups(const std::vector<AnswerSet>& predictions,
            const std::vector<AnswerSet>& references, const Taxonomy& taxonomy,
            double threshold);

/// Fraction of questions with exact set equality.
double accuracy(const std::vector<AnswerSet>& predictions,
                const std::vector<AnswerSet>& references);

/// Per question i, the K_i human answer sets. K_i >= 1 everywhere.
struct ConsensusReferences {
    std::vector<std::vector<AnswerSet>> per_question;
};

/// Average consensus: mean over questions of the mean pair_score against
/// each of that question's K_i references.
double acm(const std::vector<AnswerSet>& predictions, const ConsensusReferences& consensus,
           const Taxonomy& taxonomy, double threshold);

/// Min consensus: mean over questions of the best pair_score against any of
/// that question's references.
double mcm(const std::vector<AnswerSet>& predictions, const ConsensusReferences& consensus,
           const Taxonomy& taxonomy, double threshold);

enum class Agreement { none, at_least_half, full };
const char* to_string(Agreement agreement);

/// Modal-answer frequency rule: with f the multiplicity of the most common
/// normalized answer set over K answers, the class is full when f = K,
/// at_least_half when 2f >= K, none otherwise. Empty input throws
/// InputError.
Agreement agreement_class(const std::vector<AnswerSet>& answers);

struct PerQuestionScores {
    std::string id;
    double exact = 0.0;               // 1 when sets match exactly
    std::vector<double> wups;         // parallel to ScoreReport::thresholds
};

struct ConsensusScores {
    double exact = 0.0;               // pair_score with the exact-match measure
    std::vector<double> wups;         // parallel to ScoreReport::thresholds
};

struct ScoreReport {
    std::size_t n = 0;
    std::vector<double> thresholds;   // e.g. {0.9, 0.0}
    double accuracy = 0.0;
    std::vector<double> wups;         // against the canonical reference
    std::optional<ConsensusScores> acm;
    std::optional<ConsensusScores> mcm;
    std::vector<PerQuestionScores> per_question;
};

/// Scores predictions against consensus references whose first entry per
/// question is the canonical single reference. Accuracy and WUPS use the
/// canonical reference; ACM and MCM use all of them.
ScoreReport score_report(const std::vector<std::string>& ids,
                         const std::vector<AnswerSet>& predictions,
                         const ConsensusReferences& consensus, const Taxonomy& taxonomy,
                         const std::vector<double>& thresholds);

}  // namespace imgqa
