#include "imgqa/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "imgqa/error.hpp"

namespace imgqa {

std::string normalize_answer_word(const std::string& word) {
    std::string out;
    bool pending_space = false;
    for (char raw : word) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += c;
    }
    return out;
}

AnswerSet normalize_answer_set(const std::vector<std::string>& words) {
    AnswerSet set;
    for (const std::string& word : words) {
        std::string normalized = normalize_answer_word(word);
        if (!normalized.empty()) set.insert(std::move(normalized));
    }
    return set;
}

double wup_similarity(const std::string& a, const std::string& b, const Taxonomy& taxonomy) {
    return taxonomy.wup(a, b);
}

double thresholded_mu(const std::string& a, const std::string& b, const Taxonomy& taxonomy,
                      double threshold, double below_factor) {
    const double s = taxonomy.wup(a, b);
    return s >= threshold ? s : below_factor * s;
}

WordSimilarity exact_match_mu() {
    return [](const std::string& a, const std::string& b) { return a == b ? 1.0 : 0.0; };
}

WordSimilarity wups_mu(const Taxonomy& taxonomy, double threshold, double below_factor) {
    return [&taxonomy, threshold, below_factor](const std::string& a, const std::string& b) {
        return thresholded_mu(a, b, taxonomy, threshold, below_factor);
    };
}

double pair_score(const AnswerSet& a, const AnswerSet& t, const WordSimilarity& mu) {
    auto directed = [&mu](const AnswerSet& from, const AnswerSet& to) {
        double product = 1.0;  // empty product convention
        for (const std::string& x : from) {
            double best = 0.0;  // empty max convention
            for (const std::string& y : to) best = std::max(best, mu(x, y));
            product *= best;
        }
        return product;
    };
    return std::min(directed(a, t), directed(t, a));
}

namespace {

void check_lengths(std::size_t predictions, std::size_t references, const char* what) {
    if (predictions != references) {
        throw InputError(std::string(what) + ": " + std::to_string(predictions) +
                         " predictions vs " + std::to_string(references) + " references");
    }
    if (predictions == 0) throw InputError(std::string(what) + ": empty input");
}

}  // namespace

double wups(const std::vector<AnswerSet>& predictions,
            const std::vector<AnswerSet>& references, const Taxonomy& taxonomy,
            double threshold) {
    check_lengths(predictions.size(), references.size(), "wups");
    const WordSimilarity mu = wups_mu(taxonomy, threshold);
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        total += pair_score(predictions[i], references[i], mu);
    return total / static_cast<double>(predictions.size());
}

double accuracy(const std::vector<AnswerSet>& predictions,
                const std::vector<AnswerSet>& references) {
    check_lengths(predictions.size(), references.size(), "accuracy");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        hits += static_cast<std::size_t>(predictions[i] == references[i]);
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

namespace {

double consensus_metric(const std::vector<AnswerSet>& predictions,
                        const ConsensusReferences& consensus, const WordSimilarity& mu,
                        bool take_max, const char* what) {
    check_lengths(predictions.size(), consensus.per_question.size(), what);
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const std::vector<AnswerSet>& refs = consensus.per_question[i];
        if (refs.empty())
            throw InputError(std::string(what) + ": question " + std::to_string(i) +
                             " has no consensus references");
        double agg = 0.0;
        if (take_max) {
            for (const AnswerSet& ref : refs)
                agg = std::max(agg, pair_score(predictions[i], ref, mu));
        } else {
            for (const AnswerSet& ref : refs) agg += pair_score(predictions[i], ref, mu);
            agg /= static_cast<double>(refs.size());
        }
        total += agg;
    }
    return total / static_cast<double>(predictions.size());
}

}  // namespace

double acm(const std::vector<AnswerSet>& predictions, const ConsensusReferences& consensus,
           const Taxonomy& taxonomy, double threshold) {
    return consensus_metric(predictions, consensus, wups_mu(taxonomy, threshold),
                            /*take_max=*/false, "acm");
}

double mcm(const std::vector<AnswerSet>& predictions, const ConsensusReferences& consensus,
           const Taxonomy& taxonomy, double threshold) {
    return consensus_metric(predictions, consensus, wups_mu(taxonomy, threshold),
                            /*take_max=*/true, "mcm");
}

const char* to_string(Agreement agreement) {
    switch (agreement) {
        case Agreement::none: return "none";
        case Agreement::at_least_half: return "at_least_half";
        case Agreement::full: return "full";
    }
    return "?";
}

Agreement agreement_class(const std::vector<AnswerSet>& answers) {
    if (answers.empty()) throw InputError("agreement_class: no answers");
    std::map<AnswerSet, std::size_t> counts;
    for (const AnswerSet& answer : answers) ++counts[answer];
    std::size_t modal = 0;
    for (const auto& [answer, count] : counts) modal = std::max(modal, count);
    const std::size_t k = answers.size();
    if (modal == k) return Agreement::full;
    if (2 * modal >= k) return Agreement::at_least_half;
    return Agreement::none;
}

ScoreReport score_report(const std::vector<std::string>& ids,
                         const std::vector<AnswerSet>& predictions,
                         const ConsensusReferences& consensus, const Taxonomy& taxonomy,
                         const std::vector<double>& thresholds) {
    check_lengths(predictions.size(), consensus.per_question.size(), "score_report");
    if (ids.size() != predictions.size())
        throw InputError("score_report: id list length mismatch");

    ScoreReport report;
    report.n = predictions.size();
    report.thresholds = thresholds;

    std::vector<AnswerSet> canonical;
    canonical.reserve(report.n);
    for (std::size_t i = 0; i < report.n; ++i) {
        if (consensus.per_question[i].empty())
            throw InputError("score_report: question '" + ids[i] + "' has no references");
        canonical.push_back(consensus.per_question[i][0]);
    }

    report.accuracy = accuracy(predictions, canonical);
    for (double threshold : thresholds)
        report.wups.push_back(wups(predictions, canonical, taxonomy, threshold));

    ConsensusScores acm_scores, mcm_scores;
    const WordSimilarity exact = exact_match_mu();
    {
        double acm_total = 0.0, mcm_total = 0.0;
        for (std::size_t i = 0; i < report.n; ++i) {
            const auto& refs = consensus.per_question[i];
            double sum = 0.0, best = 0.0;
            for (const AnswerSet& ref : refs) {
                const double s = pair_score(predictions[i], ref, exact);
                sum += s;
                best = std::max(best, s);
            }
            acm_total += sum / static_cast<double>(refs.size());
            mcm_total += best;
        }
        acm_scores.exact = acm_total / static_cast<double>(report.n);
        mcm_scores.exact = mcm_total / static_cast<double>(report.n);
    }
    for (double threshold : thresholds) {
        acm_scores.wups.push_back(acm(predictions, consensus, taxonomy, threshold));
        mcm_scores.wups.push_back(mcm(predictions, consensus, taxonomy, threshold));
    }
    report.acm = std::move(acm_scores);
    report.mcm = std::move(mcm_scores);

    for (std::size_t i = 0; i < report.n; ++i) {
        PerQuestionScores q;
        q.id = ids[i];
        q.exact = predictions[i] == canonical[i] ? 1.0 : 0.0;
        for (double threshold : thresholds)
            q.wups.push_back(pair_score(predictions[i], canonical[i],
                                        wups_mu(taxonomy, threshold)));
        report.per_question.push_back(std::move(q));
    }
    return report;
}

}  // namespace imgqa
