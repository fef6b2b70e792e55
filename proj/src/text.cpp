#include "imgqa/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <stdexcept>

#include "imgqa/error.hpp"

namespace imgqa {

namespace {

bool keepable(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw) {
    std::vector<std::string> tokens;
    std::string chunk;
    auto flush = [&]() {
        if (chunk.empty()) return;
        bool question_mark = false;
        while (!chunk.empty() && chunk.back() == '?') {
            question_mark = true;
            chunk.pop_back();
        }
        std::string word;
        for (char c : chunk)
            if (keepable(c)) word += c;
        if (!word.empty()) tokens.push_back(std::move(word));
        if (question_mark) tokens.push_back("?");
        chunk.clear();
    };
    for (char raw_c : raw) {
        const char c = static_cast<char>(
            std::tolower(static_cast<unsigned char>(raw_c)));
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            flush();
        } else {
            chunk += c;
        }
    }
    flush();
    return tokens;
}

const std::string& Vocabulary::unknown_word() {
    static const std::string w = "<unk>";
    return w;
}

const std::string& Vocabulary::question_mark_word() {
    static const std::string w = "?";
    return w;
}

const std::string& Vocabulary::end_of_answer_word() {
    static const std::string w = "<end>";
    return w;
}

Vocabulary::Vocabulary() {
    append(unknown_word());
    append(question_mark_word());
    append(end_of_answer_word());
}

void Vocabulary::append(const std::string& word) {
    index_.emplace(word, words_.size());
    words_.push_back(word);
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus,
                             std::size_t min_count) {
    if (min_count < 1) throw InputError("build_vocabulary: min_count must be >= 1");

    std::map<std::string, std::size_t> counts;  // ordered map fixes tie order
    for (const auto& sentence : corpus)
        for (const auto& token : sentence) ++counts[token];

    std::vector<std::pair<std::string, std::size_t>> kept;
    for (const auto& [word, count] : counts) {
        if (count < min_count) continue;
        if (word == unknown_word() || word == question_mark_word() ||
            word == end_of_answer_word())
            continue;  // reserved tokens keep their fixed slots
        kept.emplace_back(word, count);
    }
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary vocab;
    for (const auto& [word, count] : kept) vocab.append(word);
    return vocab;
}

Vocabulary Vocabulary::from_words(const std::vector<std::string>& words) {
    Vocabulary vocab;
    if (words.size() < 3 || words[0] != unknown_word() || words[1] != question_mark_word() ||
        words[2] != end_of_answer_word()) {
        throw InputError("vocabulary must start with the three reserved tokens");
    }
    for (std::size_t i = 3; i < words.size(); ++i) {
        if (words[i].empty()) throw InputError("empty vocabulary word at index " + std::to_string(i));
        if (vocab.contains(words[i])) throw InputError("duplicate vocabulary word: " + words[i]);
        vocab.append(words[i]);
    }
    return vocab;
}

std::size_t Vocabulary::index_of(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? kUnknown : it->second;
}

bool Vocabulary::contains(const std::string& word) const {
    return index_.count(word) != 0;
}

const std::string& Vocabulary::word_at(std::size_t index) const {
    if (index >= words_.size()) {
        throw std::domain_error("vocabulary index " + std::to_string(index) +
                                " out of range (size " + std::to_string(words_.size()) + ")");
    }
    return words_[index];
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write vocabulary file: " + path);
    for (const auto& word : words_) out << word << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read vocabulary file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    try {
        return from_words(lines);
    } catch (const InputError& e) {
        throw ParseError(path, lines.size(), e.what());
    }
}

EncodedSequence encode(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
    EncodedSequence seq;
    seq.one_hot_dim = vocab.size();
    seq.indices.reserve(tokens.size());
    for (const auto& token : tokens) seq.indices.push_back(vocab.index_of(token));
    return seq;
}

std::vector<std::string> decode(const std::vector<std::size_t>& indices,
                                const Vocabulary& vocab) {
    std::vector<std::string> tokens;
    tokens.reserve(indices.size());
    for (std::size_t index : indices) tokens.push_back(vocab.word_at(index));
    return tokens;
}

}  // namespace imgqa
