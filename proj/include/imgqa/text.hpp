#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace imgqa {

/// Lowercases, splits on whitespace and commas, keeps a trailing "?" as its
/// own token and strips all other punctuation. Empty input gives an empty
/// sequence.
std::vector<std::string> tokenize(std::string_view raw);

/// Bidirectional word <-> index map with three reserved tokens at fixed
/// indices: 0 UNKNOWN, 1 the question mark, 2 the end-of-answer marker.
/// Immutable once built.
class Vocabulary {
public:
    static constexpr std::size_t kUnknown = 0;
    static constexpr std::size_t kQuestionMark = 1;
    static constexpr std::size_t kEndOfAnswer = 2;

    static const std::string& unknown_word();        // "<unk>"
    static const std::string& question_mark_word();  // "?"
    static const std::string& end_of_answer_word();  // "<end>"

    /// Reserved tokens only.
    Vocabulary();

    /// Contains every corpus token with frequency >= min_count plus the
    /// reserved tokens. Non-reserved indices are assigned by (frequency
    /// descending, then lexicographic), so identical corpora always produce
    /// identical vocabularies. min_count < 1 throws InputError.
    static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                            std::size_t min_count);

    std::size_t size() const { return words_.size(); }

    /// Index of a word; kUnknown when absent.
    std::size_t index_of(const std::string& word) const;
    bool contains(const std::string& word) const;

    /// Word at an index. Throws std::domain_error when index >= size().
    const std::string& word_at(std::size_t index) const;

    /// Reconstructs a vocabulary from an explicit index -> word list, which
    /// must start with the three reserved tokens and contain no duplicates
    /// (InputError otherwise).
    static Vocabulary from_words(const std::vector<std::string>& words);

    /// One word per line, line number = index, reserved tokens first.
    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);

    bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

    const std::vector<std::string>& words() const { return words_; }

private:
    void append(const std::string& word);

    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct EncodedSequence {
    std::vector<std::size_t> indices;
    std::size_t one_hot_dim = 0;  // |V|
};

/// Out-of-vocabulary tokens map to UNKNOWN.
EncodedSequence encode(const std::vector<std::string>& tokens, const Vocabulary& vocab);

/// Inverse of encode on the in-vocabulary domain. Throws std::domain_error
/// on an out-of-range index.
std::vector<std::string> decode(const std::vector<std::size_t>& indices,
                                const Vocabulary& vocab);

}  // namespace imgqa
