#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imgqa/lstm.hpp"
#include "imgqa/param_store.hpp"
#include "imgqa/text.hpp"

namespace imgqa {

enum class AnswerMode { multiple_words, single_word };

const char* to_string(AnswerMode mode);
AnswerMode answer_mode_from_string(const std::string& name);

struct ModelConfig {
    std::size_t embedding_dim = 64;
    std::size_t hidden_dim = 256;
    std::size_t feature_dim = 0;  // ignored when use_image is false
    AnswerMode mode = AnswerMode::multiple_words;
    bool use_image = true;
    std::size_t max_decode_len = 10;
    bool forbid_repeats = false;
    double learning_rate = 0.01;
    double momentum = 0.9;
    double grad_clip = 5.0;
    double init_scale = 0.08;
    std::uint64_t seed = 20150501;
};

/// Throws InputError when a field is outside its documented range.
void validate(const ModelConfig& config);

/// Teacher-forced input/target layout for one example. Inputs are the
/// question words followed (in multiple-words mode) by the ground-truth
/// answer words; the mask is 1 from the question-mark position onward and
/// 0 before it, so only answer predictions enter the loss.
struct TrainingSequence {
    std::vector<std::size_t> inputs;
    std::vector<double> features;  // empty in language-only pipelines
    std::vector<std::size_t> targets;
    std::vector<int> mask;  // 0/1, same length as inputs
    std::string example_id;
};

/// Builds the teacher-forced sequence. The question must end with the "?"
/// token and the answer must be non-empty (InputError otherwise).
/// multiple-words: inputs [q_1..q_{n-1}, ?, a_1..a_m], the "?" position
/// targets a_1, each a_j targets a_{j+1}, a_m targets the end marker.
/// single-word: inputs are the question only and the "?" position targets
/// a_1 with no end marker.
TrainingSequence build_training_sequence(const std::vector<std::string>& question_tokens,
                                         const std::vector<std::string>& answer_tokens,
                                         const std::vector<double>& features,
                                         const Vocabulary& vocab, AnswerMode mode);

/// Convenience wrapper: tokenizes raw question text first.
TrainingSequence training_sequence_from_text(const std::string& example_id,
                                             const std::string& question_text,
                                             const std::vector<std::string>& answer_words,
                                             const std::vector<double>& features,
                                             const Vocabulary& vocab, AnswerMode mode);

struct DecodeResult {
    std::vector<std::string> words;  // end marker stripped
    bool truncated = false;
    std::vector<double> chosen_probabilities;  // incl. the end marker's step
};

struct ForwardCache {
    std::vector<LstmStepCache> lstm_caches;
    std::vector<LstmState> states;
    std::vector<std::vector<double>> probs;  // softmax output per step
};

/// The question-answering network: a jointly learnt word embedding, a
/// single LSTM layer whose per-step input is the embedded word optionally
/// concatenated after the image feature vector, and an affine projection
/// to vocabulary logits with a softmax on top.
class QaModel {
public:
    /// Fresh model; parameters drawn from config.seed.
    QaModel(const ModelConfig& config, Vocabulary vocab);

    QaModel(const QaModel&) = delete;
    QaModel& operator=(const QaModel&) = delete;
    QaModel(QaModel&&) = default;
    QaModel& operator=(QaModel&&) = default;

    const ModelConfig& config() const { return config_; }
    const Vocabulary& vocabulary() const { return vocab_; }
    ParameterStore& params() { return store_; }
    const ParameterStore& params() const { return store_; }

    /// LSTM input dimension: F + E with image features, E without.
    std::size_t input_dim() const;

    /// Masked mean cross-entropy of the teacher-forced sequence.
    double forward_loss(const TrainingSequence& seq, ForwardCache* cache = nullptr) const;

    /// Accumulates dLoss/dparameter into the store's gradient buffers.
    void backward(const TrainingSequence& seq, const ForwardCache& cache);

    /// zero_grads + forward + backward; returns the loss.
    double loss_and_gradients(const TrainingSequence& seq);

    /// Greedy recursive decoding: feeds the question, then repeatedly emits
    /// the argmax word and feeds it back until the end marker or
    /// max_decode_len words. Ties break toward the lowest vocabulary index.
    /// With forbid_repeats, already-emitted words are excluded from the
    /// argmax. The question must end with "?" (InputError).
    DecodeResult predict_answer(const std::vector<std::string>& question_tokens,
                                const std::vector<double>& features) const;

    /// One decode step at the "?" position; argmax over the vocabulary
    /// excluding the end marker and UNKNOWN.
    std::string predict_single_word(const std::vector<std::string>& question_tokens,
                                    const std::vector<double>& features) const;

    /// Mode-aware prediction: one word in single-word mode, full greedy
    /// decoding otherwise.
    std::vector<std::string> predict(const std::vector<std::string>& question_tokens,
                                     const std::vector<double>& features) const;

    /// Versioned text container with hexfloat parameters; save-load-save
    /// produces identical bytes. Layout documented in the README.
    void save_checkpoint(const std::string& path) const;
    static QaModel load_checkpoint(const std::string& path);

    static constexpr const char* kEmbeddingName = "embed.W";
    static constexpr const char* kOutputWeightName = "out.W";
    static constexpr const char* kOutputBiasName = "out.b";

private:
    struct FromStoreTag {};
    QaModel(FromStoreTag, const ModelConfig& config, Vocabulary vocab, ParameterStore store);

    std::vector<double> step_input(std::size_t word_index,
                                   const std::vector<double>& features) const;
    std::vector<double> output_probs(const std::vector<double>& hidden) const;
    void check_features(const std::vector<double>& features) const;

    ModelConfig config_;
    Vocabulary vocab_;
    ParameterStore store_;
    std::optional<LstmCell> lstm_;
    Matrix* embedding_ = nullptr;  // E x |V|
    Matrix* embedding_grad_ = nullptr;
    Matrix* out_w_ = nullptr;  // |V| x H
    Matrix* out_w_grad_ = nullptr;
    Matrix* out_b_ = nullptr;  // |V| x 1
    Matrix* out_b_grad_ = nullptr;
};

struct EpochStats {
    double mean_loss = 0.0;
    std::size_t examples = 0;
};

/// Per-example SGD with momentum and global gradient-norm clipping.
/// Deterministic: the shuffle order is a fixed function of the model seed
/// and the number of epochs already run.
class Trainer {
public:
    explicit Trainer(QaModel& model);

    /// One seeded-shuffled pass over the data. Throws InputError on an
    /// empty dataset and TrainingError (naming the example) when a loss
    /// turns non-finite.
    EpochStats run_epoch(const std::vector<TrainingSequence>& data);

private:
    QaModel& model_;
    Rng shuffle_rng_;
    std::map<std::string, Matrix> velocity_;
};

}  // namespace imgqa
