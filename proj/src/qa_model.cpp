#include "imgqa/qa_model.hpp"

#include <algorithm>
#include <cmath>

#include "imgqa/error.hpp"
#include "imgqa/numerics.hpp"

namespace imgqa {

const char* to_string(AnswerMode mode) {
    return mode == AnswerMode::single_word ? "single_word" : "multiple_words";
}

AnswerMode answer_mode_from_string(const std::string& name) {
    if (name == "single_word" || name == "single") return AnswerMode::single_word;
    if (name == "multiple_words" || name == "multi") return AnswerMode::multiple_words;
    throw InputError("unknown answer mode: " + name);
}

void validate(const ModelConfig& config) {
    if (config.embedding_dim < 1) throw InputError("config: embedding_dim must be >= 1");
    if (config.hidden_dim < 1) throw InputError("config: hidden_dim must be >= 1");
    if (config.max_decode_len < 1) throw InputError("config: max_decode_len must be >= 1");
    if (!(config.learning_rate > 0.0)) throw InputError("config: learning_rate must be > 0");
    if (!(config.init_scale > 0.0)) throw InputError("config: init_scale must be > 0");
    if (config.use_image && config.feature_dim < 1)
        throw InputError("config: feature_dim must be >= 1 when images are used");
}

TrainingSequence build_training_sequence(const std::vector<std::string>& question_tokens,
                                         const std::vector<std::string>& answer_tokens,
                                         const std::vector<double>& features,
                                         const Vocabulary& vocab, AnswerMode mode) {
    if (question_tokens.empty() ||
        question_tokens.back() != Vocabulary::question_mark_word()) {
        throw InputError("training sequence: question must end with the '?' token");
    }
    if (answer_tokens.empty()) throw InputError("training sequence: empty answer");

    const EncodedSequence question = encode(question_tokens, vocab);
    const EncodedSequence answer = encode(answer_tokens, vocab);
    const std::size_t n = question.indices.size();

    TrainingSequence seq;
    seq.features = features;
    seq.inputs = question.indices;

    if (mode == AnswerMode::single_word) {
        seq.targets.assign(n, Vocabulary::kUnknown);
        seq.mask.assign(n, 0);
        seq.targets[n - 1] = answer.indices[0];
        seq.mask[n - 1] = 1;
        return seq;
    }

    const std::size_t m = answer.indices.size();
    seq.inputs.insert(seq.inputs.end(), answer.indices.begin(), answer.indices.end());
    seq.targets.assign(n + m, Vocabulary::kUnknown);
    seq.mask.assign(n + m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        seq.targets[n - 1 + j] = answer.indices[j];  // "?" predicts a_1, a_j predicts a_{j+1}
        seq.mask[n - 1 + j] = 1;
    }
    seq.targets[n + m - 1] = Vocabulary::kEndOfAnswer;
    seq.mask[n + m - 1] = 1;
    return seq;
}

TrainingSequence training_sequence_from_text(const std::string& example_id,
                                             const std::string& question_text,
                                             const std::vector<std::string>& answer_words,
                                             const std::vector<double>& features,
                                             const Vocabulary& vocab, AnswerMode mode) {
    TrainingSequence seq = build_training_sequence(tokenize(question_text), answer_words,
                                                   features, vocab, mode);
    seq.example_id = example_id;
    return seq;
}

QaModel::QaModel(const ModelConfig& config, Vocabulary vocab)
    : config_(config), vocab_(std::move(vocab)) {
    validate(config_);
    Rng init(config_.seed);
    const std::size_t v = vocab_.size();
    const std::size_t e = config_.embedding_dim;
    const std::size_t h = config_.hidden_dim;

    Matrix embed(e, v);
    for (double& x : embed.data) x = init.uniform(-config_.init_scale, config_.init_scale);
    store_.add(kEmbeddingName, std::move(embed));

    lstm_.emplace(store_, "lstm", input_dim(), h, init, config_.init_scale);

    Matrix out_w(v, h);
    for (double& x : out_w.data) x = init.uniform(-config_.init_scale, config_.init_scale);
    store_.add(kOutputWeightName, std::move(out_w));
    store_.add(kOutputBiasName, Matrix(v, 1));

    auto& embed_entry = store_.entry(kEmbeddingName);
    embedding_ = &embed_entry.value;
    embedding_grad_ = &embed_entry.grad;
    auto& w_entry = store_.entry(kOutputWeightName);
    out_w_ = &w_entry.value;
    out_w_grad_ = &w_entry.grad;
    auto& b_entry = store_.entry(kOutputBiasName);
    out_b_ = &b_entry.value;
    out_b_grad_ = &b_entry.grad;
}

QaModel::QaModel(FromStoreTag, const ModelConfig& config, Vocabulary vocab,
                 ParameterStore store)
    : config_(config), vocab_(std::move(vocab)), store_(std::move(store)) {
    validate(config_);
    if (store_.size() != 15) {  // embedding + output pair + 12 LSTM entries
        throw FormatError("checkpoint: expected 15 parameters, got " +
                          std::to_string(store_.size()));
    }
    const std::size_t v = vocab_.size();
    const std::size_t e = config_.embedding_dim;
    const std::size_t h = config_.hidden_dim;

    auto& embed_entry = store_.entry(kEmbeddingName);
    if (embed_entry.value.rows != e || embed_entry.value.cols != v)
        throw FormatError("checkpoint: embedding shape " + embed_entry.value.shape_string() +
                          " does not match config");
    auto& w_entry = store_.entry(kOutputWeightName);
    if (w_entry.value.rows != v || w_entry.value.cols != h)
        throw FormatError("checkpoint: output weight shape " + w_entry.value.shape_string() +
                          " does not match config");
    auto& b_entry = store_.entry(kOutputBiasName);
    if (b_entry.value.rows != v || b_entry.value.cols != 1)
        throw FormatError("checkpoint: output bias shape " + b_entry.value.shape_string() +
                          " does not match config");

    lstm_.emplace(store_, "lstm", input_dim(), h);  // attach; validates shapes

    embedding_ = &embed_entry.value;
    embedding_grad_ = &embed_entry.grad;
    out_w_ = &w_entry.value;
    out_w_grad_ = &w_entry.grad;
    out_b_ = &b_entry.value;
    out_b_grad_ = &b_entry.grad;
}

std::size_t QaModel::input_dim() const {
    return config_.embedding_dim + (config_.use_image ? config_.feature_dim : 0);
}

void QaModel::check_features(const std::vector<double>& features) const {
    if (!config_.use_image) return;
    if (features.size() != config_.feature_dim) {
        throw ShapeError("feature vector length " + std::to_string(features.size()) +
                         ", expected " + std::to_string(config_.feature_dim));
    }
}

std::vector<double> QaModel::step_input(std::size_t word_index,
                                        const std::vector<double>& features) const {
    std::vector<double> v;
    v.reserve(input_dim());
    if (config_.use_image) v = features;
    const std::size_t e = config_.embedding_dim;
    for (std::size_t row = 0; row < e; ++row)
        v.push_back((*embedding_)(row, word_index));
    return v;
}

std::vector<double> QaModel::output_probs(const std::vector<double>& hidden) const {
    std::vector<double> logits = out_b_->data;
    matvec_accumulate(*out_w_, hidden, logits);
    return softmax(logits);
}

double QaModel::forward_loss(const TrainingSequence& seq, ForwardCache* cache) const {
    if (seq.inputs.empty()) throw std::domain_error("forward_loss: empty input sequence");
    if (seq.targets.size() != seq.inputs.size() || seq.mask.size() != seq.inputs.size()) {
        throw ShapeError("forward_loss: inputs/targets/mask lengths disagree: " +
                         std::to_string(seq.inputs.size()) + "/" +
                         std::to_string(seq.targets.size()) + "/" +
                         std::to_string(seq.mask.size()));
    }
    check_features(seq.features);

    std::vector<std::vector<double>> inputs;
    inputs.reserve(seq.inputs.size());
    for (std::size_t w : seq.inputs) {
        if (w >= vocab_.size())
            throw std::domain_error("forward_loss: input index out of range");
        inputs.push_back(step_input(w, seq.features));
    }

    auto [states, caches] = lstm_->forward(inputs, lstm_->initial_state());

    std::vector<std::vector<double>> probs;
    probs.reserve(states.size());
    for (const LstmState& s : states) probs.push_back(output_probs(s.h));

    const double loss = cross_entropy_masked(probs, seq.targets, seq.mask);
    if (cache != nullptr) {
        cache->lstm_caches = std::move(caches);
        cache->states = std::move(states);
        cache->probs = std::move(probs);
    }
    return loss;
}

void QaModel::backward(const TrainingSequence& seq, const ForwardCache& cache) {
    const std::size_t steps = seq.inputs.size();
    std::size_t supervised = 0;
    for (int m : seq.mask) supervised += static_cast<std::size_t>(m != 0);
    const double inv = 1.0 / static_cast<double>(supervised);

    std::vector<std::vector<double>> grad_h(steps,
                                            std::vector<double>(config_.hidden_dim, 0.0));
    std::vector<double> dlogits;
    for (std::size_t t = 0; t < steps; ++t) {
        if (seq.mask[t] == 0) continue;
        dlogits = cache.probs[t];
        dlogits[seq.targets[t]] -= 1.0;
        for (double& g : dlogits) g *= inv;
        add_outer(*out_w_grad_, dlogits, cache.states[t].h);
        for (std::size_t r = 0; r < dlogits.size(); ++r) out_b_grad_->data[r] += dlogits[r];
        matvec_transpose_accumulate(*out_w_, dlogits, grad_h[t]);
    }

    const std::vector<std::vector<double>> grad_inputs =
        lstm_->backward(grad_h, cache.lstm_caches);

    const std::size_t offset = config_.use_image ? config_.feature_dim : 0;
    const std::size_t e = config_.embedding_dim;
    for (std::size_t t = 0; t < steps; ++t) {
        const std::size_t w = seq.inputs[t];
        for (std::size_t row = 0; row < e; ++row)
            (*embedding_grad_)(row, w) += grad_inputs[t][offset + row];
    }
}

double QaModel::loss_and_gradients(const TrainingSequence& seq) {
    store_.zero_grads();
    ForwardCache cache;
    const double loss = forward_loss(seq, &cache);
    backward(seq, cache);
    return loss;
}

namespace {

std::size_t argmax_allowed(const std::vector<double>& probs,
                           const std::vector<char>& excluded) {
    std::size_t best = probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (excluded[i]) continue;
        if (best == probs.size() || probs[i] > probs[best]) best = i;  // ties keep lowest index
    }
    return best;
}

}  // namespace

DecodeResult QaModel::predict_answer(const std::vector<std::string>& question_tokens,
                                     const std::vector<double>& features) const {
    if (question_tokens.empty() ||
        question_tokens.back() != Vocabulary::question_mark_word()) {
        throw InputError("predict: question must end with the '?' token");
    }
    check_features(features);

    LstmState state = lstm_->initial_state();
    for (const std::string& token : question_tokens)
        state = lstm_->step(step_input(vocab_.index_of(token), features), state, nullptr);

    DecodeResult result;
    std::vector<char> excluded(vocab_.size(), 0);
    while (true) {
        const std::vector<double> probs = output_probs(state.h);
        const std::size_t choice = argmax_allowed(probs, excluded);
        result.chosen_probabilities.push_back(probs[choice]);
        if (choice == Vocabulary::kEndOfAnswer) break;
        result.words.push_back(vocab_.word_at(choice));
        if (config_.forbid_repeats) excluded[choice] = 1;
        if (result.words.size() >= config_.max_decode_len) {
            result.truncated = true;
            break;
        }
        state = lstm_->step(step_input(choice, features), state, nullptr);
    }
    return result;
}

std::string QaModel::predict_single_word(const std::vector<std::string>& question_tokens,
                                         const std::vector<double>& features) const {
    if (question_tokens.empty() ||
        question_tokens.back() != Vocabulary::question_mark_word()) {
        throw InputError("predict: question must end with the '?' token");
    }
    check_features(features);

    LstmState state = lstm_->initial_state();
    for (const std::string& token : question_tokens)
        state = lstm_->step(step_input(vocab_.index_of(token), features), state, nullptr);

    const std::vector<double> probs = output_probs(state.h);
    std::vector<char> excluded(vocab_.size(), 0);
    excluded[Vocabulary::kEndOfAnswer] = 1;
    excluded[Vocabulary::kUnknown] = 1;
    return vocab_.word_at(argmax_allowed(probs, excluded));
}

std::vector<std::string> QaModel::predict(const std::vector<std::string>& question_tokens,
                                          const std::vector<double>& features) const {
    if (config_.mode == AnswerMode::single_word)
        return {predict_single_word(question_tokens, features)};
    return predict_answer(question_tokens, features).words;
}

Trainer::Trainer(QaModel& model)
    : model_(model), shuffle_rng_(model.config().seed ^ 0x9e3779b97f4a7c15ULL) {}

EpochStats Trainer::run_epoch(const std::vector<TrainingSequence>& data) {
    if (data.empty()) throw InputError("train_epoch: empty dataset");
    const ModelConfig& config = model_.config();

    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle_rng_.shuffle(order);

    double total = 0.0;
    for (std::size_t idx : order) {
        const TrainingSequence& example = data[idx];
        const double loss = model_.loss_and_gradients(example);
        if (!std::isfinite(loss)) {
            throw TrainingError("non-finite loss on example '" + example.example_id + "'");
        }
        total += loss;

        ParameterStore& store = model_.params();
        if (config.grad_clip > 0.0) {
            const double norm = store.grad_norm();
            if (norm > config.grad_clip) store.scale_grads(config.grad_clip / norm);
        }
        for (auto& [name, entry] : store) {
            auto [it, inserted] =
                velocity_.try_emplace(name, Matrix(entry.value.rows, entry.value.cols));
            Matrix& vel = it->second;
            for (std::size_t i = 0; i < entry.value.data.size(); ++i) {
                vel.data[i] = config.momentum * vel.data[i] + entry.grad.data[i];
                entry.value.data[i] -= config.learning_rate * vel.data[i];
            }
        }
    }
    return EpochStats{total / static_cast<double>(data.size()), data.size()};
}

}  // namespace imgqa
