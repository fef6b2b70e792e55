#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "imgqa/error.hpp"
#include "imgqa/qa_model.hpp"

namespace imgqa {

namespace {

constexpr const char* kMagic = "imgqa checkpoint 1";

// %a round-trips doubles exactly and formats deterministically, which is
// what makes save -> load -> save byte-identical.
std::string hex_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", x);
    return buf;
}

class LineReader {
public:
    LineReader(std::istream& in, const std::string& path) : in_(in), path_(path) {}

    std::string next() {
        std::string line;
        if (!std::getline(in_, line)) {
            throw FormatError("checkpoint " + path_ + ": truncated at line " +
                              std::to_string(line_no_ + 1));
        }
        ++line_no_;
        return line;
    }

    // "key value" pair with a fixed expected key.
    std::string keyed(const std::string& key) {
        const std::string line = next();
        if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0 ||
            line[key.size()] != ' ') {
            throw FormatError("checkpoint " + path_ + " line " + std::to_string(line_no_) +
                              ": expected '" + key + " ...', got '" + line + "'");
        }
        return line.substr(key.size() + 1);
    }

    std::size_t line_no() const { return line_no_; }

private:
    std::istream& in_;
    std::string path_;
    std::size_t line_no_ = 0;
};

double parse_double(const std::string& text, const std::string& context) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw FormatError("checkpoint: bad number in " + context + ": '" + text + "'");
    return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& context) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0')
        throw FormatError("checkpoint: bad integer in " + context + ": '" + text + "'");
    return value;
}

bool parse_flag(const std::string& text, const std::string& context) {
    if (text == "0") return false;
    if (text == "1") return true;
    throw FormatError("checkpoint: bad flag in " + context + ": '" + text + "'");
}

}  // namespace

void QaModel::save_checkpoint(const std::string& path) const {
    std::ostringstream out;
    out << kMagic << '\n';
    out << "mode " << to_string(config_.mode) << '\n';
    out << "use_image " << (config_.use_image ? 1 : 0) << '\n';
    out << "embedding_dim " << config_.embedding_dim << '\n';
    out << "hidden_dim " << config_.hidden_dim << '\n';
    out << "feature_dim " << config_.feature_dim << '\n';
    out << "max_decode_len " << config_.max_decode_len << '\n';
    out << "forbid_repeats " << (config_.forbid_repeats ? 1 : 0) << '\n';
    out << "learning_rate " << hex_double(config_.learning_rate) << '\n';
    out << "momentum " << hex_double(config_.momentum) << '\n';
    out << "grad_clip " << hex_double(config_.grad_clip) << '\n';
    out << "init_scale " << hex_double(config_.init_scale) << '\n';
    out << "seed " << config_.seed << '\n';

    out << "vocab " << vocab_.size() << '\n';
    for (const std::string& word : vocab_.words()) out << word << '\n';

    out << "params " << store_.size() << '\n';
    for (const auto& [name, entry] : store_) {
        out << "param " << name << ' ' << entry.value.rows << ' ' << entry.value.cols << '\n';
        for (std::size_t r = 0; r < entry.value.rows; ++r) {
            for (std::size_t c = 0; c < entry.value.cols; ++c) {
                if (c != 0) out << ' ';
                out << hex_double(entry.value(r, c));
            }
            out << '\n';
        }
    }
    out << "end\n";

    std::ofstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot write checkpoint file: " + path);
    file << out.str();
    if (!file) throw InputError("failed writing checkpoint file: " + path);
}

QaModel QaModel::load_checkpoint(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot read checkpoint file: " + path);
    LineReader reader(file, path);

    const std::string magic = reader.next();
    if (magic != kMagic)
        throw FormatError("checkpoint " + path + ": unsupported header '" + magic + "'");

    ModelConfig config;
    config.mode = answer_mode_from_string(reader.keyed("mode"));
    config.use_image = parse_flag(reader.keyed("use_image"), "use_image");
    config.embedding_dim = parse_u64(reader.keyed("embedding_dim"), "embedding_dim");
    config.hidden_dim = parse_u64(reader.keyed("hidden_dim"), "hidden_dim");
    config.feature_dim = parse_u64(reader.keyed("feature_dim"), "feature_dim");
    config.max_decode_len = parse_u64(reader.keyed("max_decode_len"), "max_decode_len");
    config.forbid_repeats = parse_flag(reader.keyed("forbid_repeats"), "forbid_repeats");
    config.learning_rate = parse_double(reader.keyed("learning_rate"), "learning_rate");
    config.momentum = parse_double(reader.keyed("momentum"), "momentum");
    config.grad_clip = parse_double(reader.keyed("grad_clip"), "grad_clip");
    config.init_scale = parse_double(reader.keyed("init_scale"), "init_scale");
    config.seed = parse_u64(reader.keyed("seed"), "seed");

    const std::size_t vocab_count = parse_u64(reader.keyed("vocab"), "vocab");
    std::vector<std::string> words;
    words.reserve(vocab_count);
    for (std::size_t i = 0; i < vocab_count; ++i) words.push_back(reader.next());
    Vocabulary vocab;
    try {
        vocab = Vocabulary::from_words(words);
    } catch (const InputError& e) {
        throw FormatError("checkpoint " + path + ": " + e.what());
    }

    const std::size_t param_count = parse_u64(reader.keyed("params"), "params");
    ParameterStore store;
    for (std::size_t p = 0; p < param_count; ++p) {
        std::istringstream header(reader.keyed("param"));
        std::string name;
        std::size_t rows = 0, cols = 0;
        if (!(header >> name >> rows >> cols))
            throw FormatError("checkpoint " + path + ": malformed param header");
        Matrix value(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            std::istringstream row(reader.next());
            for (std::size_t c = 0; c < cols; ++c) {
                std::string cell;
                if (!(row >> cell))
                    throw FormatError("checkpoint " + path + ": short row in param " + name);
                value(r, c) = parse_double(cell, "param " + name);
            }
            std::string extra;
            if (row >> extra)
                throw FormatError("checkpoint " + path + ": long row in param " + name);
        }
        store.add(name, std::move(value));
    }
    if (reader.next() != "end")
        throw FormatError("checkpoint " + path + ": missing end marker");

    try {
        return QaModel(FromStoreTag{}, config, std::move(vocab), std::move(store));
    } catch (const InputError& e) {
        throw FormatError("checkpoint " + path + ": " + e.what());
    } catch (const ShapeError& e) {
        throw FormatError("checkpoint " + path + ": " + e.what());
    }
}

}  // namespace imgqa
