#include <algorithm>
#include <string>
#include <vector>

#include "imgqa/dataset.hpp"
#include "imgqa/error.hpp"
#include "imgqa/rng.hpp"

namespace imgqa {

namespace {

const char* kObjectNames[] = {"table", "chair", "lamp",  "sofa",   "box",  "mug",
                              "shelf", "plant", "clock", "carton", "desk", "bottle"};
const char* kColorNames[] = {"red",   "blue",  "green",  "white",
                             "black", "brown", "yellow", "gray"};

std::vector<std::string> pick_names(const char* const* pool, std::size_t pool_size,
                                    std::size_t wanted, const char* fallback_prefix) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < wanted; ++i) {
        if (i < pool_size)
            names.emplace_back(pool[i]);
        else
            names.push_back(std::string(fallback_prefix) + std::to_string(i));
    }
    return names;
}

std::string zero_padded(std::size_t value, int width) {
    std::string digits = std::to_string(value);
    while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
    return digits;
}

struct Scene {
    std::vector<std::size_t> present;      // type indices
    std::vector<std::size_t> count;        // per present type, 1..max_count
    std::vector<std::size_t> color;        // per present type
    std::size_t largest = 0;               // index into `present`
};

}  // namespace

SyntheticData generate_synthetic(const SynthConfig& config) {
    if (config.num_records < 1) throw InputError("synthetic: num_records must be >= 1");
    if (config.num_object_types < 2) throw InputError("synthetic: need at least 2 object types");
    if (config.num_colors < 1) throw InputError("synthetic: num_colors must be >= 1");
    if (config.max_count < 1) throw InputError("synthetic: max_count must be >= 1");
    if (config.noise < 0.0) throw InputError("synthetic: noise must be >= 0");
    if (config.template_weights.size() != 3)
        throw InputError("synthetic: expected 3 template weights (color, count, largest)");
    double weight_sum = 0.0;
    for (double w : config.template_weights) {
        if (w < 0.0) throw InputError("synthetic: template weights must be >= 0");
        weight_sum += w;
    }
    if (!(weight_sum > 0.0)) throw InputError("synthetic: template weights are all zero");

    const std::size_t types = config.num_object_types;
    const std::size_t colors = config.num_colors;
    const std::vector<std::string> object_names =
        pick_names(kObjectNames, std::size(kObjectNames), types, "object");
    const std::vector<std::string> color_names =
        pick_names(kColorNames, std::size(kColorNames), colors, "color");

    const std::size_t count_block = config.max_count + 1;
    const std::size_t type_block = count_block + colors;
    const std::size_t feature_dim = types * type_block + types;

    Rng rng(config.seed);
    SyntheticData data;
    data.features = FeatureStore(feature_dim);

    for (std::size_t record_index = 0; record_index < config.num_records; ++record_index) {
        // Scene: 2..min(4, types) distinct object types, each with one
        // count and one color, and a designated largest object.
        Scene scene;
        const std::size_t max_present = std::min<std::size_t>(4, types);
        const std::size_t n_present = 2 + rng.below(max_present - 1);
        std::vector<std::size_t> order(types);
        for (std::size_t i = 0; i < types; ++i) order[i] = i;
        rng.shuffle(order);
        scene.present.assign(order.begin(), order.begin() + n_present);
        std::sort(scene.present.begin(), scene.present.end());
        for (std::size_t i = 0; i < n_present; ++i) {
            scene.count.push_back(1 + rng.below(config.max_count));
            scene.color.push_back(rng.below(colors));
        }
        scene.largest = rng.below(n_present);

        std::vector<double> feature(feature_dim, 0.0);
        for (std::size_t i = 0; i < types; ++i) feature[i * type_block + 0] = 1.0;  // count 0
        for (std::size_t i = 0; i < n_present; ++i) {
            const std::size_t t = scene.present[i];
            feature[t * type_block + 0] = 0.0;
            feature[t * type_block + scene.count[i]] = 1.0;
            feature[t * type_block + count_block + scene.color[i]] = 1.0;
        }
        feature[types * type_block + scene.present[scene.largest]] = 1.0;
        if (config.noise > 0.0) {
            for (double& x : feature) x += rng.uniform(-config.noise, config.noise);
        }

        QaRecord record;
        record.id = "q" + zero_padded(record_index, 6);
        record.image_id = "img" + zero_padded(record_index, 6);

        const std::size_t which = rng.pick_weighted(config.template_weights);
        const std::size_t pick = rng.below(n_present);
        switch (which) {
            case 0:
                record.question =
                    "what color is the " + object_names[scene.present[pick]] + " ?";
                record.answers.push_back({color_names[scene.color[pick]]});
                break;
            case 1:
                record.question =
                    "how many " + object_names[scene.present[pick]] + " are there ?";
                record.answers.push_back({std::to_string(scene.count[pick])});
                break;
            default:
                record.question = "what is the largest object ?";
                record.answers.push_back({object_names[scene.present[scene.largest]]});
                break;
        }

        data.features.insert(record.image_id, std::move(feature));
        data.records.push_back(std::move(record));
    }

    // Companion toy taxonomy over the synthetic vocabulary; node ids double
    // as words (identity lexicon).
    std::vector<std::pair<std::string, std::string>> edges;
    edges.emplace_back("object", "entity");
    edges.emplace_back("color", "entity");
    edges.emplace_back("number", "entity");
    edges.emplace_back("furniture", "object");
    edges.emplace_back("container", "object");
    for (std::size_t i = 0; i < types; ++i)
        edges.emplace_back(object_names[i], i % 2 == 0 ? "furniture" : "container");
    for (std::size_t i = 0; i < colors; ++i) edges.emplace_back(color_names[i], "color");
    for (std::size_t i = 0; i <= config.max_count; ++i)
        edges.emplace_back(std::to_string(i), "number");
    data.taxonomy = Taxonomy::from_edges("entity", edges);

    return data;
}

}  // namespace imgqa
