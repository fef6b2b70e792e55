#include "imgqa/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "imgqa/error.hpp"

namespace imgqa {

std::size_t Taxonomy::index_of(const std::string& id) const {
    auto it = id_index_.find(id);
    return it == id_index_.end() ? npos : it->second;
}

bool Taxonomy::has_node(const std::string& id) const { return index_of(id) != npos; }

std::size_t Taxonomy::depth(const std::string& id) const {
    const std::size_t i = index_of(id);
    if (i == npos) throw InputError("taxonomy: unknown node '" + id + "'");
    return depth_[i];
}

Taxonomy Taxonomy::from_edges(const std::string& root,
                              const std::vector<std::pair<std::string, std::string>>& edges) {
    if (root.empty()) throw InputError("taxonomy: empty root id");

    Taxonomy t;
    t.root_ = root;
    auto intern = [&t](const std::string& id) {
        auto [it, inserted] = t.id_index_.try_emplace(id, t.ids_.size());
        if (inserted) {
            t.ids_.push_back(id);
            t.parent_.push_back(npos);
        }
        return it->second;
    };
    const std::size_t root_index = intern(root);

    for (const auto& [child, parent] : edges) {
        const std::size_t c = intern(child);
        const std::size_t p = intern(parent);
        if (c == root_index) throw InputError("taxonomy: root '" + root + "' cannot have a parent");
        if (t.parent_[c] != npos)
            throw InputError("taxonomy: node '" + child + "' has two parents");
        t.parent_[c] = p;
    }

    for (std::size_t i = 0; i < t.ids_.size(); ++i) {
        if (i != root_index && t.parent_[i] == npos) {
            throw InputError("taxonomy: node '" + t.ids_[i] +
                             "' has no parent and is not the root");
        }
    }

    // Depths via parent chains; a chain longer than the node count is a cycle.
    t.depth_.assign(t.ids_.size(), 0);
    for (std::size_t i = 0; i < t.ids_.size(); ++i) {
        std::size_t hops = 0;
        std::size_t cursor = i;
        while (cursor != root_index) {
            cursor = t.parent_[cursor];
            if (++hops > t.ids_.size())
                throw InputError("taxonomy: cycle through node '" + t.ids_[i] + "'");
        }
        t.depth_[i] = hops + 1;  // root has depth 1
    }
    return t;
}

Taxonomy Taxonomy::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read taxonomy file: " + path);
    std::string line;
    std::size_t line_no = 0;
    std::string root;
    std::vector<std::pair<std::string, std::string>> edges;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        if (root.empty()) {
            std::string extra;
            if (!(row >> root) || (row >> extra))
                throw ParseError(path, line_no, "expected the root id alone on the first line");
            continue;
        }
        std::string child, parent, extra;
        if (!(row >> child >> parent) || (row >> extra))
            throw ParseError(path, line_no, "expected 'child_id parent_id'");
        edges.emplace_back(std::move(child), std::move(parent));
    }
    if (root.empty()) throw ParseError(path, line_no, "missing root declaration");
    try {
        return from_edges(root, edges);
    } catch (const InputError& e) {
        throw ParseError(path, line_no, e.what());
    }
}

void Taxonomy::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write taxonomy file: " + path);
    out << root_ << '\n';
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (parent_[i] == npos) continue;
        out << ids_[i] << ' ' << ids_[parent_[i]] << '\n';
    }
}

void Taxonomy::set_lexicon(const std::map<std::string, std::set<std::string>>& word_to_nodes) {
    std::unordered_map<std::string, std::vector<std::size_t>> lexicon;
    for (const auto& [word, nodes] : word_to_nodes) {
        std::vector<std::size_t>& targets = lexicon[word];
        for (const std::string& node : nodes) {
            const std::size_t i = index_of(node);
            if (i == npos)
                throw InputError("lexicon: word '" + word + "' maps to unknown node '" +
                                 node + "'");
            targets.push_back(i);
        }
    }
    lexicon_ = std::move(lexicon);
    identity_lexicon_ = false;
}

void Taxonomy::load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read lexicon file: " + path);
    std::map<std::string, std::set<std::string>> mapping;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        // node id is the trailing token; the word may contain spaces
        const std::size_t split = line.find_last_of(" \t");
        if (split == std::string::npos)
            throw ParseError(path, line_no, "expected 'word node_id'");
        std::string word = line.substr(0, split);
        std::string node = line.substr(split + 1);
        while (!word.empty() && (word.back() == ' ' || word.back() == '\t')) word.pop_back();
        if (word.empty() || node.empty())
            throw ParseError(path, line_no, "expected 'word node_id'");
        mapping[word].insert(node);
    }
    try {
        set_lexicon(mapping);
    } catch (const InputError& e) {
        throw ParseError(path, line_no, e.what());
    }
}

std::vector<std::size_t> Taxonomy::lexicon_nodes(const std::string& word) const {
    if (identity_lexicon_) {
        const std::size_t i = index_of(word);
        if (i == npos) return {};
        return {i};
    }
    auto it = lexicon_.find(word);
    if (it == lexicon_.end()) return {};
    return it->second;
}

double Taxonomy::wup(const std::string& a, const std::string& b) const {
    const std::vector<std::size_t> nodes_a = lexicon_nodes(a);
    const std::vector<std::size_t> nodes_b = lexicon_nodes(b);
    if (nodes_a.empty() || nodes_b.empty()) return a == b ? 1.0 : 0.0;

    double best = 0.0;
    std::vector<std::size_t> ancestor_depth(ids_.size(), 0);  // 0 = not an ancestor
    for (const std::size_t na : nodes_a) {
        // Mark the ancestor chain of na with depths.
        for (std::size_t cursor = na;; cursor = parent_[cursor]) {
            ancestor_depth[cursor] = depth_[cursor];
            if (parent_[cursor] == npos) break;
        }
        for (const std::size_t nb : nodes_b) {
            // First marked ancestor of nb is the lowest common one.
            std::size_t lca_depth = 0;
            for (std::size_t cursor = nb;; cursor = parent_[cursor]) {
                if (ancestor_depth[cursor] != 0) {
                    lca_depth = ancestor_depth[cursor];
                    break;
                }
                if (parent_[cursor] == npos) break;
            }
            const double score = 2.0 * static_cast<double>(lca_depth) /
                                 static_cast<double>(depth_[na] + depth_[nb]);
            best = std::max(best, score);
        }
        for (std::size_t cursor = na;; cursor = parent_[cursor]) {
            ancestor_depth[cursor] = 0;
            if (parent_[cursor] == npos) break;
        }
    }
    return best;
}

}  // namespace imgqa
