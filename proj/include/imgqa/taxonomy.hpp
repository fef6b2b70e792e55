#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace imgqa {

/// Rooted is-a hierarchy with a word -> node lexicon, backing Wu-Palmer
/// similarity. Immutable once loaded. A default-constructed taxonomy has no
/// nodes, so every similarity query falls back to exact string matching.
///
/// File grammar: first line is the root id, every following non-empty line
/// is "child_id parent_id". Lexicon file grammar: lines "word node_id"; a
/// word may repeat to name several senses. Without an explicit lexicon
/// every node id doubles as the word that names it.
class Taxonomy {
public:
    Taxonomy() = default;

    /// Validates single-rootedness, acyclicity and connectedness; throws
    /// InputError on violations. Depth of the root is 1.
    static Taxonomy from_edges(const std::string& root,
                               const std::vector<std::pair<std::string, std::string>>& edges);

    static Taxonomy load(const std::string& path);
    void save(const std::string& path) const;

    /// Replaces the identity lexicon. Unknown node targets throw InputError.
    void set_lexicon(const std::map<std::string, std::set<std::string>>& word_to_nodes);
    void load_lexicon(const std::string& path);

    bool empty() const { return ids_.empty(); }
    std::size_t node_count() const { return ids_.size(); }
    const std::string& root() const { return root_; }
    bool has_node(const std::string& id) const;

    /// Depth of a node (root = 1). Throws InputError for unknown ids.
    std::size_t depth(const std::string& id) const;

    /// Nodes a word maps to; empty when the word is outside the lexicon.
    std::vector<std::size_t> lexicon_nodes(const std::string& word) const;

    /// Raw Wu-Palmer similarity: the maximum over lexicon node pairs of
    /// 2 * depth(lca) / (depth(a) + depth(b)). Falls back to exact string
    /// match when either word has no lexicon entry.
    double wup(const std::string& a, const std::string& b) const;

private:
    std::size_t index_of(const std::string& id) const;  // npos when absent
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::string root_;
    std::vector<std::string> ids_;          // index -> id
    std::vector<std::size_t> parent_;       // index -> parent index (root: npos)
    std::vector<std::size_t> depth_;        // index -> depth, root = 1
    std::unordered_map<std::string, std::size_t> id_index_;
    std::unordered_map<std::string, std::vector<std::size_t>> lexicon_;
    bool identity_lexicon_ = true;
};

}  // namespace imgqa
