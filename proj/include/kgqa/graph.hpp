#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kgqa {

using Embedding = std::vector<double>;

struct EntityNode {
    std::string id;
    std::string name;
    std::string node_type;
    std::optional<Embedding> embedding;
};

struct TypedEdge {
    std::string subject_id;
    std::string predicate;
    std::string object_id;
    std::optional<std::string> provenance;  // qa_id the edge was extracted from
};

bool operator==(const TypedEdge& a, const TypedEdge& b);

struct NodeTypeRecord {
    std::string type_name;
    std::size_t member_count = 0;
    std::optional<Embedding> embedding;
};

// In-memory property graph. Node identity is the case-insensitive
// (name, node_type) pair; node ids are derived from that key, so two graphs
// built from the same facts agree on ids regardless of insertion order.
//
// Instances are plain values: safe to move between threads, and safe for any
// number of concurrent readers as long as no writer is active.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    // Returns the existing node when (name, node_type) is already present;
    // an embedding passed for an existing node is ignored.
    const EntityNode& upsert_node(std::string_view name, std::string_view node_type,
                                  std::optional<Embedding> embedding = std::nullopt);

    // Idempotent on the full (subject, predicate, object) triple; returns
    // false when the edge was already present. Throws IntegrityError when an
    // endpoint does not resolve.
    bool insert_edge(TypedEdge edge);

    // Every edge where the node is subject or object (no transitive hops).
    std::vector<TypedEdge> neighborhood(const std::string& node_id) const;

    const EntityNode* find_node(const std::string& id) const;
    const EntityNode* find_by_name_type(std::string_view name, std::string_view node_type) const;
    bool has_node(const std::string& id) const { return by_id_.count(id) > 0; }

    void set_node_embedding(const std::string& id, Embedding embedding);
    void set_type_embedding(const std::string& type_name, Embedding embedding);

    const std::vector<EntityNode>& nodes() const { return nodes_; }
    const std::vector<TypedEdge>& edges() const { return edges_; }

    // Ordered by type_name. member_count is maintained incrementally.
    std::vector<NodeTypeRecord> type_records() const;
    const NodeTypeRecord* find_type(const std::string& type_name) const;

    std::optional<std::size_t> embedding_dim() const { return dim_; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t type_count() const { return types_.size(); }

    // JSON Lines persistence. The first line is a header object
    //   {"format":"kgqa-graph","version":1,"embedding_dim":<int|null>}
    // followed by one {"kind":"node"|"type"|"edge",...} object per line.
    // Nodes are written before any edge that references them.
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static KnowledgeGraph load(std::istream& in);
    static KnowledgeGraph load_file(const std::string& path);

    // Derives the content id used for a (name, node_type) pair.
    static std::string node_id_for(std::string_view name, std::string_view node_type);

private:
    friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b);

    void validate_embedding(const Embedding& e) const;
    void adopt_dim(std::size_t dim);
    void insert_node_raw(EntityNode node, std::size_t source_line);
    static std::string identity_key(std::string_view name, std::string_view node_type);

    std::vector<EntityNode> nodes_;
    std::vector<TypedEdge> edges_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_map<std::string, std::size_t> by_key_;
    std::unordered_set<std::string> edge_keys_;
    std::unordered_map<std::string, std::vector<std::size_t>> adjacency_;
    std::map<std::string, NodeTypeRecord> types_;
    std::optional<std::size_t> dim_;
};

// Structural equality: same dimension, node set, edge set, and type records,
// with embeddings compared bit-exactly.
bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b);
inline bool operator!=(const KnowledgeGraph& a, const KnowledgeGraph& b) { return !(a == b); }

}  // namespace kgqa
