#include "kgqa/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "kgqa/errors.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

using ordered_json = nlohmann::ordered_json;

bool operator==(const TypedEdge& a, const TypedEdge& b) {
    return a.subject_id == b.subject_id && a.predicate == b.predicate &&
           a.object_id == b.object_id && a.provenance == b.provenance;
}

static std::string edge_key(const TypedEdge& e) {
    std::string k;
    k.reserve(e.subject_id.size() + e.predicate.size() + e.object_id.size() + 2);
    k += e.subject_id;
    k += '\x1f';
    k += e.predicate;
    k += '\x1f';
    k += e.object_id;
    return k;
}

std::string KnowledgeGraph::identity_key(std::string_view name, std::string_view node_type) {
    std::string k = casefold(trim(name));
    k += '\x1f';
    k += trim(node_type);
    return k;
}

std::string KnowledgeGraph::node_id_for(std::string_view name, std::string_view node_type) {
    return "n" + to_hex16(fnv1a64(identity_key(name, node_type)));
}

void KnowledgeGraph::validate_embedding(const Embedding& e) const {
    if (e.empty()) throw ValidationError("embedding must not be empty");
    for (double v : e) {
        if (!std::isfinite(v)) throw ValidationError("embedding contains a non-finite value");
    }
    if (dim_ && e.size() != *dim_) {
        throw ValidationError("embedding dimension " + std::to_string(e.size()) +
                              " does not match graph dimension " + std::to_string(*dim_));
    }
}

void KnowledgeGraph::adopt_dim(std::size_t dim) {
    if (!dim_) dim_ = dim;
}

const EntityNode& KnowledgeGraph::upsert_node(std::string_view name, std::string_view node_type,
                                              std::optional<Embedding> embedding) {
    const std::string_view tname = trim(name);
    const std::string_view ttype = trim(node_type);
    if (tname.empty()) throw ValidationError("node name must be non-empty");
    if (ttype.empty()) throw ValidationError("node type must be non-empty");

    const std::string key = identity_key(tname, ttype);
    if (auto it = by_key_.find(key); it != by_key_.end()) return nodes_[it->second];

    EntityNode node;
    node.id = node_id_for(tname, ttype);
    node.name = std::string(tname);
    node.node_type = std::string(ttype);
    if (embedding) {
        validate_embedding(*embedding);
        adopt_dim(embedding->size());
        node.embedding = std::move(embedding);
    }

    const std::size_t idx = nodes_.size();
    by_id_.emplace(node.id, idx);
    by_key_.emplace(key, idx);
    auto& rec = types_[node.node_type];
    rec.type_name = node.node_type;
    rec.member_count += 1;
    nodes_.push_back(std::move(node));
    return nodes_[idx];
}

bool KnowledgeGraph::insert_edge(TypedEdge edge) {
    if (trim(edge.predicate).empty()) throw ValidationError("edge predicate must be non-empty");
    if (!has_node(edge.subject_id))
        throw IntegrityError("edge references unknown subject node '" + edge.subject_id + "'");
    if (!has_node(edge.object_id))
        throw IntegrityError("edge references unknown object node '" + edge.object_id + "'");

    const std::string key = edge_key(edge);
    if (!edge_keys_.insert(key).second) return false;

    const std::size_t idx = edges_.size();
    adjacency_[edge.subject_id].push_back(idx);
    if (edge.object_id != edge.subject_id) adjacency_[edge.object_id].push_back(idx);
    edges_.push_back(std::move(edge));
    return true;
}

std::vector<TypedEdge> KnowledgeGraph::neighborhood(const std::string& node_id) const {
    if (!has_node(node_id)) throw NotFoundError("unknown node id '" + node_id + "'");
    std::vector<TypedEdge> out;
    if (auto it = adjacency_.find(node_id); it != adjacency_.end()) {
        out.reserve(it->second.size());
        for (std::size_t idx : it->second) out.push_back(edges_[idx]);
    }
    return out;
}

const EntityNode* KnowledgeGraph::find_node(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &nodes_[it->second];
}

const EntityNode* KnowledgeGraph::find_by_name_type(std::string_view name,
                                                    std::string_view node_type) const {
    auto it = by_key_.find(identity_key(name, node_type));
    return it == by_key_.end() ? nullptr : &nodes_[it->second];
}

void KnowledgeGraph::set_node_embedding(const std::string& id, Embedding embedding) {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw NotFoundError("unknown node id '" + id + "'");
    validate_embedding(embedding);
    adopt_dim(embedding.size());
    nodes_[it->second].embedding = std::move(embedding);
}

void KnowledgeGraph::set_type_embedding(const std::string& type_name, Embedding embedding) {
    auto it = types_.find(type_name);
    if (it == types_.end()) throw NotFoundError("unknown node type '" + type_name + "'");
    validate_embedding(embedding);
    adopt_dim(embedding.size());
    it->second.embedding = std::move(embedding);
}

std::vector<NodeTypeRecord> KnowledgeGraph::type_records() const {
    std::vector<NodeTypeRecord> out;
    out.reserve(types_.size());
    for (const auto& [_, rec] : types_) out.push_back(rec);
    return out;
}

const NodeTypeRecord* KnowledgeGraph::find_type(const std::string& type_name) const {
    auto it = types_.find(type_name);
    return it == types_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// persistence

static ordered_json embedding_json(const Embedding& e) {
    ordered_json arr = ordered_json::array();
    for (double v : e) arr.push_back(v);
    return arr;
}

void KnowledgeGraph::save(std::ostream& out) const {
    ordered_json header;
    header["format"] = "kgqa-graph";
    header["version"] = 1;
    if (dim_)
        header["embedding_dim"] = *dim_;
    else
        header["embedding_dim"] = nullptr;
    out << header.dump() << '\n';

    for (const auto& node : nodes_) {
        ordered_json j;
        j["kind"] = "node";
        j["id"] = node.id;
        j["name"] = node.name;
        j["node_type"] = node.node_type;
        if (node.embedding) j["embedding"] = embedding_json(*node.embedding);
        out << j.dump() << '\n';
    }
    for (const auto& [_, rec] : types_) {
        ordered_json j;
        j["kind"] = "type";
        j["type_name"] = rec.type_name;
        j["member_count"] = rec.member_count;
        if (rec.embedding) j["embedding"] = embedding_json(*rec.embedding);
        out << j.dump() << '\n';
    }
    for (const auto& edge : edges_) {
        ordered_json j;
        j["kind"] = "edge";
        j["subject_id"] = edge.subject_id;
        j["predicate"] = edge.predicate;
        j["object_id"] = edge.object_id;
        if (edge.provenance) j["provenance"] = *edge.provenance;
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("failed while writing graph stream");
}

void KnowledgeGraph::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    save(out);
}

static Embedding parse_embedding(const nlohmann::json& arr, std::size_t line) {
    if (!arr.is_array()) throw ParseError("embedding must be a JSON array", line);
    Embedding e;
    e.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw ParseError("embedding entries must be finite numbers", line);
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ParseError("embedding entries must be finite numbers", line);
        e.push_back(d);
    }
    return e;
}

static std::string require_string(const nlohmann::json& j, const char* field, std::size_t line) {
    if (!j.contains(field) || !j.at(field).is_string())
        throw ParseError(std::string("missing or non-string field '") + field + "'", line);
    return j.at(field).get<std::string>();
}

void KnowledgeGraph::insert_node_raw(EntityNode node, std::size_t source_line) {
    if (by_id_.count(node.id))
        throw ParseError("duplicate node id '" + node.id + "'", source_line);
    const std::string key = identity_key(node.name, node.node_type);
    if (by_key_.count(key))
        throw ParseError("duplicate node identity (name '" + node.name + "', type '" +
                             node.node_type + "')",
                         source_line);
    const std::size_t idx = nodes_.size();
    by_id_.emplace(node.id, idx);
    by_key_.emplace(key, idx);
    auto& rec = types_[node.node_type];
    rec.type_name = node.node_type;
    rec.member_count += 1;
    nodes_.push_back(std::move(node));
}

KnowledgeGraph KnowledgeGraph::load(std::istream& in) {
    KnowledgeGraph g;
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty graph stream: missing header", 1);
    ++lineno;
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid header JSON: ") + e.what(), lineno);
    }
    if (!header.is_object() || header.value("format", "") != "kgqa-graph")
        throw ParseError("not a kgqa-graph file", lineno);
    if (header.value("version", 0) != 1)
        throw ParseError("unsupported graph file version", lineno);
    if (header.contains("embedding_dim") && !header.at("embedding_dim").is_null()) {
        if (!header.at("embedding_dim").is_number_unsigned() ||
            header.at("embedding_dim").get<std::size_t>() == 0)
            throw ParseError("embedding_dim must be a positive integer or null", lineno);
        g.dim_ = header.at("embedding_dim").get<std::size_t>();
    }

    // type records are validated against node contents after the full pass
    std::vector<std::pair<NodeTypeRecord, std::size_t>> file_types;

    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid JSON record: ") + e.what(), lineno);
        }
        if (!j.is_object()) throw ParseError("record must be a JSON object", lineno);
        const std::string kind = j.value("kind", "");

        if (kind == "node") {
            EntityNode node;
            node.id = require_string(j, "id", lineno);
            node.name = require_string(j, "name", lineno);
            node.node_type = require_string(j, "node_type", lineno);
            if (node.id.empty()) throw ParseError("node id must be non-empty", lineno);
            if (trim(node.name).empty() || trim(node.node_type).empty())
                throw ParseError("node name and node_type must be non-empty", lineno);
            if (j.contains("embedding") && !j.at("embedding").is_null()) {
                Embedding e = parse_embedding(j.at("embedding"), lineno);
                if (g.dim_ && e.size() != *g.dim_)
                    throw ValidationError("line " + std::to_string(lineno) +
                                          ": embedding dimension " + std::to_string(e.size()) +
                                          " does not match header dimension " +
                                          std::to_string(*g.dim_));
                if (!g.dim_)
                    throw ValidationError("line " + std::to_string(lineno) +
                                          ": embedding present but header embedding_dim is null");
                node.embedding = std::move(e);
            }
            g.insert_node_raw(std::move(node), lineno);
        } else if (kind == "edge") {
            TypedEdge edge;
            edge.subject_id = require_string(j, "subject_id", lineno);
            edge.predicate = require_string(j, "predicate", lineno);
            edge.object_id = require_string(j, "object_id", lineno);
            if (j.contains("provenance") && !j.at("provenance").is_null())
                edge.provenance = j.at("provenance").get<std::string>();
            if (!g.has_node(edge.subject_id))
                throw ParseError("edge references node '" + edge.subject_id +
                                     "' which has not been defined yet",
                                 lineno);
            if (!g.has_node(edge.object_id))
                throw ParseError("edge references node '" + edge.object_id +
                                     "' which has not been defined yet",
                                 lineno);
            if (trim(edge.predicate).empty())
                throw ParseError("edge predicate must be non-empty", lineno);
            if (!g.edge_keys_.insert(edge_key(edge)).second)
                throw ParseError("duplicate edge triple", lineno);
            const std::size_t idx = g.edges_.size();
            g.adjacency_[edge.subject_id].push_back(idx);
            if (edge.object_id != edge.subject_id) g.adjacency_[edge.object_id].push_back(idx);
            g.edges_.push_back(std::move(edge));
        } else if (kind == "type") {
            NodeTypeRecord rec;
            rec.type_name = require_string(j, "type_name", lineno);
            if (!j.contains("member_count") || !j.at("member_count").is_number_unsigned())
                throw ParseError("type record needs a non-negative member_count", lineno);
            rec.member_count = j.at("member_count").get<std::size_t>();
            if (j.contains("embedding") && !j.at("embedding").is_null()) {
                Embedding e = parse_embedding(j.at("embedding"), lineno);
                if (!g.dim_ || e.size() != *g.dim_)
                    throw ValidationError("line " + std::to_string(lineno) +
                                          ": type embedding dimension does not match header");
                rec.embedding = std::move(e);
            }
            file_types.emplace_back(std::move(rec), lineno);
        } else {
            throw ParseError("unknown record kind '" + kind + "'", lineno);
        }
    }

    // reconcile type records with node contents
    for (auto& [rec, rec_line] : file_types) {
        auto it = g.types_.find(rec.type_name);
        if (it == g.types_.end())
            throw ParseError("type record '" + rec.type_name + "' has no member nodes", rec_line);
        if (it->second.member_count != rec.member_count)
            throw ParseError("type record '" + rec.type_name + "' claims " +
                                 std::to_string(rec.member_count) + " members but " +
                                 std::to_string(it->second.member_count) + " nodes carry it",
                             rec_line);
        it->second.embedding = std::move(rec.embedding);
    }

    return g;
}

KnowledgeGraph KnowledgeGraph::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return load(in);
}

// ---------------------------------------------------------------------------
// structural equality

static bool node_less(const EntityNode& a, const EntityNode& b) { return a.id < b.id; }

static bool edge_less(const TypedEdge& a, const TypedEdge& b) {
    return std::tie(a.subject_id, a.predicate, a.object_id) <
           std::tie(b.subject_id, b.predicate, b.object_id);
}

bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    if (a.dim_ != b.dim_) return false;
    if (a.nodes_.size() != b.nodes_.size() || a.edges_.size() != b.edges_.size()) return false;

    auto an = a.nodes_;
    auto bn = b.nodes_;
    std::sort(an.begin(), an.end(), node_less);
    std::sort(bn.begin(), bn.end(), node_less);
    for (std::size_t i = 0; i < an.size(); ++i) {
        if (an[i].id != bn[i].id || an[i].name != bn[i].name ||
            an[i].node_type != bn[i].node_type || an[i].embedding != bn[i].embedding)
            return false;
    }

    auto ae = a.edges_;
    auto be = b.edges_;
    std::sort(ae.begin(), ae.end(), edge_less);
    std::sort(be.begin(), be.end(), edge_less);
    for (std::size_t i = 0; i < ae.size(); ++i) {
        if (!(ae[i] == be[i])) return false;
    }

    if (a.types_.size() != b.types_.size()) return false;
    for (auto ita = a.types_.begin(), itb = b.types_.begin(); ita != a.types_.end();
         ++ita, ++itb) {
        if (ita->first != itb->first || ita->second.member_count != itb->second.member_count ||
            ita->second.embedding != itb->second.embedding)
            return false;
    }
    return true;
}

}  // namespace kgqa
