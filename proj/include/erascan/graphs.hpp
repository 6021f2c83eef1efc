// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <erascan/classify_batch.hpp>
#include <erascan/detectors.hpp>
#include <erascan/statedb.hpp>

namespace erascan {

enum class EdgeKind : std::uint8_t {
    Call,
    CallCode,
    DelegateCall,
    StaticCall,
    Probe,     // concrete operand of BALANCE / EXTCODESIZE / EXTCODECOPY
    Creation,
    Trigger,   // external sender -> contract that created an erasable account
};

std::string_view to_string(EdgeKind kind) noexcept;
std::optional<EdgeKind> parse_edge_kind(std::string_view name) noexcept;
EdgeKind edge_kind_for_call(std::uint8_t call_opcode) noexcept;
bool is_interaction(EdgeKind kind) noexcept;

struct NodeAttrs {
    std::optional<Label> category;  // primary label if erasable
    Wei balance = 0;
    bool removed = false;
    bool is_contract = false;
    std::size_t erasable_created = 0;   // creation edges out of this node
    std::size_t total_created = 0;      // all creations by this address in the tx store
    bool dangling_creation = false;     // erasable account whose creation tx is unknown

    bool operator==(const NodeAttrs&) const = default;
};

struct Edge {
    Address from;
    Address to;
    EdgeKind kind = EdgeKind::Call;
    std::size_t multiplicity = 1;

    bool operator==(const Edge&) const = default;
};

class AccountGraph {
  public:
    NodeAttrs& add_node(const Address& address);
    /// Adds `count` to the multiplicity of (from, to, kind); creates endpoints.
    void add_edge(const Address& from, const Address& to, EdgeKind kind, std::size_t count = 1);
    /// Associative and commutative: attributes are combined field-wise.
    void merge(const AccountGraph& other);

    [[nodiscard]] bool contains(const Address& a) const { return nodes_.contains(a); }
    [[nodiscard]] const NodeAttrs& node(const Address& a) const { return nodes_.at(a); }
    [[nodiscard]] const std::map<Address, NodeAttrs>& nodes() const noexcept { return nodes_; }
    /// Sorted by (from, to, kind).
    [[nodiscard]] std::vector<Edge> edges() const;
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
    [[nodiscard]] std::size_t edge_count(EdgeKind kind) const;

    /// Distinct neighbours over interaction edges (calls and probes).
    [[nodiscard]] std::size_t interaction_in_degree(const Address& a) const;
    [[nodiscard]] std::size_t interaction_out_degree(const Address& a) const;

    std::vector<std::string> warnings;
    std::size_t self_calls = 0;

    bool operator==(const AccountGraph&) const = default;

  private:
    std::map<Address, NodeAttrs> nodes_;
    std::map<std::tuple<Address, Address, EdgeKind>, std::size_t> edges_;
};

struct GraphContext {
    const AccountStore* accounts = nullptr;
    std::set<Address> removed;
};

/// One node per analysed contract and per concrete target; one edge per
/// (caller, target, opcode) weighted by the number of distinct call sites.
AccountGraph build_call_graph(std::span<const Classification> classified,
                              std::span<const ContractInteractions> interactions, const GraphContext& context);

/// creator -> account for each erasable account, plus sender -> creator
/// trigger edges when the creator is a contract.
AccountGraph build_creation_graph(std::span<const Classification> classified, const AccountStore& accounts,
                                  const TxStore& txs);

struct GraphShape {
    enum class Kind { ManyToOne, OneToMany, Other };
    Kind kind = Kind::Other;
    Address node;
    std::size_t degree = 0;  // fan-in or fan-out

    bool operator==(const GraphShape&) const = default;
};

std::string_view to_string(GraphShape::Kind kind) noexcept;

/// Throws std::invalid_argument if `node` is not in the graph.
GraphShape classify_shape(const AccountGraph& graph, const Address& node);

struct DotOptions {
    std::string graph_name = "accounts";
    std::size_t label_bytes = 3;
};

std::string to_dot(const AccountGraph& graph, const DotOptions& options = {});
void export_dot(const AccountGraph& graph, const std::filesystem::path& path, const DotOptions& options = {});

/// Tab-separated "from to kind multiplicity", one edge per line.
std::string to_edge_list(const AccountGraph& graph);
void export_edge_list(const AccountGraph& graph, const std::filesystem::path& path);

}  // namespace erascan
