// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/graphs.hpp>

#include <algorithm>
#include <stdexcept>

namespace erascan {

namespace op = evm::op;

namespace {

constexpr std::array<std::string_view, 7> kEdgeKindNames = {
    "CALL", "CALLCODE", "DELEGATECALL", "STATICCALL", "probe", "creation", "trigger",
};

}  // namespace

std::string_view to_string(EdgeKind kind) noexcept { return kEdgeKindNames[static_cast<std::size_t>(kind)]; }

std::optional<EdgeKind> parse_edge_kind(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kEdgeKindNames.size(); ++i) {
        if (kEdgeKindNames[i] == name) return static_cast<EdgeKind>(i);
    }
    return std::nullopt;
}

EdgeKind edge_kind_for_call(std::uint8_t call_opcode) noexcept {
    switch (call_opcode) {
        case op::CALLCODE: return EdgeKind::CallCode;
        case op::DELEGATECALL: return EdgeKind::DelegateCall;
        case op::STATICCALL: return EdgeKind::StaticCall;
        default: return EdgeKind::Call;
    }
}

bool is_interaction(EdgeKind kind) noexcept {
    return kind != EdgeKind::Creation && kind != EdgeKind::Trigger;
}

std::string_view to_string(GraphShape::Kind kind) noexcept {
    switch (kind) {
        case GraphShape::Kind::ManyToOne: return "ManyToOne";
        case GraphShape::Kind::OneToMany: return "OneToMany";
        case GraphShape::Kind::Other: return "Other";
    }
    return "?";
}

NodeAttrs& AccountGraph::add_node(const Address& address) { return nodes_[address]; }

void AccountGraph::add_edge(const Address& from, const Address& to, EdgeKind kind, std::size_t count) {
    if (count == 0) return;
    add_node(from);
    add_node(to);
    auto [it, inserted] = edges_.try_emplace({from, to, kind}, 0);
    it->second += count;
    if (inserted && kind == EdgeKind::Creation) {
        ++nodes_[from].erasable_created;
    }
}

void AccountGraph::merge(const AccountGraph& other) {
    for (const auto& [addr, attrs] : other.nodes_) {
        NodeAttrs& mine = nodes_[addr];
        if (!mine.category || (attrs.category && *attrs.category < *mine.category)) {
            if (attrs.category) mine.category = attrs.category;
        }
        mine.balance = std::max(mine.balance, attrs.balance);
        mine.removed = mine.removed || attrs.removed;
        mine.is_contract = mine.is_contract || attrs.is_contract;
        mine.total_created = std::max(mine.total_created, attrs.total_created);
        mine.dangling_creation = mine.dangling_creation || attrs.dangling_creation;
    }
    for (const auto& [key, m] : other.edges_) {
        edges_[key] += m;
    }
    for (auto& [addr, attrs] : nodes_) attrs.erasable_created = 0;
    for (const auto& [key, m] : edges_) {
        if (std::get<2>(key) == EdgeKind::Creation) ++nodes_[std::get<0>(key)].erasable_created;
    }
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
    std::sort(warnings.begin(), warnings.end());
    warnings.erase(std::unique(warnings.begin(), warnings.end()), warnings.end());
    self_calls += other.self_calls;
}

std::vector<Edge> AccountGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [key, m] : edges_) {
        out.push_back(Edge{std::get<0>(key), std::get<1>(key), std::get<2>(key), m});
    }
    return out;
}

std::size_t AccountGraph::edge_count(EdgeKind kind) const {
    return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(),
                                                  [kind](const auto& e) { return std::get<2>(e.first) == kind; }));
}

std::size_t AccountGraph::interaction_in_degree(const Address& a) const {
    std::set<Address> sources;
    for (const auto& [key, m] : edges_) {
        if (std::get<1>(key) == a && is_interaction(std::get<2>(key)) && std::get<0>(key) != a) {
            sources.insert(std::get<0>(key));
        }
    }
    return sources.size();
}

std::size_t AccountGraph::interaction_out_degree(const Address& a) const {
    std::set<Address> targets;
    // edges_ is ordered by source, so this range holds every edge leaving `a`.
    for (auto it = edges_.lower_bound({a, Address{}, EdgeKind::Call}); it != edges_.end(); ++it) {
        const auto& [from, to, kind] = it->first;
        if (from != a) break;
        if (is_interaction(kind) && to != a) targets.insert(to);
    }
    return targets.size();
}

namespace {

void describe_node(NodeAttrs& attrs, const Address& a, const std::map<Address, const Classification*>& labels,
                   const AccountStore* accounts, const std::set<Address>& removed) {
    if (auto it = labels.find(a); it != labels.end() && it->second->primary) {
        attrs.category = it->second->primary;
    }
    if (accounts != nullptr) {
        if (const AccountState* s = accounts->find(a)) {
            attrs.balance = s->balance;
            attrs.is_contract = !s->code.empty();
        }
    }
    attrs.removed = removed.contains(a);
}

std::map<Address, const Classification*> index_labels(std::span<const Classification> classified) {
    std::map<Address, const Classification*> out;
    for (const auto& c : classified) out.emplace(c.address, &c);
    return out;
}

}  // namespace

AccountGraph build_call_graph(std::span<const Classification> classified,
                              std::span<const ContractInteractions> interactions, const GraphContext& context) {
    const auto labels = index_labels(classified);
    AccountGraph g;
    for (const auto& ci : interactions) {
        g.add_node(ci.contract);
        for (const auto& ev : ci.calls) {
            if (!ev.target) continue;
            if (*ev.target == ci.contract) {
                ++g.self_calls;
                continue;
            }
            g.add_edge(ci.contract, *ev.target, edge_kind_for_call(ev.call_opcode));
        }
        for (const auto& ev : ci.probes) {
            if (ev.target == ci.contract) {
                ++g.self_calls;
                continue;
            }
            g.add_edge(ci.contract, ev.target, EdgeKind::Probe);
        }
        if (!ci.complete) {
            g.warnings.push_back("symbolic execution of " + ci.contract.hex() + " hit its budget; edges may be partial");
        }
    }
    for (const auto& [addr, attrs] : g.nodes()) {
        describe_node(g.add_node(addr), addr, labels, context.accounts, context.removed);
    }
    return g;
}

AccountGraph build_creation_graph(std::span<const Classification> classified, const AccountStore& accounts,
                                  const TxStore& txs) {
    const auto labels = index_labels(classified);
    AccountGraph g;
    std::set<std::tuple<Address, Address, Hash32>> triggers;

    for (const auto& c : classified) {
        if (!c.erasable()) continue;
        g.add_node(c.address);
        TxRef creation = nullptr;
        TxRef first_incoming = nullptr;
        for (TxRef r : txs.related(c.address)) {
            if (r->created_address == c.address) {
                creation = r;
                break;
            }
            if (first_incoming == nullptr && r->to == c.address) first_incoming = r;
        }
        // An EOA comes into existence with the first value transfer it receives.
        const AccountState* state = accounts.find(c.address);
        if (creation == nullptr && state != nullptr && state->code.empty()) creation = first_incoming;
        if (creation == nullptr) {
            g.add_node(c.address).dangling_creation = true;
            g.warnings.push_back("no creation transaction for " + c.address.hex());
            continue;
        }
        const Address creator = creation->from;
        g.add_edge(creator, c.address, EdgeKind::Creation);

        const AccountState* creator_state = accounts.find(creator);
        const bool creator_is_contract =
            creation->kind == TxKind::Internal || (creator_state != nullptr && !creator_state->code.empty());
        if (!creator_is_contract) continue;
        g.add_node(creator).is_contract = true;

        TxRef external = nullptr;
        for (TxRef r : txs.by_hash(creation->hash)) {
            if (r->kind == TxKind::External) {
                external = r;
                break;
            }
        }
        if (external == nullptr) {
            g.warnings.push_back("no external transaction drove creation of " + c.address.hex());
            continue;
        }
        if (triggers.emplace(external->from, creator, creation->hash).second) {
            g.add_edge(external->from, creator, EdgeKind::Trigger);
        }
    }

    // Does each creator also create other (not necessarily erasable) accounts?
    for (const auto& [addr, attrs] : g.nodes()) {
        NodeAttrs& n = g.add_node(addr);
        if (n.erasable_created == 0) continue;
        for (TxRef r : txs.related(addr)) {
            if (r->from == addr && r->created_address) ++n.total_created;
        }
    }
    for (const auto& [addr, attrs] : g.nodes()) {
        const bool contract = attrs.is_contract;
        describe_node(g.add_node(addr), addr, labels, &accounts, {});
        if (contract) g.add_node(addr).is_contract = true;
    }
    std::sort(g.warnings.begin(), g.warnings.end());
    return g;
}

GraphShape classify_shape(const AccountGraph& graph, const Address& node) {
    if (!graph.contains(node)) throw std::invalid_argument("node not in graph: " + node.hex());
    const std::size_t in = graph.interaction_in_degree(node);
    const std::size_t out = graph.interaction_out_degree(node);
    if (in >= 2 && out == 0) return {GraphShape::Kind::ManyToOne, node, in};
    if (out >= 2 && in == 0) return {GraphShape::Kind::OneToMany, node, out};
    return {GraphShape::Kind::Other, node, 0};
}

}  // namespace erascan
