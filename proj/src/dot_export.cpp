// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/graphs.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace erascan {

namespace {

std::string short_label(const Address& a, std::size_t bytes) {
    const std::string hex = a.hex();
    return hex.substr(0, 2 + 2 * std::min(bytes, Address::size()));
}

// Removed accounts red; erasable accounts grey, deep grey while they still hold ETH.
std::string_view fill_color(const NodeAttrs& n) {
    if (n.removed) return "red";
    if (n.category) return n.balance != 0 ? "gray40" : "gray80";
    return "white";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string to_dot(const AccountGraph& graph, const DotOptions& options) {
    std::ostringstream os;
    os << "digraph \"" << options.graph_name << "\" {\n";
    os << "  graph [rankdir=LR];\n";
    os << "  node [shape=ellipse, style=filled, fontname=\"Helvetica\"];\n";
    for (const auto& [addr, n] : graph.nodes()) {
        os << "  \"" << addr.hex() << "\" [label=\"" << short_label(addr, options.label_bytes) << "\", fillcolor=\""
           << fill_color(n) << "\"";
        if (n.category) os << ", tooltip=\"" << to_string(*n.category) << "\"";
        if (n.category && n.balance != 0 && !n.removed) os << ", fontcolor=\"white\"";
        if (n.is_contract) os << ", shape=box";
        if (n.dangling_creation) os << ", peripheries=2";
        os << "];\n";
    }
    for (const auto& e : graph.edges()) {
        os << "  \"" << e.from.hex() << "\" -> \"" << e.to.hex() << "\" [label=\"" << to_string(e.kind);
        if (e.multiplicity > 1) os << " x" << e.multiplicity;
        os << "\"";
        if (e.kind == EdgeKind::Probe) os << ", style=dashed";
        if (e.kind == EdgeKind::Trigger) os << ", style=dotted";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

void export_dot(const AccountGraph& graph, const std::filesystem::path& path, const DotOptions& options) {
    write_text(path, to_dot(graph, options));
}

std::string to_edge_list(const AccountGraph& graph) {
    std::ostringstream os;
    for (const auto& e : graph.edges()) {
        os << e.from.hex() << '\t' << e.to.hex() << '\t' << to_string(e.kind) << '\t' << e.multiplicity << '\n';
    }
    return os.str();
}

void export_edge_list(const AccountGraph& graph, const std::filesystem::path& path) {
    write_text(path, to_edge_list(graph));
}

}  // namespace erascan
