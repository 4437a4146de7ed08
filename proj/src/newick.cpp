#include "tomo/newick.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "tomo/error.hpp"

namespace tomo {

namespace {

void write_subtree(const RoutingTree& t, int node, int from, std::ostringstream& os,
                   const std::map<Edge, double>* weights) {
    if (!t.is_leaf(node)) {
        os << '(';
        bool first = true;
        for (int nb : t.neighbors(node)) {
            if (nb == from) continue;
            if (!first) os << ',';
            first = false;
            write_subtree(t, nb, node, os, weights);
        }
        os << ')';
    } else {
        os << node;
    }
    if (weights) {
        auto it = weights->find(Edge(node, from));
        if (it == weights->end())
            throw ValidationError("missing weight for edge (" + std::to_string(from) + "," +
                                  std::to_string(node) + ")");
        os << ':' << it->second;
    }
}

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    // raw parse tree: leaf label or children
    struct Node {
        std::optional<int> label;
        std::vector<Node> children;
        std::optional<double> weight;
    };

    char peek() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size()) throw ValidationError("unexpected end of Newick input");
        return s[pos];
    }

    Node parse_node() {
        Node n;
        if (peek() == '(') {
            ++pos;
            n.children.push_back(parse_node());
            while (peek() == ',') {
                ++pos;
                n.children.push_back(parse_node());
            }
            if (peek() != ')') throw ValidationError("expected ')' in Newick input");
            ++pos;
            // optional internal label (ignored unless it is the root leaf id)
            if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '-'))
                n.label = parse_int();
        } else {
            n.label = parse_int();
        }
        if (pos < s.size() && peek() == ':') {
            ++pos;
            n.weight = parse_double();
        }
        return n;
    }

    int parse_int() {
        std::size_t start = pos;
        if (peek() == '-') ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw ValidationError("expected integer label in Newick input");
        return std::stoi(s.substr(start, pos - start));
    }

    double parse_double() {
        std::size_t start = pos;
        peek();
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
                s[pos] == '-' || s[pos] == '+' || s[pos] == 'e' || s[pos] == 'E'))
            ++pos;
        if (pos == start) throw ValidationError("expected branch length in Newick input");
        return std::stod(s.substr(start, pos - start));
    }
};

} // namespace

std::string to_newick(const RoutingTree& tree, const std::map<Edge, double>* weights) {
    std::ostringstream os;
    os.precision(17);
    int root = RoutingTree::kRoot;
    int top = tree.neighbors(root).front();
    os << '(';
    write_subtree(tree, top, root, os, weights);
    os << ')' << root << ';';
    return os.str();
}

NewickTree from_newick(const std::string& text) {
    Parser p{text};
    Parser::Node root = p.parse_node();
    while (p.pos < text.size() &&
           (text[p.pos] == ';' || std::isspace(static_cast<unsigned char>(text[p.pos]))))
        ++p.pos;
    if (p.pos != text.size()) throw ValidationError("trailing characters in Newick input");

    // The outer node must be the source leaf 0 with a single child.
    if (root.children.size() != 1 || !root.label || *root.label != RoutingTree::kRoot)
        throw ValidationError("Newick tree must be rooted at leaf 0 with one child");

    // First pass: find max leaf id so internal ids do not collide.
    int max_label = 0;
    bool any_weight = false, all_weights = true;
    auto scan = [&](auto&& self, const Parser::Node& n) -> void {
        if (n.children.empty()) {
            if (!n.label) throw ValidationError("leaf without label in Newick input");
            max_label = std::max(max_label, *n.label);
        }
        if (&n != &root) {
            any_weight |= n.weight.has_value();
            all_weights &= n.weight.has_value();
        }
        for (const auto& c : n.children) self(self, c);
    };
    scan(scan, root);
    if (any_weight && !all_weights)
        throw ValidationError("Newick input mixes weighted and unweighted branches");

    std::vector<Edge> edges;
    std::map<Edge, double> weights;
    int next_internal = max_label + 1;
    auto build = [&](auto&& self, const Parser::Node& n, int parent_id) -> void {
        int id;
        if (n.children.empty()) {
            id = *n.label;
        } else {
            id = next_internal++;
        }
        edges.emplace_back(parent_id, id);
        if (n.weight) weights[Edge(parent_id, id)] = *n.weight;
        for (const auto& c : n.children) self(self, c, id);
    };
    build(build, root.children[0], RoutingTree::kRoot);

    return NewickTree{RoutingTree::from_edges(edges),
                      any_weight ? std::move(weights) : std::map<Edge, double>{}, any_weight};
}

} // namespace tomo
