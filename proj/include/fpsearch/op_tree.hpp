#pragma once

// Algebraic operator trees: U leaves, source/target selective-phase leaves,
// sequences (applied right to left, as written), and symbolic adjoints.
// The phase-shift search recursion U_{i+1} = U_i Rs U_i† Rt U_i is built as a
// shared-structure tree and applied lazily, leaf by leaf; no operator matrix
// is ever materialized.

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpsearch/state.hpp"

namespace fpsearch {

inline constexpr int kMaxRecursionLevel = 12;  // flattened size 2*3^12 - 1

class OpTree;
using OpTreePtr = std::shared_ptr<const OpTree>;

class OpTree {
  public:
    enum class Kind { LeafU, LeafPhaseSource, LeafPhaseTarget, Seq, Adjoint };

    static OpTreePtr leaf_u() { return std::shared_ptr<OpTree>(new OpTree(Kind::LeafU)); }

    static OpTreePtr phase_source(double theta) {
        auto node = std::shared_ptr<OpTree>(new OpTree(Kind::LeafPhaseSource));
        node->phi_ = theta;
        return node;
    }

    static OpTreePtr phase_target(double phi) {
        auto node = std::shared_ptr<OpTree>(new OpTree(Kind::LeafPhaseTarget));
        node->phi_ = phi;
        return node;
    }

    static OpTreePtr seq(std::vector<OpTreePtr> children) {
        if (children.empty()) throw std::invalid_argument("op tree: empty sequence");
        auto node = std::shared_ptr<OpTree>(new OpTree(Kind::Seq));
        node->children_ = std::move(children);
        return node;
    }

    static OpTreePtr adjoint_node(OpTreePtr child) {
        auto node = std::shared_ptr<OpTree>(new OpTree(Kind::Adjoint));
        node->children_.push_back(std::move(child));
        return node;
    }

    Kind kind() const { return kind_; }
    double phase() const { return phi_; }
    const std::vector<OpTreePtr>& children() const { return children_; }
    const OpTreePtr& child() const { return children_.front(); }

  private:
    explicit OpTree(Kind kind) : kind_(kind) {}

    Kind kind_;
    double phi_ = 0.0;
    std::vector<OpTreePtr> children_;
};

// Structural adjoint: sequences reverse with adjointed children, phase leaves
// negate, Adjoint(Adjoint(x)) collapses to x, and only Adjoint(LeafU) stays
// symbolic.
inline OpTreePtr adjoint(const OpTreePtr& tree) {
    switch (tree->kind()) {
        case OpTree::Kind::LeafU:
            return OpTree::adjoint_node(tree);
        case OpTree::Kind::LeafPhaseSource:
            return OpTree::phase_source(-tree->phase());
        case OpTree::Kind::LeafPhaseTarget:
            return OpTree::phase_target(-tree->phase());
        case OpTree::Kind::Adjoint:
            return tree->child();
        case OpTree::Kind::Seq: {
            std::vector<OpTreePtr> rev;
            rev.reserve(tree->children().size());
            for (auto it = tree->children().rbegin(); it != tree->children().rend(); ++it) rev.push_back(adjoint(*it));
            return OpTree::seq(std::move(rev));
        }
    }
    throw std::logic_error("op tree: unknown node kind");
}

// U_0 = U;  U_{i+1} = U_i Rs^theta U_i† Rt^phi U_i.
// theta = phi = pi/3 is the fixed-point search; theta = phi = pi gives one
// amplitude-amplification step at level 1.
inline OpTreePtr build_phase_search(int level, double theta = std::numbers::pi / 3.0,
                                    double phi = std::numbers::pi / 3.0) {
    if (level < 0) throw std::invalid_argument("phase search: negative level");
    if (level > kMaxRecursionLevel) {
        throw std::invalid_argument("phase search: level " + std::to_string(level) + " exceeds cap " +
                                    std::to_string(kMaxRecursionLevel));
    }
    OpTreePtr u = OpTree::leaf_u();
    for (int i = 0; i < level; ++i) {
        u = OpTree::seq({u, OpTree::phase_source(theta), adjoint(u), OpTree::phase_target(phi), u});
    }
    return u;
}

// U (Is U† It U)^eta, the amplitude-amplification sequence with eta queries.
inline OpTreePtr build_amplitude_amplification(int eta) {
    if (eta < 0) throw std::invalid_argument("amplitude amplification: negative repetition count");
    const double pi = std::numbers::pi;
    OpTreePtr u = OpTree::leaf_u();
    std::vector<OpTreePtr> parts{u};
    OpTreePtr q = OpTree::seq({OpTree::phase_source(pi), adjoint(u), OpTree::phase_target(pi), u});
    for (int i = 0; i < eta; ++i) parts.push_back(q);
    return OpTree::seq(std::move(parts));
}

struct QueryCount {
    long long queries = 0;
};

// q_i = (3^i - 1)/2, the solution of q_{i+1} = 3 q_i + 1, q_0 = 0.
inline QueryCount count_queries(int level) {
    if (level < 0) throw std::invalid_argument("count_queries: negative level");
    long long power = 1;
    for (int i = 0; i < level; ++i) power *= 3;
    return QueryCount{(power - 1) / 2};
}

namespace detail {

inline void apply_tree_node(const OpTreePtr& node, bool adj, const UnitarySpec& u, const PureState& source,
                            const TargetSet& target, PureState& work, long long& queries) {
    switch (node->kind()) {
        case OpTree::Kind::LeafU:
            apply_unitary_in_place(work, u, Subspace::Register, adj);
            return;
        case OpTree::Kind::LeafPhaseSource:
            apply_selective_phase_in_place(work, source, adj ? -node->phase() : node->phase());
            return;
        case OpTree::Kind::LeafPhaseTarget:
            apply_selective_phase_in_place(work, target, adj ? -node->phase() : node->phase());
            ++queries;  // every target-selective phase is one oracle query
            return;
        case OpTree::Kind::Adjoint:
            apply_tree_node(node->child(), !adj, u, source, target, work, queries);
            return;
        case OpTree::Kind::Seq:
            if (adj) {
                for (const auto& c : node->children()) apply_tree_node(c, true, u, source, target, work, queries);
            } else {
                for (auto it = node->children().rbegin(); it != node->children().rend(); ++it) {
                    apply_tree_node(*it, false, u, source, target, work, queries);
                }
            }
            return;
    }
    throw std::logic_error("op tree: unknown node kind");
}

}  // namespace detail

// Applies the tree to `state` (register space), counting one oracle query per
// target-phase leaf encountered.
inline std::pair<PureState, QueryCount> apply_tree(const OpTreePtr& tree, const UnitarySpec& u,
                                                   const PureState& source, const TargetSet& target,
                                                   const PureState& state) {
    PureState work = state;
    long long queries = 0;
    detail::apply_tree_node(tree, false, u, source, target, work, queries);
    return {std::move(work), QueryCount{queries}};
}

// --- flattening (test/debug surface) -----------------------------------------

struct FlatOp {
    enum class Kind { U, PhaseSource, PhaseTarget };
    Kind kind;
    bool adjoint = false;  // for U leaves
    double phi = 0.0;      // for phase leaves; sign carries the dagger
};

namespace detail {

inline void flatten_node(const OpTreePtr& node, bool adj, std::vector<FlatOp>& out) {
    switch (node->kind()) {
        case OpTree::Kind::LeafU:
            out.push_back(FlatOp{FlatOp::Kind::U, adj, 0.0});
            return;
        case OpTree::Kind::LeafPhaseSource:
            out.push_back(FlatOp{FlatOp::Kind::PhaseSource, false, adj ? -node->phase() : node->phase()});
            return;
        case OpTree::Kind::LeafPhaseTarget:
            out.push_back(FlatOp{FlatOp::Kind::PhaseTarget, false, adj ? -node->phase() : node->phase()});
            return;
        case OpTree::Kind::Adjoint:
            flatten_node(node->child(), !adj, out);
            return;
        case OpTree::Kind::Seq:
            if (adj) {
                for (const auto& c : node->children()) flatten_node(c, true, out);
            } else {
                for (auto it = node->children().rbegin(); it != node->children().rend(); ++it) {
                    flatten_node(*it, false, out);
                }
            }
            return;
    }
}

}  // namespace detail

// Leaves in application order reversed, i.e. written operator order
// (leftmost token acts last), matching how the product is printed.
inline std::vector<FlatOp> flatten(const OpTreePtr& tree) {
    std::vector<FlatOp> applied;
    detail::flatten_node(tree, false, applied);
    return std::vector<FlatOp>(applied.rbegin(), applied.rend());
}

// Text dump, e.g. "U Rs U† Rt U"; a dagger marks adjointed U leaves and
// negative phase leaves.
inline std::string flatten_to_string(const OpTreePtr& tree) {
    std::string out;
    for (const FlatOp& op : flatten(tree)) {
        if (!out.empty()) out += ' ';
        switch (op.kind) {
            case FlatOp::Kind::U:
                out += op.adjoint ? "U†" : "U";
                break;
            case FlatOp::Kind::PhaseSource:
                out += op.phi < 0 ? "Rs†" : "Rs";
                break;
            case FlatOp::Kind::PhaseTarget:
                out += op.phi < 0 ? "Rt†" : "Rt";
                break;
        }
    }
    return out;
}

// Applies the flattened sequence directly; used to cross-check the recursive
// evaluator against the printed expansion.
inline std::pair<PureState, QueryCount> apply_flat(const std::vector<FlatOp>& ops, const UnitarySpec& u,
                                                   const PureState& source, const TargetSet& target,
                                                   const PureState& state) {
    PureState work = state;
    long long queries = 0;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        switch (it->kind) {
            case FlatOp::Kind::U:
                apply_unitary_in_place(work, u, Subspace::Register, it->adjoint);
                break;
            case FlatOp::Kind::PhaseSource:
                apply_selective_phase_in_place(work, source, it->phi);
                break;
            case FlatOp::Kind::PhaseTarget:
                apply_selective_phase_in_place(work, target, it->phi);
                ++queries;
                break;
        }
    }
    return {std::move(work), QueryCount{queries}};
}

}  // namespace fpsearch
