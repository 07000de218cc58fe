#pragma once

#include "dofkit/assignment.hpp"
#include "dofkit/rational.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace dofkit {

class Topology;

/// Collapsed demand graph of a one-transmitter-per-message assignment. Node i
/// stands for message W_i together with its destination receiver i; there is
/// an edge u -> v (u != v) iff receiver u does not hear the transmitter that
/// carries W_v. A set of messages whose induced subgraph is acyclic has sum
/// DoF at most one.
class DemandGraph {
public:
    /// Raw graph over nodes 1..K from (u, v) edge pairs; self-loops rejected.
    static DemandGraph from_edges(int K, const std::vector<std::pair<int, int>>& edges);

    int K() const noexcept { return static_cast<int>(out_.size()); }
    bool has_edge(int u, int v) const;
    /// Bit (u-1) set iff u -> v.
    std::uint64_t in_mask(int v) const;
    std::uint64_t out_mask(int u) const;
    std::vector<std::pair<int, int>> edges() const;

    DemandGraph without_edge(int u, int v) const;

    const std::optional<MessageAssignment>& assignment() const noexcept { return assignment_; }

private:
    friend DemandGraph build_demand_graph(const Topology&, const MessageAssignment&);

    explicit DemandGraph(int K);
    void check_node(int v) const;

    std::vector<std::uint64_t> out_;
    std::vector<std::uint64_t> in_;
    std::optional<MessageAssignment> assignment_;
};

/// Throws UnsupportedAssignment when some |T_i| > 1 and InvalidAssignment when
/// T_i's transmitter is not connected to receiver i.
DemandGraph build_demand_graph(const Topology& t, const MessageAssignment& a);

/// True iff the subgraph induced by `subset` (1-based nodes) has no directed cycle.
bool is_acyclic_subset(const DemandGraph& g, const std::vector<int>& subset);
/// Same, with the subset as a bitmask (bit v-1 for node v).
bool is_acyclic_mask(const DemandGraph& g, std::uint64_t subset);

std::vector<int> mask_to_nodes(std::uint64_t mask);
std::uint64_t nodes_to_mask(const std::vector<int>& nodes);

struct CertificateTerm {
    std::vector<int> subset; ///< an acyclic node set
    Rational weight;         ///< dual multiplier, > 0
};

/// Exact LP outer bound on the sum DoF. The certificate's weights cover every
/// node at least once and sum to `value`.
struct DofBound {
    Rational value;
    std::vector<CertificateTerm> certificate;
    std::optional<MessageAssignment> assignment;
};

inline constexpr int kDemandLpMaxUsers = 12;
inline constexpr int kBestAssignmentMaxUsers = 12;

/// Maximal acyclic node sets as bitmasks, ascending. Throws ResourceLimit above
/// `limit` nodes (hard ceiling 20).
std::vector<std::uint64_t> maximal_acyclic_subsets(const DemandGraph& g, int limit = kDemandLpMaxUsers);

/// max sum d_i s.t. d >= 0 and sum_{i in S} d_i <= 1 for every maximal acyclic S,
/// solved exactly.
DofBound dof_upper_bound_lp(const DemandGraph& g, int limit = kDemandLpMaxUsers);

/// True iff the certificate is a valid dual solution proving `bound.value`.
bool verify_certificate(const DemandGraph& g, const DofBound& bound);

/// Maximum of dof_upper_bound_lp over all single-transmitter assignments with
/// each message placed at a transmitter connected to its receiver. The
/// maximizing assignment is returned in the bound.
DofBound best_assignment_upper_bound(const Topology& t, int limit = kBestAssignmentMaxUsers);

} // namespace dofkit
