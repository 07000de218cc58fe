#pragma once

#include <optional>
#include <vector>

namespace dofkit {

class Topology;

/// Transmit sets T_1..T_K: message i is available at the transmitters in
/// `transmit_set(i)`. Sets are stored sorted and deduplicated. `budget()` is
/// the cooperation budget M (nullopt means unbounded).
class MessageAssignment {
public:
    MessageAssignment() = default;
    /// Throws InvalidAssignment on an empty set, an index outside 1..K where
    /// K = sets.size(), or |T_i| > budget.
    MessageAssignment(std::vector<std::vector<int>> sets, std::optional<int> budget);

    /// One transmitter per message (M = 1); `transmitters[i-1]` carries W_i.
    static MessageAssignment single(const std::vector<int>& transmitters);
    /// T_i = [K] for every message, unbounded budget.
    static MessageAssignment full_cooperation(int K);

    int K() const noexcept { return static_cast<int>(sets_.size()); }
    const std::vector<int>& transmit_set(int message) const;
    const std::vector<std::vector<int>>& transmit_sets() const noexcept { return sets_; }
    std::optional<int> budget() const noexcept { return budget_; }
    bool holds(int message, int tx) const;
    bool is_single() const noexcept;
    /// (t_1, ..., t_K) for single assignments; throws UnsupportedAssignment otherwise.
    std::vector<int> single_encoding() const;

    friend bool operator==(const MessageAssignment&, const MessageAssignment&) = default;

private:
    std::vector<std::vector<int>> sets_;
    std::optional<int> budget_;
};

/// Throws InvalidAssignment if `a` does not match the topology's K, or (when
/// `require_reachable`) some T_i has no transmitter connected to receiver i.
void validate_assignment(const Topology& t, const MessageAssignment& a, bool require_reachable);

} // namespace dofkit
