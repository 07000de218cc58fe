#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dofkit {

/// Connectivity of a K-user interference channel: which receivers hear which
/// transmitters. Indices are 1-based in every public signature; receiver i and
/// transmitter j range over 1..K.
///
/// Locally connected topologies put transmitter j in range of receivers
/// j, j+1, ..., j+L. Truncated mode clips at K (the last L transmitters reach
/// their own receiver and every following one); cyclic mode wraps modulo K.
/// Explicit topologies are hand-built edge lists used to exercise structural
/// checks on graphs that are not locally connected.
class Topology {
public:
    enum class Mode { truncated, cyclic, explicit_edges };

    static constexpr int kMaxUsers = 64;

    /// Hand-built topology; `edges` holds (receiver, transmitter) pairs. The
    /// direct links (i, i) must be present.
    static Topology from_edges(int K, std::vector<std::pair<int, int>> edges);

    int K() const noexcept { return K_; }
    int L() const noexcept { return L_; }
    Mode mode() const noexcept { return mode_; }
    bool is_locally_connected() const noexcept { return mode_ != Mode::explicit_edges; }

    /// True iff receiver `rx` hears transmitter `tx`. Throws InvalidParameter
    /// on out-of-range indices.
    bool connected(int rx, int tx) const;

    /// Bit (tx-1) set iff receiver `rx` hears transmitter tx.
    std::uint64_t transmitters_heard_at(int rx) const;
    /// Bit (rx-1) set iff transmitter `tx` reaches receiver rx.
    std::uint64_t receivers_reached_by(int tx) const;

    /// Sorted (receiver, transmitter) pairs; only populated in explicit mode.
    const std::vector<std::pair<int, int>>& explicit_edges() const noexcept { return edges_; }

    friend bool operator==(const Topology& a, const Topology& b);

private:
    friend Topology make_locally_connected(int K, int L, Mode mode);

    Topology(int K, int L, Mode mode);
    void check_index(int idx, const char* what) const;

    int K_ = 0;
    int L_ = 0;
    Mode mode_ = Mode::truncated;
    std::vector<std::uint64_t> heard_at_;  // per receiver
    std::vector<std::uint64_t> reached_by_; // per transmitter
    std::vector<std::pair<int, int>> edges_;
};

/// Builds the locally connected topology. Throws InvalidParameter unless
/// 1 <= K <= kMaxUsers and 0 <= L < K.
Topology make_locally_connected(int K, int L, Topology::Mode mode);

/// Receivers that hear transmitter `tx`, ascending.
std::vector<int> receivers_heard_by(const Topology& t, int tx);

/// Transmitters heard at receiver `rx`, ascending.
std::vector<int> transmitters_heard_by(const Topology& t, int rx);

std::string to_string(Topology::Mode mode);
Topology::Mode parse_mode(std::string_view text);

enum class Chordality { chordal, not_chordal, inconclusive };

struct BipartiteVertex {
    bool receiver = false;
    int index = 0;
    friend bool operator==(const BipartiteVertex&, const BipartiteVertex&) = default;
};

struct ChordalityResult {
    Chordality verdict = Chordality::chordal;
    /// A chordless cycle of length >= 6 when the verdict is not_chordal.
    std::vector<BipartiteVertex> witness;
};

inline constexpr int kChordalityMaxUsers = 16;

/// Chordal-bipartite test on the undirected transmitter/receiver graph: every
/// cycle of length >= 6 must have a chord. Enumerates chordless paths; cycles
/// longer than `cycle_length_cap` vertices are not explored, and the verdict is
/// `inconclusive` when that cut-off actually pruned a path with no violation
/// found. A cap <= 0 means "no cap" (2K). Throws ResourceLimit when
/// K > kChordalityMaxUsers.
ChordalityResult is_chordal_bipartite(const Topology& t, int cycle_length_cap = 0);

} // namespace dofkit
