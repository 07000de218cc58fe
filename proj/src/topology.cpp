#include "dofkit/topology.hpp"

#include "dofkit/error.hpp"

#include <algorithm>
#include <bit>

namespace dofkit {

Topology::Topology(int K, int L, Mode mode)
    : K_(K), L_(L), mode_(mode), heard_at_(static_cast<std::size_t>(K), 0),
      reached_by_(static_cast<std::size_t>(K), 0)
{
}

Topology make_locally_connected(int K, int L, Topology::Mode mode)
{
    if (K < 1 || K > Topology::kMaxUsers) {
        throw InvalidParameter("K must be in 1.." + std::to_string(Topology::kMaxUsers) + ", got " +
                               std::to_string(K));
    }
    if (L < 0 || L >= K) {
        throw InvalidParameter("L must satisfy 0 <= L < K, got L=" + std::to_string(L) +
                               " K=" + std::to_string(K));
    }
    if (mode == Topology::Mode::explicit_edges) {
        throw InvalidParameter("explicit topologies are built with Topology::from_edges");
    }
    Topology t(K, L, mode);
    for (int j = 1; j <= K; ++j) {
        for (int step = 0; step <= L; ++step) {
            int i = j + step;
            if (i > K) {
                if (mode == Topology::Mode::truncated) break;
                i -= K;
            }
            t.heard_at_[i - 1] |= std::uint64_t{1} << (j - 1);
            t.reached_by_[j - 1] |= std::uint64_t{1} << (i - 1);
        }
    }
    return t;
}

Topology Topology::from_edges(int K, std::vector<std::pair<int, int>> edges)
{
    if (K < 1 || K > kMaxUsers) {
        throw InvalidParameter("K must be in 1.." + std::to_string(kMaxUsers));
    }
    Topology t(K, 0, Mode::explicit_edges);
    for (auto [rx, tx] : edges) {
        t.check_index(rx, "receiver");
        t.check_index(tx, "transmitter");
        t.heard_at_[rx - 1] |= std::uint64_t{1} << (tx - 1);
        t.reached_by_[tx - 1] |= std::uint64_t{1} << (rx - 1);
    }
    for (int i = 1; i <= K; ++i) {
        if (!t.connected(i, i)) {
            throw InvalidParameter("explicit topology is missing direct link (" + std::to_string(i) + "," +
                                   std::to_string(i) + ")");
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    t.edges_ = std::move(edges);
    return t;
}

void Topology::check_index(int idx, const char* what) const
{
    if (idx < 1 || idx > K_) {
        throw InvalidParameter(std::string(what) + " index " + std::to_string(idx) + " outside 1.." +
                               std::to_string(K_));
    }
}

bool Topology::connected(int rx, int tx) const
{
    check_index(rx, "receiver");
    check_index(tx, "transmitter");
    return (heard_at_[rx - 1] >> (tx - 1)) & 1U;
}

std::uint64_t Topology::transmitters_heard_at(int rx) const
{
    check_index(rx, "receiver");
    return heard_at_[rx - 1];
}

std::uint64_t Topology::receivers_reached_by(int tx) const
{
    check_index(tx, "transmitter");
    return reached_by_[tx - 1];
}

bool operator==(const Topology& a, const Topology& b)
{
    return a.K_ == b.K_ && a.L_ == b.L_ && a.mode_ == b.mode_ && a.heard_at_ == b.heard_at_;
}

namespace {

std::vector<int> mask_to_indices(std::uint64_t mask)
{
    std::vector<int> out;
    while (mask) {
        out.push_back(std::countr_zero(mask) + 1);
        mask &= mask - 1;
    }
    return out;
}

} // namespace

std::vector<int> receivers_heard_by(const Topology& t, int tx)
{
    return mask_to_indices(t.receivers_reached_by(tx));
}

std::vector<int> transmitters_heard_by(const Topology& t, int rx)
{
    return mask_to_indices(t.transmitters_heard_at(rx));
}

std::string to_string(Topology::Mode mode)
{
    switch (mode) {
    case Topology::Mode::truncated: return "truncated";
    case Topology::Mode::cyclic: return "cyclic";
    case Topology::Mode::explicit_edges: return "explicit";
    }
    return "?";
}

Topology::Mode parse_mode(std::string_view text)
{
    if (text == "truncated") return Topology::Mode::truncated;
    if (text == "cyclic") return Topology::Mode::cyclic;
    if (text == "explicit") return Topology::Mode::explicit_edges;
    throw InvalidParameter("unknown topology mode '" + std::string(text) + "'");
}

namespace {

// Chordless-cycle search on the bipartite graph. Vertex v < K is transmitter
// v+1, vertex v >= K is receiver v-K+1. Each cycle is found from its smallest
// vertex, extending paths whose interior vertices have no edges except along
// the path.
class ChordlessCycleSearch {
public:
    ChordlessCycleSearch(const Topology& t, int cap) : K_(t.K()), cap_(cap), adj_(2 * t.K(), 0)
    {
        for (int tx = 1; tx <= K_; ++tx) {
            std::uint64_t rx_mask = t.receivers_reached_by(tx);
            adj_[tx - 1] = rx_mask << K_;
            for (int rx = 1; rx <= K_; ++rx) {
                if ((rx_mask >> (rx - 1)) & 1U) adj_[K_ + rx - 1] |= std::uint64_t{1} << (tx - 1);
            }
        }
    }

    ChordalityResult run()
    {
        for (int s = 0; s < 2 * K_ && result_.verdict != Chordality::not_chordal; ++s) {
            path_.assign(1, s);
            std::uint64_t blocked = (std::uint64_t{1} << (s + 1)) - 1; // vertices <= s
            extend(s, blocked, 0);
        }
        if (result_.verdict == Chordality::not_chordal) return result_;
        result_.verdict = truncated_ ? Chordality::inconclusive : Chordality::chordal;
        return result_;
    }

private:
    // `forbidden`: vertices that may not be appended (on the path, below the
    // start, or adjacent to an interior path vertex).
    void extend(int start, std::uint64_t forbidden, std::uint64_t interior_nbrs)
    {
        if (result_.verdict == Chordality::not_chordal) return;
        const int last = path_.back();
        std::uint64_t candidates = adj_[last] & ~forbidden & ~interior_nbrs;
        while (candidates) {
            const int w = std::countr_zero(candidates);
            candidates &= candidates - 1;
            const int length = static_cast<int>(path_.size()) + 1;
            const bool closes = path_.size() >= 2 && ((adj_[start] >> w) & 1U);
            if (closes) {
                if (length >= 6) {
                    path_.push_back(w);
                    record_witness();
                    return;
                }
                continue; // a 4-cycle; any extension through w has chord (start, w)
            }
            if (length >= cap_) {
                if (cap_ < 2 * K_) truncated_ = true;
                continue;
            }
            // `last` becomes interior once w is appended. The start vertex stays
            // out of the interior set so a later vertex may close the cycle.
            const std::uint64_t next_interior =
                path_.size() >= 2 ? (interior_nbrs | adj_[last]) : interior_nbrs;
            path_.push_back(w);
            extend(start, forbidden | (std::uint64_t{1} << w), next_interior);
            path_.pop_back();
            if (result_.verdict == Chordality::not_chordal) return;
        }
    }

    void record_witness()
    {
        result_.verdict = Chordality::not_chordal;
        for (int v : path_) {
            result_.witness.push_back(v < K_ ? BipartiteVertex{false, v + 1} : BipartiteVertex{true, v - K_ + 1});
        }
    }

    int K_;
    int cap_;
    std::vector<std::uint64_t> adj_;
    std::vector<int> path_;
    bool truncated_ = false;
    ChordalityResult result_;
};

} // namespace

ChordalityResult is_chordal_bipartite(const Topology& t, int cycle_length_cap)
{
    if (t.K() > kChordalityMaxUsers) {
        throw ResourceLimit("chordality check enumerates induced cycles; K=" + std::to_string(t.K()) +
                            " exceeds the limit of " + std::to_string(kChordalityMaxUsers));
    }
    const int cap = cycle_length_cap <= 0 ? 2 * t.K() : cycle_length_cap;
    return ChordlessCycleSearch(t, cap).run();
}

} // namespace dofkit
