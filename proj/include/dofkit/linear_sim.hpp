#pragma once

#include "dofkit/assignment.hpp"
#include "dofkit/schemes.hpp"
#include "dofkit/topology.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dofkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// A linear cooperation scheme over n slots. Message i carries m_i symbols;
/// transmitter j in T_i sends V_{j,i} w_i with V_{j,i} an n x m_i precoder.
/// Precoders never depend on channel realizations: schemes are built first
/// and realizations sampled afterwards.
class LinearScheme {
public:
    /// Throws InvalidParameter if n < 1, symbols.size() != K or some m_i
    /// lies outside 0..n.
    LinearScheme(MessageAssignment assignment, int n, std::vector<int> symbols);

    int K() const noexcept { return assignment_.K(); }
    int n() const noexcept { return n_; }
    int symbols(int message) const;
    const std::vector<int>& symbol_counts() const noexcept { return symbols_; }
    int total_symbols() const;
    const MessageAssignment& assignment() const noexcept { return assignment_; }

    /// Throws InvalidParameter unless tx holds the message and the shape is n x m_i.
    void set_precoder(int tx, int message, ComplexMatrix v);
    /// nullptr when no precoder is set (X_{tx,message} = 0).
    const ComplexMatrix* precoder(int tx, int message) const;
    const std::map<std::pair<int, int>, ComplexMatrix>& precoders() const noexcept { return precoders_; }

    /// Column offset of message `message`'s symbols in the stacked symbol vector.
    int symbol_offset(int message) const;

    /// Multiplies every precoder by `factor`.
    LinearScheme scaled(Complex factor) const;

private:
    MessageAssignment assignment_;
    int n_;
    std::vector<int> symbols_;
    std::map<std::pair<int, int>, ComplexMatrix> precoders_; // key (tx, message)
};

enum class Coherence { time_varying, constant };

std::string to_string(Coherence c);
Coherence parse_coherence(std::string_view text);

/// Channel coefficients H_{i,j}(t) over n slots, zero exactly where the
/// topology has no link.
class ChannelRealization {
public:
    /// `coefficients` is indexed [((rx-1)*K + (tx-1))*n + (slot-1)]. Throws
    /// InvalidParameter on size mismatch, a nonzero coefficient on a missing
    /// link, or slot-varying values under constant coherence.
    ChannelRealization(Topology topology, int n, Coherence coherence, std::vector<Complex> coefficients);

    const Topology& topology() const noexcept { return topology_; }
    int K() const noexcept { return topology_.K(); }
    int n() const noexcept { return n_; }
    Coherence coherence() const noexcept { return coherence_; }
    Complex h(int rx, int tx, int slot) const;
    /// (H_{rx,tx}(1), ..., H_{rx,tx}(n)).
    Eigen::VectorXcd slots(int rx, int tx) const;
    const std::vector<Complex>& coefficients() const noexcept { return coefficients_; }

private:
    Topology topology_;
    int n_;
    Coherence coherence_;
    std::vector<Complex> coefficients_;
};

/// Nonzero coefficients i.i.d. standard circularly-symmetric complex Gaussian;
/// deterministic in `seed`.
ChannelRealization sample_channel(const Topology& t, int n, Coherence coherence, std::uint64_t seed);

struct ReceivedMap {
    ComplexMatrix desired;      ///< n x m_i
    ComplexMatrix interference; ///< n x sum_{k != i} m_k, messages ascending
};

/// Noiseless linear map from symbols to receiver i's n observations.
ReceivedMap received_map(const LinearScheme& s, const ChannelRealization& c, int rx);

inline constexpr double kRankRelativeTolerance = 1e-9;

/// Singular values below tol * (largest singular value) count as zero.
int numerical_rank(const ComplexMatrix& m, double relative_tolerance = kRankRelativeTolerance);

/// rank([desired | interference]) - rank(interference).
int decodable_symbols(const LinearScheme& s, const ChannelRealization& c, int rx);

/// decodable_symbols for receivers 1..K.
std::vector<int> decodable_profile(const LinearScheme& s, const ChannelRealization& c);

/// Sum of decodable symbols over receivers divided by n, using the modal
/// per-receiver profile over `trials` realizations (trial k uses seed + k).
/// Any disagreement is counted and noted; more than 1% of trials marks the
/// result unstable.
DofResult evaluate_dof(const LinearScheme& s, const Topology& t, int trials, std::uint64_t seed,
                       Coherence coherence = Coherence::time_varying);

inline constexpr int kMaxSlots = 64;

/// Embeds a TDMA schedule as a linear scheme: entries get consecutive blocks of
/// fraction * n slots and each served message gets one fresh symbol per slot
/// of its block, sent by its server. `n = 0` picks the lcm of the fraction
/// denominators. Throws InvalidParameter when n is not a multiple of that lcm
/// or exceeds kMaxSlots.
LinearScheme scheme_from_schedule(const Topology& t, const MessageAssignment& a, const TdmaSchedule& sched,
                                  int n = 0);

/// n|B| x nK block matrix; block (receiver b, transmitter j) is diag(H_{b,j}(1..n)).
ComplexMatrix build_stacked_matrix(const ChannelRealization& c, const std::vector<int>& receivers);
/// Same, after checking the scheme and the realization agree on K and n.
ComplexMatrix build_stacked_matrix(const LinearScheme& s, const ChannelRealization& c,
                                   const std::vector<int>& receivers);

/// nK x sum_{k in messages} m_k stacked precoders V_{[K], messages}.
ComplexMatrix stacked_precoders(const LinearScheme& s, const std::vector<int>& messages);

struct ReconstructionReport {
    std::vector<int> B;
    std::vector<int> exclusive_transmitters; ///< U_B = [K] minus the union of T_i for i outside B
    int s = 0;          ///< symbols of messages outside B
    int r = 0;          ///< rank of the map from those symbols to B's processed signals
    int deficiency = 0; ///< s - r
    bool reconstructable = false;
};

/// Removes the contributions of messages in B from B's received signals and
/// checks whether every transmit component X_{j,k} of a message k outside B is
/// a linear function of those processed signals together with the components
/// of messages in B.
ReconstructionReport lemma1_check(const LinearScheme& s, const ChannelRealization& c, const std::vector<int>& B);

/// Random m_i in 0..n and i.i.d. complex Gaussian precoders; each V_{j,i}
/// with j in T_i is present with probability `density`. Throws
/// InvalidParameter unless 0 < density <= 1 and 1 <= n <= 16.
LinearScheme random_scheme(const Topology& t, const MessageAssignment& a, int n, double density,
                           std::uint64_t seed);

/// Receivers with even index.
std::vector<int> even_receivers(int K);

} // namespace dofkit
