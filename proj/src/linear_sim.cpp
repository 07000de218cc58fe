#include "dofkit/linear_sim.hpp"

#include "dofkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

namespace dofkit {

LinearScheme::LinearScheme(MessageAssignment assignment, int n, std::vector<int> symbols)
    : assignment_(std::move(assignment)), n_(n), symbols_(std::move(symbols))
{
    if (n_ < 1 || n_ > kMaxSlots) throw InvalidParameter("slot count n must be in 1.." + std::to_string(kMaxSlots));
    if (static_cast<int>(symbols_.size()) != assignment_.K()) {
        throw InvalidParameter("need one symbol count per message");
    }
    for (int i = 1; i <= K(); ++i) {
        const int m = symbols_[i - 1];
        if (m < 0 || m > n_) {
            throw InvalidParameter("message " + std::to_string(i) + " has " + std::to_string(m) +
                                   " symbols; must be in 0..n=" + std::to_string(n_));
        }
    }
}

int LinearScheme::symbols(int message) const
{
    if (message < 1 || message > K()) throw InvalidParameter("message index out of range");
    return symbols_[message - 1];
}

int LinearScheme::total_symbols() const { return std::accumulate(symbols_.begin(), symbols_.end(), 0); }

int LinearScheme::symbol_offset(int message) const
{
    if (message < 1 || message > K()) throw InvalidParameter("message index out of range");
    return std::accumulate(symbols_.begin(), symbols_.begin() + (message - 1), 0);
}

void LinearScheme::set_precoder(int tx, int message, ComplexMatrix v)
{
    if (tx < 1 || tx > K() || !assignment_.holds(message, tx)) {
        throw InvalidParameter("transmitter " + std::to_string(tx) + " does not hold message " +
                               std::to_string(message));
    }
    if (v.rows() != n_ || v.cols() != symbols(message)) {
        throw InvalidParameter("precoder V_{" + std::to_string(tx) + "," + std::to_string(message) + "} must be " +
                               std::to_string(n_) + "x" + std::to_string(symbols(message)));
    }
    precoders_[{tx, message}] = std::move(v);
}

const ComplexMatrix* LinearScheme::precoder(int tx, int message) const
{
    auto it = precoders_.find({tx, message});
    return it == precoders_.end() ? nullptr : &it->second;
}

LinearScheme LinearScheme::scaled(Complex factor) const
{
    LinearScheme out = *this;
    for (auto& [key, v] : out.precoders_) v *= factor;
    return out;
}

std::string to_string(Coherence c) { return c == Coherence::constant ? "constant" : "time-varying"; }

Coherence parse_coherence(std::string_view text)
{
    if (text == "constant") return Coherence::constant;
    if (text == "time-varying") return Coherence::time_varying;
    throw InvalidParameter("unknown coherence '" + std::string(text) + "'");
}

ChannelRealization::ChannelRealization(Topology topology, int n, Coherence coherence,
                                       std::vector<Complex> coefficients)
    : topology_(std::move(topology)), n_(n), coherence_(coherence), coefficients_(std::move(coefficients))
{
    const int K = topology_.K();
    if (n_ < 1) throw InvalidParameter("slot count n must be positive");
    if (coefficients_.size() != static_cast<std::size_t>(K) * K * n_) {
        throw InvalidParameter("channel realization needs K*K*n coefficients");
    }
    for (int rx = 1; rx <= K; ++rx) {
        for (int tx = 1; tx <= K; ++tx) {
            const bool linked = topology_.connected(rx, tx);
            for (int t = 1; t <= n_; ++t) {
                const Complex v = h(rx, tx, t);
                if (!linked && v != Complex{}) {
                    throw InvalidParameter("nonzero coefficient on missing link (" + std::to_string(rx) + "," +
                                           std::to_string(tx) + ")");
                }
                if (coherence_ == Coherence::constant && v != h(rx, tx, 1)) {
                    throw InvalidParameter("constant coherence requires identical coefficients across slots");
                }
            }
        }
    }
}

Complex ChannelRealization::h(int rx, int tx, int slot) const
{
    const int K = topology_.K();
    if (rx < 1 || rx > K || tx < 1 || tx > K || slot < 1 || slot > n_) {
        throw InvalidParameter("channel index out of range");
    }
    return coefficients_[(static_cast<std::size_t>(rx - 1) * K + (tx - 1)) * n_ + (slot - 1)];
}

Eigen::VectorXcd ChannelRealization::slots(int rx, int tx) const
{
    Eigen::VectorXcd v(n_);
    for (int t = 1; t <= n_; ++t) v(t - 1) = h(rx, tx, t);
    return v;
}

namespace {

Complex standard_complex_gaussian(std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

void check_consistent(const LinearScheme& s, const ChannelRealization& c)
{
    if (s.K() != c.K() || s.n() != c.n()) {
        throw InvalidParameter("scheme (K=" + std::to_string(s.K()) + ", n=" + std::to_string(s.n()) +
                               ") and realization (K=" + std::to_string(c.K()) + ", n=" + std::to_string(c.n()) +
                               ") disagree");
    }
}

} // namespace

ChannelRealization sample_channel(const Topology& t, int n, Coherence coherence, std::uint64_t seed)
{
    if (n < 1) throw InvalidParameter("slot count n must be positive");
    const int K = t.K();
    std::mt19937_64 rng(seed);
    std::vector<Complex> coeffs(static_cast<std::size_t>(K) * K * n);
    for (int rx = 1; rx <= K; ++rx) {
        for (int tx = 1; tx <= K; ++tx) {
            if (!t.connected(rx, tx)) continue;
            const std::size_t base = (static_cast<std::size_t>(rx - 1) * K + (tx - 1)) * n;
            const Complex first = standard_complex_gaussian(rng);
            coeffs[base] = first;
            for (int slot = 1; slot < n; ++slot) {
                coeffs[base + slot] = coherence == Coherence::constant ? first : standard_complex_gaussian(rng);
            }
        }
    }
    return ChannelRealization(t, n, coherence, std::move(coeffs));
}

namespace {

// n x m_k block: sum over transmitters j in T_k heard at rx of diag(H_{rx,j}) V_{j,k}.
ComplexMatrix contribution(const LinearScheme& s, const ChannelRealization& c, int rx, int message)
{
    ComplexMatrix block = ComplexMatrix::Zero(s.n(), s.symbols(message));
    for (int tx : s.assignment().transmit_set(message)) {
        if (!c.topology().connected(rx, tx)) continue;
        const ComplexMatrix* v = s.precoder(tx, message);
        if (!v) continue;
        block += c.slots(rx, tx).asDiagonal() * (*v);
    }
    return block;
}

} // namespace

ReceivedMap received_map(const LinearScheme& s, const ChannelRealization& c, int rx)
{
    check_consistent(s, c);
    if (rx < 1 || rx > s.K()) throw InvalidParameter("receiver index out of range");
    ReceivedMap out;
    out.desired = contribution(s, c, rx, rx);
    out.interference = ComplexMatrix::Zero(s.n(), s.total_symbols() - s.symbols(rx));
    int col = 0;
    for (int k = 1; k <= s.K(); ++k) {
        if (k == rx) continue;
        const int m = s.symbols(k);
        if (m > 0) out.interference.middleCols(col, m) = contribution(s, c, rx, k);
        col += m;
    }
    return out;
}

int numerical_rank(const ComplexMatrix& m, double relative_tolerance)
{
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& sv = svd.singularValues();
    const double largest = sv.size() > 0 ? sv(0) : 0.0;
    if (largest == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > relative_tolerance * largest) ++rank;
    }
    return rank;
}

int decodable_symbols(const LinearScheme& s, const ChannelRealization& c, int rx)
{
    const ReceivedMap map = received_map(s, c, rx);
    ComplexMatrix joint(s.n(), map.desired.cols() + map.interference.cols());
    joint << map.desired, map.interference;
    return numerical_rank(joint) - numerical_rank(map.interference);
}

std::vector<int> decodable_profile(const LinearScheme& s, const ChannelRealization& c)
{
    std::vector<int> profile(static_cast<std::size_t>(s.K()));
    for (int rx = 1; rx <= s.K(); ++rx) profile[rx - 1] = decodable_symbols(s, c, rx);
    return profile;
}

DofResult evaluate_dof(const LinearScheme& s, const Topology& t, int trials, std::uint64_t seed, Coherence coherence)
{
    if (trials < 1) throw InvalidParameter("trials must be at least 1");
    if (s.K() != t.K()) throw InvalidParameter("scheme and topology disagree on K");

    std::map<std::vector<int>, int> counts;
    std::vector<std::vector<int>> per_trial;
    per_trial.reserve(static_cast<std::size_t>(trials));
    for (int k = 0; k < trials; ++k) {
        const auto c = sample_channel(t, s.n(), coherence, seed + static_cast<std::uint64_t>(k));
        per_trial.push_back(decodable_profile(s, c));
        ++counts[per_trial.back()];
    }
    // Modal profile; ties resolve to the profile seen first.
    const std::vector<int>* modal = nullptr;
    int modal_count = 0;
    for (const auto& p : per_trial) {
        const int cnt = counts[p];
        if (cnt > modal_count) {
            modal = &p;
            modal_count = cnt;
        }
    }
    const int total = std::accumulate(modal->begin(), modal->end(), 0);
    DofResult r = make_dof_result(Rational(total, s.n()), s.K(), DofMethod::linear_sim);
    r.estimated = true;
    r.trials = static_cast<std::size_t>(trials);
    r.disagreeing_trials = static_cast<std::size_t>(trials - modal_count);
    if (r.disagreeing_trials > 0) {
        r.warnings.push_back("rank profile disagreed with the modal profile in " +
                             std::to_string(r.disagreeing_trials) + " of " + std::to_string(trials) + " trials");
    }
    if (100 * r.disagreeing_trials > r.trials) {
        r.unstable = true;
        r.warnings.push_back("instability: disagreement rate above 1%");
    }
    return r;
}

LinearScheme scheme_from_schedule(const Topology& t, const MessageAssignment& a, const TdmaSchedule& sched, int n)
{
    validate_schedule(t, sched, &a);
    long lcm = 1;
    for (const auto& e : sched.entries) {
        Rational f = e.fraction;
        f.canonicalize();
        lcm = std::lcm(lcm, f.get_den().get_si());
        if (lcm > kMaxSlots) throw InvalidParameter("schedule needs more than " + std::to_string(kMaxSlots) + " slots");
    }
    if (n == 0) n = static_cast<int>(lcm);
    if (n < 1 || n > kMaxSlots || n % lcm != 0) {
        throw InvalidParameter("n=" + std::to_string(n) + " must be a positive multiple of " + std::to_string(lcm) +
                               " and at most " + std::to_string(kMaxSlots));
    }

    const int K = t.K();
    std::vector<int> symbols(static_cast<std::size_t>(K), 0);
    struct Block {
        int first_slot;
        int length;
    };
    std::vector<Block> blocks;
    int next_slot = 0;
    for (const auto& e : sched.entries) {
        Rational len = e.fraction * n;
        len.canonicalize();
        const int length = static_cast<int>(len.get_num().get_si());
        blocks.push_back({next_slot, length});
        next_slot += length;
        for (const auto& sv : e.served.services) symbols[sv.message - 1] += length;
    }

    LinearScheme scheme(a, n, symbols);
    std::map<std::pair<int, int>, ComplexMatrix> precoders;
    std::vector<int> used(static_cast<std::size_t>(K), 0);
    for (std::size_t k = 0; k < sched.entries.size(); ++k) {
        for (const auto& sv : sched.entries[k].served.services) {
            auto [it, inserted] = precoders.try_emplace({sv.server, sv.message},
                                                        ComplexMatrix::Zero(n, symbols[sv.message - 1]));
            for (int slot = 0; slot < blocks[k].length; ++slot) {
                it->second(blocks[k].first_slot + slot, used[sv.message - 1] + slot) = 1.0;
            }
            used[sv.message - 1] += blocks[k].length;
        }
    }
    for (auto& [key, v] : precoders) scheme.set_precoder(key.first, key.second, std::move(v));
    return scheme;
}

ComplexMatrix build_stacked_matrix(const ChannelRealization& c, const std::vector<int>& receivers)
{
    const int K = c.K();
    const int n = c.n();
    ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(n) * receivers.size(),
                                          static_cast<Eigen::Index>(n) * K);
    for (std::size_t b = 0; b < receivers.size(); ++b) {
        const int rx = receivers[b];
        if (rx < 1 || rx > K) throw InvalidParameter("receiver index out of range");
        for (int tx = 1; tx <= K; ++tx) {
            if (!c.topology().connected(rx, tx)) continue;
            for (int slot = 1; slot <= n; ++slot) {
                h(static_cast<Eigen::Index>(b) * n + slot - 1, static_cast<Eigen::Index>(tx - 1) * n + slot - 1) =
                    c.h(rx, tx, slot);
            }
        }
    }
    return h;
}

ComplexMatrix build_stacked_matrix(const LinearScheme& s, const ChannelRealization& c,
                                   const std::vector<int>& receivers)
{
    check_consistent(s, c);
    return build_stacked_matrix(c, receivers);
}

ComplexMatrix stacked_precoders(const LinearScheme& s, const std::vector<int>& messages)
{
    const int n = s.n();
    int cols = 0;
    for (int k : messages) cols += s.symbols(k);
    ComplexMatrix v = ComplexMatrix::Zero(static_cast<Eigen::Index>(n) * s.K(), cols);
    int col = 0;
    for (int k : messages) {
        const int m = s.symbols(k);
        for (int tx = 1; tx <= s.K(); ++tx) {
            if (const ComplexMatrix* p = s.precoder(tx, k); p && m > 0) {
                v.block(static_cast<Eigen::Index>(tx - 1) * n, col, n, m) = *p;
            }
        }
        col += m;
    }
    return v;
}

namespace {

ComplexMatrix stack_rows(const std::vector<ComplexMatrix>& parts, Eigen::Index cols)
{
    Eigen::Index rows = 0;
    for (const auto& p : parts) rows += p.rows();
    ComplexMatrix out(rows, cols);
    Eigen::Index r = 0;
    for (const auto& p : parts) {
        if (p.rows() > 0) out.middleRows(r, p.rows()) = p;
        r += p.rows();
    }
    return out;
}

} // namespace

ReconstructionReport lemma1_check(const LinearScheme& s, const ChannelRealization& c, const std::vector<int>& B)
{
    check_consistent(s, c);
    const int K = s.K();
    const int n = s.n();
    std::vector<char> in_b(static_cast<std::size_t>(K), 0);
    for (int b : B) {
        if (b < 1 || b > K) throw InvalidParameter("receiver set B has an index outside 1..K");
        in_b[b - 1] = 1;
    }

    ReconstructionReport report;
    report.B = B;
    std::sort(report.B.begin(), report.B.end());
    report.B.erase(std::unique(report.B.begin(), report.B.end()), report.B.end());

    std::vector<char> carries_outside(static_cast<std::size_t>(K), 0);
    std::vector<int> outside;
    for (int k = 1; k <= K; ++k) {
        if (in_b[k - 1]) continue;
        outside.push_back(k);
        for (int tx : s.assignment().transmit_set(k)) carries_outside[tx - 1] = 1;
    }
    for (int j = 1; j <= K; ++j) {
        if (!carries_outside[j - 1]) report.exclusive_transmitters.push_back(j);
    }

    // Processed signals of B as a function of the outside-B symbols.
    const ComplexMatrix processed = build_stacked_matrix(c, report.B) * stacked_precoders(s, outside);
    report.s = static_cast<int>(processed.cols());
    report.r = numerical_rank(processed);
    report.deficiency = report.s - report.r;

    // Row-space test in the full symbol space.
    const Eigen::Index total = s.total_symbols();
    ComplexMatrix processed_full = ComplexMatrix::Zero(processed.rows(), total);
    {
        Eigen::Index col = 0;
        for (int k : outside) {
            const int m = s.symbols(k);
            if (m > 0) processed_full.middleCols(s.symbol_offset(k), m) = processed.middleCols(col, m);
            col += m;
        }
    }
    std::vector<ComplexMatrix> known{processed_full};
    std::vector<ComplexMatrix> targets;
    for (const auto& [key, v] : s.precoders()) {
        const auto [tx, k] = key;
        if (v.cols() == 0) continue;
        ComplexMatrix row = ComplexMatrix::Zero(n, total);
        row.middleCols(s.symbol_offset(k), v.cols()) = v;
        (in_b[k - 1] ? known : targets).push_back(std::move(row));
    }
    const ComplexMatrix known_rows = stack_rows(known, total);
    if (targets.empty()) {
        report.reconstructable = true;
        return report;
    }
    std::vector<ComplexMatrix> all = known;
    all.insert(all.end(), targets.begin(), targets.end());
    report.reconstructable = numerical_rank(stack_rows(all, total)) == numerical_rank(known_rows);
    return report;
}

LinearScheme random_scheme(const Topology& t, const MessageAssignment& a, int n, double density, std::uint64_t seed)
{
    if (!(density > 0.0 && density <= 1.0)) throw InvalidParameter("density must lie in (0, 1]");
    if (n < 1 || n > 16) throw InvalidParameter("random schemes need 1 <= n <= 16");
    validate_assignment(t, a, false);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> symbol_count(0, n);
    std::bernoulli_distribution present(density);
    std::vector<int> symbols(static_cast<std::size_t>(t.K()));
    for (auto& m : symbols) m = symbol_count(rng);
    LinearScheme scheme(a, n, symbols);
    for (int i = 1; i <= t.K(); ++i) {
        for (int tx : a.transmit_set(i)) {
            if (!present(rng)) continue;
            ComplexMatrix v(n, symbols[i - 1]);
            for (Eigen::Index c = 0; c < v.cols(); ++c) {
                for (Eigen::Index r = 0; r < v.rows(); ++r) v(r, c) = standard_complex_gaussian(rng);
            }
            scheme.set_precoder(tx, i, std::move(v));
        }
    }
    return scheme;
}

std::vector<int> even_receivers(int K)
{
    std::vector<int> out;
    for (int i = 2; i <= K; i += 2) out.push_back(i);
    return out;
}

} // namespace dofkit
