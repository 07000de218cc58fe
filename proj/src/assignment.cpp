#include "dofkit/assignment.hpp"

#include "dofkit/error.hpp"
#include "dofkit/topology.hpp"

#include <algorithm>
#include <string>

namespace dofkit {

MessageAssignment::MessageAssignment(std::vector<std::vector<int>> sets, std::optional<int> budget)
    : sets_(std::move(sets)), budget_(budget)
{
    const int K = static_cast<int>(sets_.size());
    if (budget_ && *budget_ < 1) {
        throw InvalidAssignment("cooperation budget M must be positive");
    }
    for (int i = 1; i <= K; ++i) {
        auto& s = sets_[i - 1];
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (s.empty()) {
            throw InvalidAssignment("transmit set of message " + std::to_string(i) + " is empty");
        }
        if (s.front() < 1 || s.back() > K) {
            throw InvalidAssignment("transmit set of message " + std::to_string(i) + " has an index outside 1.." +
                                    std::to_string(K));
        }
        if (budget_ && static_cast<int>(s.size()) > *budget_) {
            throw InvalidAssignment("transmit set of message " + std::to_string(i) + " exceeds budget M=" +
                                    std::to_string(*budget_));
        }
    }
}

MessageAssignment MessageAssignment::single(const std::vector<int>& transmitters)
{
    std::vector<std::vector<int>> sets;
    sets.reserve(transmitters.size());
    for (int tx : transmitters) sets.push_back({tx});
    return MessageAssignment(std::move(sets), 1);
}

MessageAssignment MessageAssignment::full_cooperation(int K)
{
    std::vector<int> all(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) all[j] = j + 1;
    return MessageAssignment(std::vector<std::vector<int>>(static_cast<std::size_t>(K), all), std::nullopt);
}

const std::vector<int>& MessageAssignment::transmit_set(int message) const
{
    if (message < 1 || message > K()) {
        throw InvalidParameter("message index " + std::to_string(message) + " outside 1.." + std::to_string(K()));
    }
    return sets_[message - 1];
}

bool MessageAssignment::holds(int message, int tx) const
{
    const auto& s = transmit_set(message);
    return std::binary_search(s.begin(), s.end(), tx);
}

bool MessageAssignment::is_single() const noexcept
{
    return std::all_of(sets_.begin(), sets_.end(), [](const auto& s) { return s.size() == 1; });
}

std::vector<int> MessageAssignment::single_encoding() const
{
    if (!is_single()) {
        throw UnsupportedAssignment("assignment has a transmit set with more than one transmitter");
    }
    std::vector<int> enc;
    enc.reserve(sets_.size());
    for (const auto& s : sets_) enc.push_back(s.front());
    return enc;
}

void validate_assignment(const Topology& t, const MessageAssignment& a, bool require_reachable)
{
    if (a.K() != t.K()) {
        throw InvalidAssignment("assignment has " + std::to_string(a.K()) + " messages but topology has K=" +
                                std::to_string(t.K()));
    }
    if (!require_reachable) return;
    for (int i = 1; i <= a.K(); ++i) {
        const auto& s = a.transmit_set(i);
        if (std::none_of(s.begin(), s.end(), [&](int tx) { return t.connected(i, tx); })) {
            throw InvalidAssignment("no transmitter holding message " + std::to_string(i) +
                                    " is connected to receiver " + std::to_string(i));
        }
    }
}

} // namespace dofkit
