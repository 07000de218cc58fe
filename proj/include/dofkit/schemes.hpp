#pragma once

#include "dofkit/assignment.hpp"
#include "dofkit/rational.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dofkit {

class Topology;

struct Service {
    int message = 0;
    int server = 0; ///< transmitter sending `message` in this slot fraction
    friend bool operator==(const Service&, const Service&) = default;
    friend auto operator<=>(const Service&, const Service&) = default;
};

/// Messages served simultaneously, each by one transmitter.
struct ServedSet {
    std::vector<Service> services; ///< sorted by message
    friend bool operator==(const ServedSet&, const ServedSet&) = default;
};

struct ScheduleEntry {
    ServedSet served;
    Rational fraction; ///< share of time, in (0, 1]
};

/// Fractional time sharing over interference-free served sets.
struct TdmaSchedule {
    std::vector<ScheduleEntry> entries;

    /// d_i = sum of fractions of the entries that serve message i.
    std::vector<Rational> per_message_dof(int K) const;
    Rational total_fraction() const;
};

enum class DofMethod { tdma_search, canonical, lp_bound, linear_sim };

std::string to_string(DofMethod m);

struct DofResult {
    Rational sum_dof;
    int K = 0;
    Rational per_user;
    DofMethod method = DofMethod::tdma_search;
    /// Set for simulation-derived values (generic rank from sampled channels).
    bool estimated = false;
    std::size_t trials = 0;
    std::size_t disagreeing_trials = 0;
    /// More than 1% of trials disagreed with the modal rank profile.
    bool unstable = false;
    std::vector<std::string> warnings;
};

DofResult make_dof_result(const Rational& sum_dof, int K, DofMethod method);

/// Assignment, schedule and value produced by the TDMA constructions.
struct TdmaPlan {
    MessageAssignment assignment;
    TdmaSchedule schedule;
    DofResult result;
};

/// True iff every served receiver hears its server, no served receiver hears
/// another active server, and no transmitter serves two messages. Throws
/// InvalidParameter on out-of-range or repeated message indices.
bool is_schedulable(const Topology& t, const ServedSet& s);

/// Throws InvalidSchedule unless fractions lie in (0, 1], sum to at most one,
/// every entry is schedulable and (when `a` is given) every server holds its
/// message.
void validate_schedule(const Topology& t, const TdmaSchedule& sched, const MessageAssignment* a = nullptr);

DofResult schedule_dof(const Topology& t, const TdmaSchedule& sched);

/// Turn off every other transmitter: for L = 2 the even messages are served by
/// their preceding transmitter; for other L two messages per block of L + 2
/// consecutive users. Throws InvalidParameter on explicit topologies.
TdmaPlan canonical_tdma(const Topology& t);

inline constexpr int kOptimalTdmaMaxUsers = 16;

/// Exact maximum TDMA sum DoF over assignments with |T_i| <= M (transmitters
/// connected to their receivers) and fractional schedules. Ties go to the
/// lexicographically smallest transmitter encoding.
TdmaPlan optimal_tdma(const Topology& t, int M, int limit = kOptimalTdmaMaxUsers);

inline constexpr int kScheduleLpMaxUsers = 10;

/// Maximal schedulable served sets usable under assignment `a`.
std::vector<ServedSet> maximal_served_sets(const Topology& t, const MessageAssignment& a,
                                           int limit = kScheduleLpMaxUsers);

/// Best fractional schedule for a fixed assignment: exact LP over the
/// maximal schedulable served sets.
TdmaPlan optimal_schedule_for_assignment(const Topology& t, const MessageAssignment& a,
                                         int limit = kScheduleLpMaxUsers);

} // namespace dofkit
