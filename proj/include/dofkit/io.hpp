#pragma once

#include "dofkit/demand_graph.hpp"
#include "dofkit/linear_sim.hpp"
#include "dofkit/schemes.hpp"
#include "dofkit/topology.hpp"

#include <json.hpp>

#include <string>

namespace dofkit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// Every document carries a "schema" field naming its format and version.
inline constexpr const char* kTopologySchema = "dofkit.topology/1";
inline constexpr const char* kAssignmentSchema = "dofkit.assignment/1";
inline constexpr const char* kScheduleSchema = "dofkit.schedule/1";
inline constexpr const char* kDofResultSchema = "dofkit.dof-result/1";
inline constexpr const char* kDofBoundSchema = "dofkit.dof-bound/1";
inline constexpr const char* kSchemeSchema = "dofkit.linear-scheme/1";
inline constexpr const char* kChannelSchema = "dofkit.channel/1";
inline constexpr const char* kReconstructionSchema = "dofkit.reconstruction/1";

Json to_json(const Topology& t);
Topology topology_from_json(const Json& j);

Json to_json(const MessageAssignment& a);
MessageAssignment assignment_from_json(const Json& j);

Json to_json(const TdmaSchedule& s);
TdmaSchedule schedule_from_json(const Json& j);

Json to_json(const DofResult& r);
Json to_json(const DofBound& b);

Json to_json(const LinearScheme& s);
LinearScheme scheme_from_json(const Json& j);

Json to_json(const ChannelRealization& c);
ChannelRealization channel_from_json(const Json& j);

Json to_json(const ReconstructionReport& r);

/// CSV columns K,L,mode,M,sum_dof_num,sum_dof_den,per_user (plus per_user_decimal).
std::string dof_csv_header(bool decimal);
std::string dof_csv_row(const Topology& t, int M, const Rational& sum_dof, bool decimal);

} // namespace dofkit
