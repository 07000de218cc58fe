#include "dofkit/io.hpp"

#include "dofkit/error.hpp"

#include <algorithm>
#include <sstream>

namespace dofkit {

namespace {

void expect_schema(const Json& j, const char* schema)
{
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != schema) {
        throw InvalidParameter(std::string("expected a document with schema ") + schema);
    }
}

template <class F>
auto parsing(const char* what, F&& f)
{
    try {
        return f();
    } catch (const Json::exception& e) {
        throw InvalidParameter(std::string("malformed ") + what + ": " + e.what());
    }
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 2) throw InvalidParameter("complex numbers are [re, im] pairs");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json matrix_to_json(const ComplexMatrix& m)
{
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json& j, int rows, int cols)
{
    if (!j.is_array() || static_cast<int>(j.size()) != rows) throw InvalidParameter("precoder row count mismatch");
    ComplexMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& row = j.at(r);
        if (!row.is_array() || static_cast<int>(row.size()) != cols) {
            throw InvalidParameter("precoder column count mismatch");
        }
        for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(row.at(c));
    }
    return m;
}

} // namespace

Json to_json(const Topology& t)
{
    Json j;
    j["schema"] = kTopologySchema;
    j["K"] = t.K();
    j["L"] = t.L();
    j["mode"] = to_string(t.mode());
    if (t.mode() == Topology::Mode::explicit_edges) {
        Json edges = Json::array();
        for (auto [rx, tx] : t.explicit_edges()) edges.push_back(Json::array({rx, tx}));
        j["explicit_edges"] = std::move(edges);
    }
    return j;
}

Topology topology_from_json(const Json& j)
{
    expect_schema(j, kTopologySchema);
    return parsing("topology", [&] {
        const auto mode = parse_mode(j.at("mode").get<std::string>());
        const int K = j.at("K").get<int>();
        if (mode == Topology::Mode::explicit_edges) {
            std::vector<std::pair<int, int>> edges;
            for (const auto& e : j.at("explicit_edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            return Topology::from_edges(K, std::move(edges));
        }
        return make_locally_connected(K, j.at("L").get<int>(), mode);
    });
}

Json to_json(const MessageAssignment& a)
{
    Json j;
    j["schema"] = kAssignmentSchema;
    j["K"] = a.K();
    j["M"] = a.budget() ? Json(*a.budget()) : Json("unbounded");
    j["transmit_sets"] = a.transmit_sets();
    return j;
}

MessageAssignment assignment_from_json(const Json& j)
{
    expect_schema(j, kAssignmentSchema);
    return parsing("assignment", [&] {
        std::optional<int> budget;
        if (!j.at("M").is_string()) budget = j.at("M").get<int>();
        auto sets = j.at("transmit_sets").get<std::vector<std::vector<int>>>();
        if (static_cast<int>(sets.size()) != j.at("K").get<int>()) {
            throw InvalidParameter("assignment K does not match transmit_sets");
        }
        return MessageAssignment(std::move(sets), budget);
    });
}

Json to_json(const TdmaSchedule& s)
{
    Json j;
    j["schema"] = kScheduleSchema;
    Json entries = Json::array();
    for (const auto& e : s.entries) {
        Json services = Json::array();
        for (const auto& sv : e.served.services) {
            services.push_back(Json{{"message", sv.message}, {"server", sv.server}});
        }
        entries.push_back(Json{{"fraction", to_string(e.fraction)}, {"served", std::move(services)}});
    }
    j["entries"] = std::move(entries);
    return j;
}

TdmaSchedule schedule_from_json(const Json& j)
{
    expect_schema(j, kScheduleSchema);
    return parsing("schedule", [&] {
        TdmaSchedule s;
        for (const auto& e : j.at("entries")) {
            ScheduleEntry entry;
            entry.fraction = parse_rational(e.at("fraction").get<std::string>());
            for (const auto& sv : e.at("served")) {
                entry.served.services.push_back({sv.at("message").get<int>(), sv.at("server").get<int>()});
            }
            std::sort(entry.served.services.begin(), entry.served.services.end());
            s.entries.push_back(std::move(entry));
        }
        return s;
    });
}

Json to_json(const DofResult& r)
{
    Json j;
    j["schema"] = kDofResultSchema;
    j["K"] = r.K;
    j["sum_dof"] = to_string(r.sum_dof);
    j["per_user"] = to_string(r.per_user);
    j["method"] = to_string(r.method);
    j["estimated"] = r.estimated;
    if (r.estimated) {
        j["trials"] = r.trials;
        j["disagreeing_trials"] = r.disagreeing_trials;
        j["unstable"] = r.unstable;
    }
    j["warnings"] = r.warnings;
    return j;
}

Json to_json(const DofBound& b)
{
    Json j;
    j["schema"] = kDofBoundSchema;
    j["value"] = to_string(b.value);
    Json cert = Json::array();
    for (const auto& term : b.certificate) {
        cert.push_back(Json{{"subset", term.subset}, {"weight", to_string(term.weight)}});
    }
    j["certificate"] = std::move(cert);
    j["assignment"] = b.assignment ? to_json(*b.assignment) : Json(nullptr);
    return j;
}

Json to_json(const LinearScheme& s)
{
    Json j;
    j["schema"] = kSchemeSchema;
    j["K"] = s.K();
    j["n"] = s.n();
    j["symbols"] = s.symbol_counts();
    j["assignment"] = to_json(s.assignment());
    Json pre = Json::array();
    for (const auto& [key, v] : s.precoders()) {
        pre.push_back(Json{{"tx", key.first}, {"message", key.second}, {"V", matrix_to_json(v)}});
    }
    j["precoders"] = std::move(pre);
    return j;
}

LinearScheme scheme_from_json(const Json& j)
{
    expect_schema(j, kSchemeSchema);
    return parsing("linear scheme", [&] {
        LinearScheme s(assignment_from_json(j.at("assignment")), j.at("n").get<int>(),
                       j.at("symbols").get<std::vector<int>>());
        if (s.K() != j.at("K").get<int>()) throw InvalidParameter("scheme K does not match its assignment");
        for (const auto& p : j.at("precoders")) {
            const int tx = p.at("tx").get<int>();
            const int k = p.at("message").get<int>();
            s.set_precoder(tx, k, matrix_from_json(p.at("V"), s.n(), s.symbols(k)));
        }
        return s;
    });
}

Json to_json(const ChannelRealization& c)
{
    Json j;
    j["schema"] = kChannelSchema;
    j["topology"] = to_json(c.topology());
    j["n"] = c.n();
    j["coherence"] = to_string(c.coherence());
    Json coeffs = Json::array();
    for (int rx = 1; rx <= c.K(); ++rx) {
        for (int tx = 1; tx <= c.K(); ++tx) {
            if (!c.topology().connected(rx, tx)) continue;
            Json slots = Json::array();
            for (int t = 1; t <= c.n(); ++t) slots.push_back(complex_to_json(c.h(rx, tx, t)));
            coeffs.push_back(Json{{"rx", rx}, {"tx", tx}, {"h", std::move(slots)}});
        }
    }
    j["coefficients"] = std::move(coeffs);
    return j;
}

ChannelRealization channel_from_json(const Json& j)
{
    expect_schema(j, kChannelSchema);
    return parsing("channel realization", [&] {
        Topology t = topology_from_json(j.at("topology"));
        const int n = j.at("n").get<int>();
        const int K = t.K();
        if (n < 1) throw InvalidParameter("slot count n must be positive");
        std::vector<Complex> coeffs(static_cast<std::size_t>(K) * K * n);
        for (const auto& e : j.at("coefficients")) {
            const int rx = e.at("rx").get<int>();
            const int tx = e.at("tx").get<int>();
            if (rx < 1 || rx > K || tx < 1 || tx > K) throw InvalidParameter("coefficient index out of range");
            const auto& h = e.at("h");
            if (static_cast<int>(h.size()) != n) throw InvalidParameter("coefficient needs n slots");
            for (int s = 0; s < n; ++s) {
                coeffs[(static_cast<std::size_t>(rx - 1) * K + (tx - 1)) * n + s] = complex_from_json(h.at(s));
            }
        }
        return ChannelRealization(std::move(t), n, parse_coherence(j.at("coherence").get<std::string>()),
                                  std::move(coeffs));
    });
}

Json to_json(const ReconstructionReport& r)
{
    Json j;
    j["schema"] = kReconstructionSchema;
    j["B"] = r.B;
    j["exclusive_transmitters"] = r.exclusive_transmitters;
    j["s"] = r.s;
    j["r"] = r.r;
    j["deficiency"] = r.deficiency;
    j["reconstructable"] = r.reconstructable;
    return j;
}

std::string dof_csv_header(bool decimal)
{
    return decimal ? "K,L,mode,M,sum_dof_num,sum_dof_den,per_user,per_user_decimal"
                   : "K,L,mode,M,sum_dof_num,sum_dof_den,per_user";
}

std::string dof_csv_row(const Topology& t, int M, const Rational& sum_dof, bool decimal)
{
    Rational sum = sum_dof;
    sum.canonicalize();
    Rational per_user = sum / t.K();
    per_user.canonicalize();
    std::ostringstream os;
    os << t.K() << ',' << t.L() << ',' << to_string(t.mode()) << ',' << M << ',' << sum.get_num().get_str() << ','
       << sum.get_den().get_str() << ',' << to_string(per_user);
    if (decimal) {
        os.precision(12);
        os << ',' << to_double(per_user);
    }
    return os.str();
}

} // namespace dofkit
