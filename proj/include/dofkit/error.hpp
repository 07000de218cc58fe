#pragma once

#include <stdexcept>
#include <string>

namespace dofkit {

// Bad argument values: out-of-range indices, L >= K, malformed shapes.
class InvalidParameter : public std::invalid_argument {
public:
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

// Exhaustive searches refuse inputs above their declared size cap.
class ResourceLimit : public std::runtime_error {
public:
    explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

class InvalidAssignment : public InvalidParameter {
public:
    explicit InvalidAssignment(const std::string& what) : InvalidParameter(what) {}
};

class UnsupportedAssignment : public InvalidParameter {
public:
    explicit UnsupportedAssignment(const std::string& what) : InvalidParameter(what) {}
};

class InvalidSchedule : public InvalidParameter {
public:
    explicit InvalidSchedule(const std::string& what) : InvalidParameter(what) {}
};

} // namespace dofkit
