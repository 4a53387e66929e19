#pragma once

#include <stdexcept>
#include <string>

namespace mrp {

// Failure categories. The CLI maps each one onto a distinct exit status.
enum class ErrorKind {
    Input,          // malformed or inconsistent arguments (bad path, unknown edge)
    Structural,     // graph shape prevents the operation (cycle)
    Precision,      // value is not on the requested grid
    Resource,       // a size guard tripped
    Decomposition,  // flow could not be split into paths
    Parse,          // unreadable document
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error input_error(const std::string& what) { return Error(ErrorKind::Input, what); }
inline Error structural_error(const std::string& what) { return Error(ErrorKind::Structural, what); }
inline Error precision_error(const std::string& what) { return Error(ErrorKind::Precision, what); }
inline Error resource_error(const std::string& what) { return Error(ErrorKind::Resource, what); }
inline Error parse_error(const std::string& what) { return Error(ErrorKind::Parse, what); }
inline Error decomposition_error(const std::string& what) {
    return Error(ErrorKind::Decomposition, what);
}

}  // namespace mrp
