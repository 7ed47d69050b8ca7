#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace sfb {

namespace detail {
inline std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}
} // namespace detail

// Invalid argument or input outside an operation's domain.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A finite prefix was too short to certify the property being computed.
class InsufficientData : public DomainError {
public:
    explicit InsufficientData(const std::string& what) : DomainError(what) {}
};

// An iteration or series budget ran out before the target accuracy was met.
// `achieved` is the best bound that was reached.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved bound " + detail::short_double(achieved) + ")"),
          achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

// A condition that must hold by construction failed; indicates a bug.
class InvariantFailure : public std::logic_error {
public:
    explicit InvariantFailure(const std::string& what) : std::logic_error(what) {}
};

} // namespace sfb
