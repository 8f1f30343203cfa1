#pragma once

#include <stdexcept>
#include <string>

namespace mlopc {

/// Invalid argument values (parameter ranges, gamma poles, bad domains).
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

/// Parameter combination outside the supported evaluation domain
/// (three-parameter case requires 0 < alpha < 1 and |Arg lambda| > alpha*pi).
class unsupported_parameters : public std::domain_error {
public:
    explicit unsupported_parameters(const std::string& msg) : std::domain_error(msg) {}
};

/// Every region of the singularity chart was rejected by the contour solver.
class no_admissible_region : public std::runtime_error {
public:
    explicit no_admissible_region(const std::string& msg) : std::runtime_error(msg) {}
};

/// The reference series did not meet its stopping rule within max_terms.
class oracle_non_convergence : public std::runtime_error {
public:
    explicit oracle_non_convergence(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mlopc
