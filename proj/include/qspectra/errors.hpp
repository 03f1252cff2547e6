#pragma once

#include <stdexcept>
#include <string>

namespace qspectra {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive truncation did not settle. Carries the last two iterates.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double previous, double last)
        : Error(what), previous_(previous), last_(last) {}
    double previous() const noexcept { return previous_; }
    double last() const noexcept { return last_; }

private:
    double previous_;
    double last_;
};

/// (a, q) lies in an unstable band of the Mathieu stability chart.
class DomainError : public Error {
public:
    DomainError(const std::string& what, double lower_edge, double upper_edge)
        : Error(what), lower_(lower_edge), upper_(upper_edge) {}
    double lower_edge() const noexcept { return lower_; }
    double upper_edge() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

class TruncationError : public Error {
public:
    using Error::Error;
};

/// Channel with vanishing d-wave gap; no sub-gap matching problem exists.
class NodalChannelError : public Error {
public:
    using Error::Error;
};

class TrackingError : public Error {
public:
    TrackingError(const std::string& what, double phi_lo, double phi_hi)
        : Error(what), lo_(phi_lo), hi_(phi_hi) {}
    double window_lo() const noexcept { return lo_; }
    double window_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

class SizeError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

class CorrespondenceError : public Error {
public:
    CorrespondenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace qspectra
