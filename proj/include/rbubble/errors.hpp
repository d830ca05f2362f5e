#ifndef RBUBBLE_ERRORS_HPP
#define RBUBBLE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbubble {

// Base class for all toolkit errors. Subcommands map these to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidCharacterError : public Error {
public:
    InvalidCharacterError(std::size_t position, char c)
        : Error("invalid character '" + std::string(1, c) + "' at position " +
                std::to_string(position)),
          position(position), character(c) {}
    std::size_t position;
    char character;
};

class InvalidKError : public Error {
public:
    explicit InvalidKError(long k)
        : Error("k must be in [2, 63], got " + std::to_string(k)) {}
};

class LengthMismatchError : public Error {
public:
    LengthMismatchError(std::size_t a, std::size_t b)
        : Error("sequence lengths differ: " + std::to_string(a) + " vs " +
                std::to_string(b)) {}
};

class EmptyInputError : public Error {
public:
    EmptyInputError() : Error("no valid sequences in input") {}
};

class EmptyGraphError : public Error {
public:
    explicit EmptyGraphError(unsigned k)
        : Error("no read of length >= k+1 = " + std::to_string(k + 1) +
                "; graph would have no arc") {}
};

class NoSuchVertexError : public Error {
public:
    explicit NoSuchVertexError(const std::string& what) : Error("no such vertex: " + what) {}
};

class NoSuchArcError : public Error {
public:
    NoSuchArcError(const std::string& u, const std::string& v)
        : Error("no such arc: " + u + " -> " + v) {}
};

class InvalidAlphaError : public Error {
public:
    explicit InvalidAlphaError(double alpha)
        : Error("alpha must be in [0, 1], got " + std::to_string(alpha)) {}
};

class InvalidParameterError : public Error {
public:
    explicit InvalidParameterError(const std::string& msg) : Error(msg) {}
};

class InvalidSpecError : public Error {
public:
    explicit InvalidSpecError(const std::string& msg) : Error(msg) {}
};

class OracleRefusedError : public Error {
public:
    explicit OracleRefusedError(std::size_t nv)
        : Error("oracle refuses graphs with more than 20 vertices (got " +
                std::to_string(nv) + ")") {}
};

class IOError : public Error {
public:
    explicit IOError(const std::string& msg) : Error(msg) {}
};

}  // namespace rbubble

#endif
