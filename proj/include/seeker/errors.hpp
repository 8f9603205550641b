#pragma once

#include <stdexcept>
#include <string>

namespace seeker {

class Error : public std::runtime_error {
public:
    enum class Kind {
        Io,
        Parse,
        Validation,
        Lookup,
        Config,
        Gateway,
        Internal,
    };

    Error(Kind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

inline Error io_error(std::string msg) { return Error(Error::Kind::Io, std::move(msg)); }
inline Error parse_error(std::string msg) { return Error(Error::Kind::Parse, std::move(msg)); }
inline Error validation_error(std::string msg) { return Error(Error::Kind::Validation, std::move(msg)); }
inline Error lookup_error(std::string msg) { return Error(Error::Kind::Lookup, std::move(msg)); }
inline Error config_error(std::string msg) { return Error(Error::Kind::Config, std::move(msg)); }
inline Error gateway_error(std::string msg) { return Error(Error::Kind::Gateway, std::move(msg)); }

} // namespace seeker
