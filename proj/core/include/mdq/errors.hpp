#pragma once

#include <stdexcept>

namespace mdq {

/// Invalid experiment configuration (bad schema, unknown key, missing
/// section). The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric failure at run time (diverging loss, non-finite values).
/// The CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Base class for serialization failures.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File declares a format version this build does not understand.
class version_error : public io_error {
public:
    using io_error::io_error;
};

/// File ends before the declared payload does.
class truncation_error : public io_error {
public:
    using io_error::io_error;
};

/// Payload bytes do not match the stored CRC-32.
class checksum_error : public io_error {
public:
    using io_error::io_error;
};

} // namespace mdq
