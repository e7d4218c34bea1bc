#pragma once

#include <stdexcept>
#include <string>

namespace ppdsim {

/// Base class for all simulator errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Frame decoding failed: truncated header, unknown operation code or
/// missing end marker.
struct MalformedFrame : Error {
    using Error::Error;
};

/// Two packets were assigned to the same (line, slot) pair.
struct SlotCollision : Error {
    using Error::Error;
};

/// A discharge was requested while the buffer held less than one quantum.
struct BufferUnderflow : Error {
    using Error::Error;
};

/// A store was requested while the buffer was at its configured capacity.
struct BufferOverflow : Error {
    using Error::Error;
};

/// Routing table has no entry for the requested destination address.
struct NoRoute : Error {
    using Error::Error;
};

/// Operation code outside the defined enumeration.
struct UnknownOperation : Error {
    using Error::Error;
};

/// A packet with a different operation code arrived while a binary
/// operation was waiting for its second slot.
struct OperationBusy : Error {
    using Error::Error;
};

/// A packet was delivered to a router it is not addressed to.
struct AddressMismatch : Error {
    using Error::Error;
};

/// Per-slot energy bookkeeping failed to close within tolerance.
struct BalanceViolation : Error {
    using Error::Error;
};

/// A numeric result overflowed or produced NaN.
struct NonFinite : Error {
    using Error::Error;
};

/// Heat map normalization requested with zero total input energy.
struct DegenerateNormalization : Error {
    using Error::Error;
};

/// A run over zero slots has no defined metrics.
struct EmptyRun : Error {
    using Error::Error;
};

}  // namespace ppdsim
