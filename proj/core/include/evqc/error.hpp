#pragma once

#include <stdexcept>
#include <string>

namespace evqc {

// Every failure raised by the library derives from Error so callers can
// catch the whole family at a single boundary (the CLI does exactly that).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

// C_N needs N/4 to be a positive integer, so it does not exist for n < 2.
class ClassUndefined : public Error {
public:
    using Error::Error;
};

// Requested work exceeds the exhaustive-enumeration or dense-storage limits.
class Infeasible : public Error {
public:
    using Error::Error;
};

class DegenerateMeasurement : public Error {
public:
    using Error::Error;
};

class NotInvariantForm : public Error {
public:
    using Error::Error;
};

class NoWitness : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace evqc
