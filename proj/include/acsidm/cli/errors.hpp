#pragma once

#include <stdexcept>

namespace acsidm::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,    // unexpected failure
    kExitConfig = 2,      // usage, flags, configuration file contents
    kExitData = 3,        // malformed or inconsistent input data
    kExitIo = 4,          // unreadable/unwritable files
    kExitAllFailed = 5,   // every bootstrap replicate failed
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AllReplicatesFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace acsidm::cli
