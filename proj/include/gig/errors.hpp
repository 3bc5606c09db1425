#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gig {

// Coarse failure categories. The CLI maps these onto process exit codes.
enum class ErrorCategory { data = 1, usage = 2, environment = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorCategory::usage, what) {}
};

class EnvironmentError : public Error {
public:
    explicit EnvironmentError(const std::string& what)
        : Error(ErrorCategory::environment, what) {}
};

// Malformed XML. offset is the byte position where the tokenizer gave up.
class XmlParseError : public DataError {
public:
    XmlParseError(std::size_t offset, const std::string& reason)
        : DataError("XML parse error at byte " + std::to_string(offset) + ": " + reason),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Well-formed XML that is not a pathway document.
class GpmlSchemaError : public DataError {
public:
    using DataError::DataError;
};

class DomainError : public DataError {
public:
    using DataError::DataError;
};

class MissingPathwayError : public EnvironmentError {
public:
    explicit MissingPathwayError(const std::string& wpid)
        : EnvironmentError("pathway " + wpid + " is not cached and offline mode is on"),
          wpid_(wpid) {}

    const std::string& wpid() const noexcept { return wpid_; }

private:
    std::string wpid_;
};

class DownloadError : public EnvironmentError {
public:
    DownloadError(const std::string& subject, const std::string& reason)
        : EnvironmentError("download failed for " + subject + ": " + reason), subject_(subject) {}

    const std::string& subject() const noexcept { return subject_; }

private:
    std::string subject_;
};

class CacheWriteError : public EnvironmentError {
public:
    CacheWriteError(const std::string& subject, const std::string& path)
        : EnvironmentError("cannot write cache entry for " + subject + " at " + path),
          subject_(subject) {}

    const std::string& subject() const noexcept { return subject_; }

private:
    std::string subject_;
};

class CacheCorruptionError : public EnvironmentError {
public:
    CacheCorruptionError(const std::string& path, const std::string& reason)
        : EnvironmentError("corrupt cache file " + path + ": " + reason), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class NetworkError : public EnvironmentError {
public:
    NetworkError(std::vector<std::string> unresolved, const std::string& reason)
        : EnvironmentError(describe(unresolved, reason)), unresolved_(std::move(unresolved)) {}

    const std::vector<std::string>& unresolved() const noexcept { return unresolved_; }

private:
    static std::string describe(const std::vector<std::string>& ids, const std::string& reason) {
        std::string s = "annotation query failed (" + reason + "); unresolved:";
        for (const auto& id : ids) s += " " + id;
        return s;
    }

    std::vector<std::string> unresolved_;
};

class IoError : public EnvironmentError {
public:
    IoError(const std::string& path, const std::string& reason)
        : EnvironmentError(reason + ": " + path), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace gig
