// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polarfuse {

// Line-based `key = value` configuration with [section] headers. Sections
// and keys come from a fixed schema; unknown ones are hard errors. Every
// key has a documented default; CLI flags override file values via
// apply_override("section.key", "value"). Relative paths in values resolve
// against the directory of the file they were loaded from.
class RunConfig {
public:
    // Schema defaults only.
    RunConfig();

    static RunConfig load(const std::string& path);

    void apply_override(const std::string& dotted_key, const std::string& value);

    std::string get_string(const std::string& section, const std::string& key) const;
    int get_int(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    uint64_t get_seed(const std::string& section, const std::string& key) const;

    // Resolves a path-valued key against the config file location.
    std::string get_path(const std::string& section, const std::string& key) const;

    // Serialized form written as resolved.cfg into every output directory;
    // reloads to an identical key/value state.
    std::string serialize() const;
    void write(const std::string& path) const;

    bool operator==(const RunConfig& other) const { return values_ == other.values_; }

private:
    void set_checked(const std::string& section, const std::string& key,
                     const std::string& value);

    std::map<std::string, std::string> values_; // "section.key" -> value
    std::string base_dir_ = ".";
};

} // namespace polarfuse
