#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace helmprec::cli {

/// Flat key=value settings, one per line, '#' starts a comment.
using Settings = std::map<std::string, std::string>;

Settings parse_config_text(const std::string& text);
Settings read_config_file(const std::string& path);

/// Canonical key-sorted rendering used for <out>/config.resolved.
std::string render_settings(const std::string& subcommand, const Settings& settings);

/// Entry point of the helmprec tool. Returns 0 on success, 2 on argument
/// errors (usage printed to `err`), 1 on runtime failures (one-line
/// diagnostic on `err`).
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace helmprec::cli
