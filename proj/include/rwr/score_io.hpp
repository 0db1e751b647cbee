#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rwr/propagation.hpp"

namespace rwr {

/// Writes lines `node_id score` with round-trippable precision. Lines
/// starting with '#' are comments; `header_comments` are emitted first,
/// one per line, without the leading '#'.
void write_score_dump(std::ostream& out, std::span<const double> scores,
                      std::span<const std::string> header_comments = {});

/// Reads a score dump; comment and blank lines are skipped. Node ids must
/// cover 0..n-1 exactly once.
ScoreVector read_score_dump(std::istream& in);

void write_score_file(const std::string& path, std::span<const double> scores,
                      std::span<const std::string> header_comments = {});
ScoreVector read_score_file(const std::string& path);

} // namespace rwr
