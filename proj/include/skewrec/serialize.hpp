#pragma once

#include <string>

#include <json.hpp>

#include "skewrec/measure.hpp"
#include "skewrec/skew.hpp"
#include "skewrec/towers.hpp"

namespace skewrec {

using json = nlohmann::json;

// Wire shapes. All of them round-trip byte-exactly through to_text:
//   Perm          {"cells": N, "forward": [..]}
//   SkewProduct   {"base": Perm, "fibers": [pool indices], "pool": [Perm, ..]}
//   RokhlinTower  {"base_set": [..], "height": N, "residual": [..]}
//   Certificate   {"block": k, "n": n, "witness": [..]}
//   Partition     {"block_perms": [Perm, ..], "blocks": [[..], ..]}
//   Rational      {"den": q, "num": p}
// Cell lists are sorted ascending; keys serialize alphabetically.

json perm_to_json(const Perm& p);
Perm perm_from_json(const json& j);

json skew_to_json(const SkewProduct& r);
SkewProduct skew_from_json(const json& j);

json tower_to_json(const RokhlinTower& t);
/// Rebuilds levels and coverage from base_set and height; validates the
/// stored residual against them.
RokhlinTower tower_from_json(const json& j, const Perm& s);

json certificate_to_json(const RecurrenceCertificate& c, std::uint32_t universe);
RecurrenceCertificate certificate_from_json(const json& j, std::uint32_t universe);

json partition_to_json(const SimplePartition& p);
/// The one-argument form infers the universe as the total cell count of the
/// blocks (a partition covers X exactly); the two-argument form pins it.
SimplePartition partition_from_json(const json& j);
SimplePartition partition_from_json(const json& j, std::uint32_t universe);

json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);

json recurrentize_to_json(const RecurrentizeResult& res);

/// Canonical text form: compact dump, alphabetical keys, one trailing
/// newline. Identical values produce identical bytes.
std::string to_text(const json& j);

/// Parses text as JSON; wraps syntax failures in parse_error with context.
json parse_json(const std::string& text, const std::string& what);

/// Whole-file helpers used by the CLI.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace skewrec
