#ifndef RBSC_IO_HPP
#define RBSC_IO_HPP

#include <string>
#include <variant>

#include "rbsc/instances.hpp"

namespace rbsc {

enum class InstanceKind { Rbsc, Mmsa, Mku };

// Reading normalizes unsorted/duplicated adjacency instead of rejecting it;
// `normalized` reports whether anything had to change.
template <class T>
struct ReadResult {
  T instance;
  bool normalized = false;
};

using AnyInstance =
    std::variant<RbscInstance, MmsaInstance, MinKUnionInstance>;

struct AnyReadResult {
  InstanceKind kind;
  AnyInstance instance;
  bool normalized = false;
};

// Canonical byte representation (sorted keys, no whitespace, UTF-8, ints
// only). write + read is the identity on validated instances.
std::string canonical_json(const RbscInstance& inst);
std::string canonical_json(const MmsaInstance& inst);
std::string canonical_json(const MinKUnionInstance& inst);

// FNV-1a 64 over the canonical bytes, as 16 hex digits.
std::string digest(const std::string& canonical_bytes);
template <class T>
std::string instance_digest(const T& inst) {
  return digest(canonical_json(inst));
}

ReadResult<RbscInstance> parse_rbsc(const std::string& text);
ReadResult<MmsaInstance> parse_mmsa(const std::string& text);
ReadResult<MinKUnionInstance> parse_mku(const std::string& text);

AnyReadResult read_instance(const std::string& path);
ReadResult<RbscInstance> read_rbsc(const std::string& path);
ReadResult<MmsaInstance> read_mmsa(const std::string& path);
ReadResult<MinKUnionInstance> read_mku(const std::string& path);

void write_instance(const RbscInstance& inst, const std::string& path);
void write_instance(const MmsaInstance& inst, const std::string& path);
void write_instance(const MinKUnionInstance& inst, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace rbsc

#endif  // RBSC_IO_HPP
