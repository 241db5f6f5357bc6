#pragma once

// The two primitive single-singlet codes: (2,1) "E2" and (3,1) "E3".

#include <span>
#include <vector>

#include "earac/bloch.hpp"
#include "earac/exactnum.hpp"

namespace earac {

enum class PrimitiveKind { E2, E3 };

constexpr int arity(PrimitiveKind kind) { return kind == PrimitiveKind::E2 ? 2 : 3; }
const char* kind_name(PrimitiveKind kind);

// Alice's "+" direction for the given input bits.
//   E2: (1, (-1)^(a0^a1), 0) / sqrt2
//   E3: (1, (-1)^(a0^a1), (-1)^(a0^a2)) / sqrt3, i.e. the four bases
//       a0=a1=a2 -> (1,1,1), a0=a1!=a2 -> (1,1,-1),
//       a0!=a1=a2 -> (1,-1,-1), a0!=a1!=a2 -> (1,-1,1).
// Throws std::invalid_argument when inputs.size() != arity(kind).
BlochVector alice_basis(PrimitiveKind kind, std::span<const Bit> inputs);

// Bob's "+" direction for decoding input `query`: B0 = x, B1 = y, B2 = z.
// Throws std::out_of_range when query >= arity(kind).
BlochVector bob_basis(PrimitiveKind kind, int query);

// Exact a.b for the pair above; always +-1/sqrt2 (E2) or +-1/sqrt3 (E3).
ExactValue exact_alignment(PrimitiveKind kind, std::span<const Bit> inputs, int query);

// Message rule M = a0 xor A.
Bit node_output(std::span<const Bit> inputs, Bit alice_outcome);

// Guess rule: the message xor every outcome Bob collected on his path.
Bit decode_guess(Bit message, std::span<const Bit> outcomes);

// Every "+" direction Alice can pick for a kind, indexed by
// (a0^a1) for E2 and (a0^a1) | (a0^a2) << 1 for E3.
std::span<const BlochVector> alice_basis_table(PrimitiveKind kind);
int alice_basis_index(PrimitiveKind kind, std::span<const Bit> inputs);

}  // namespace earac
