#include "earac/primitives.hpp"

#include <stdexcept>
#include <string>

namespace earac {

namespace {

const std::vector<BlochVector>& e2_table() {
    static const std::vector<BlochVector> table = {
        BlochVector(1, 1, 0),
        BlochVector(1, -1, 0),
    };
    return table;
}

const std::vector<BlochVector>& e3_table() {
    static const std::vector<BlochVector> table = {
        BlochVector(1, 1, 1),    // a0 = a1 = a2
        BlochVector(1, -1, 1),   // a0 != a1 != a2
        BlochVector(1, 1, -1),   // a0 = a1 != a2
        BlochVector(1, -1, -1),  // a0 != a1 = a2
    };
    return table;
}

void check_arity(PrimitiveKind kind, std::span<const Bit> inputs) {
    if (static_cast<int>(inputs.size()) != arity(kind)) {
        throw std::invalid_argument(std::string(kind_name(kind)) + " expects " + std::to_string(arity(kind)) +
                                    " input bits, got " + std::to_string(inputs.size()));
    }
}

}  // namespace

const char* kind_name(PrimitiveKind kind) { return kind == PrimitiveKind::E2 ? "E2" : "E3"; }

int alice_basis_index(PrimitiveKind kind, std::span<const Bit> inputs) {
    check_arity(kind, inputs);
    const int y_flip = (inputs[0] ^ inputs[1]) & 1;
    if (kind == PrimitiveKind::E2) return y_flip;
    const int z_flip = (inputs[0] ^ inputs[2]) & 1;
    return y_flip | (z_flip << 1);
}

std::span<const BlochVector> alice_basis_table(PrimitiveKind kind) {
    return kind == PrimitiveKind::E2 ? std::span<const BlochVector>(e2_table())
                                     : std::span<const BlochVector>(e3_table());
}

BlochVector alice_basis(PrimitiveKind kind, std::span<const Bit> inputs) {
    return alice_basis_table(kind)[alice_basis_index(kind, inputs)];
}

BlochVector bob_basis(PrimitiveKind kind, int query) {
    if (query < 0 || query >= arity(kind)) {
        throw std::out_of_range(std::string(kind_name(kind)) + " has no query index " + std::to_string(query));
    }
    switch (query) {
        case 0: return {1, 0, 0};
        case 1: return {0, 1, 0};
        default: return {0, 0, 1};
    }
}

ExactValue exact_alignment(PrimitiveKind kind, std::span<const Bit> inputs, int query) {
    check_arity(kind, inputs);
    if (query < 0 || query >= arity(kind)) {
        throw std::out_of_range(std::string(kind_name(kind)) + " has no query index " + std::to_string(query));
    }
    // The x component is always +; y carries (-1)^(a0^a1), z carries (-1)^(a0^a2).
    int sign = 1;
    if (query > 0 && ((inputs[0] ^ inputs[query]) & 1)) sign = -1;
    const ExactValue magnitude = kind == PrimitiveKind::E2 ? ExactValue(0, Rational(1, 2)) : ExactValue(0, 0, Rational(1, 3));
    return sign > 0 ? magnitude : -magnitude;
}

Bit node_output(std::span<const Bit> inputs, Bit alice_outcome) {
    if (inputs.empty()) throw std::invalid_argument("node_output needs at least one input");
    return static_cast<Bit>((inputs[0] ^ alice_outcome) & 1);
}

Bit decode_guess(Bit message, std::span<const Bit> outcomes) {
    Bit guess = message & 1;
    for (Bit b : outcomes) guess ^= (b & 1);
    return guess;
}

}  // namespace earac
