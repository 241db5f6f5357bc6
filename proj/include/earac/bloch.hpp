#pragma once

// Measurement directions on the Bloch sphere and a classical sampler that
// reproduces the outcome statistics of a shared singlet.
//
// Outcome labels: Alice's A is 0 for the "+" state of her basis, Bob's B is 0
// for the "-" vector and 1 for "+". With these labels the singlet's
// anticorrelation is absorbed and
//
//     P(A xor B = 0) = (1 + a.b) / 2
//
// for measurement directions a (Alice) and b (Bob). Both marginals are
// uniform, so the sampler draws A fairly and then B conditioned on A.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>

namespace earac {

using Bit = std::uint8_t;

class BlochVector {
public:
    static constexpr double kNormTolerance = 1e-12;

    // Normalizes (x, y, z). Throws std::invalid_argument for a zero or
    // non-finite vector.
    BlochVector(double x, double y, double z);

    double x() const { return v_[0]; }
    double y() const { return v_[1]; }
    double z() const { return v_[2]; }
    const std::array<double, 3>& components() const { return v_; }

    BlochVector operator-() const;
    friend bool operator==(const BlochVector&, const BlochVector&) = default;

private:
    struct Raw {};
    BlochVector(Raw, double x, double y, double z) : v_{x, y, z} {}
    std::array<double, 3> v_;
};

std::ostream& operator<<(std::ostream& os, const BlochVector& v);

// Inner product clamped to [-1, 1]. The expression order is fixed (no fused
// multiply-add) so batch kernels can reproduce it bit for bit.
inline double dot(const BlochVector& a, const BlochVector& b) {
    const double raw = a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
    return raw > 1.0 ? 1.0 : (raw < -1.0 ? -1.0 : raw);
}

// Probability that the two labelled outcomes agree.
inline double agreement_probability(double cosine) { return 0.5 * (1.0 + cosine); }

struct OutcomePair {
    Bit a_outcome = 0;
    Bit b_outcome = 0;
};

// One joint measurement of a fresh singlet along a (Alice) and b (Bob).
template <class Rng>
OutcomePair correlate(const BlochVector& a, const BlochVector& b, Rng& rng) {
    std::bernoulli_distribution fair(0.5);
    std::bernoulli_distribution agree(agreement_probability(dot(a, b)));
    const Bit first = fair(rng) ? 1 : 0;
    const Bit second = agree(rng) ? first : static_cast<Bit>(first ^ 1);
    return {first, second};
}

struct SteeringResult {
    Bit flip = 0;     // message bit sent by Alice
    Bit outcome = 0;  // Bob's raw outcome, 1 = "+"
    Bit corrected() const { return static_cast<Bit>(outcome ^ flip); }
};

// One round of turning a qubit code into an entanglement-assisted one: Alice
// measures her half of the singlet in the basis containing `codeword` and
// announces whether Bob's half collapsed onto it (flip = 0) or onto the
// orthogonal state (flip = 1). Bob measures along `bob_dir`; flipping his
// outcome by the message reproduces a direct measurement of the codeword.
template <class Rng>
SteeringResult steer_and_measure(const BlochVector& codeword, const BlochVector& bob_dir, Rng& rng) {
    const OutcomePair pair = correlate(codeword, bob_dir, rng);
    // A = 0 leaves Bob's half anti-aligned with the codeword in these labels.
    return {static_cast<Bit>(pair.a_outcome ^ 1), pair.b_outcome};
}

// Direct measurement of the pure state `state` along `dir`; 1 = "+".
template <class Rng>
Bit measure_state(const BlochVector& state, const BlochVector& dir, Rng& rng) {
    std::bernoulli_distribution plus(agreement_probability(dot(state, dir)));
    return plus(rng) ? 1 : 0;
}

}  // namespace earac
