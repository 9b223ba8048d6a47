#pragma once

#include "ibea/image.hpp"

namespace ibea {

// The chosen-plaintext capability and nothing else. An attacker holding
// this interface can submit plaintexts and observe ciphertexts; it has
// no path to key material.
class EncryptionOracle {
public:
    virtual ~EncryptionOracle() = default;

    // Deterministic: equal inputs must yield equal ciphers.
    virtual Image encrypt_chosen(const WideImage& chosen) = 0;
};

// Pass-through wrapper that counts queries.
class CountingOracle final : public EncryptionOracle {
public:
    explicit CountingOracle(EncryptionOracle& inner) : inner_(inner) {}

    Image encrypt_chosen(const WideImage& chosen) override {
        ++count_;
        return inner_.encrypt_chosen(chosen);
    }

    long query_count() const { return count_; }

private:
    EncryptionOracle& inner_;
    long count_ = 0;
};

} // namespace ibea
