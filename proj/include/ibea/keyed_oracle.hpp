#pragma once

#include <utility>

#include "ibea/cipher.hpp"
#include "ibea/oracle.hpp"

namespace ibea::cipher {

// In-process oracle: a fixed-key instance of the cipher behind the
// chosen-plaintext interface.
class KeyedOracle final : public EncryptionOracle {
public:
    explicit KeyedOracle(KeyMaterial key) : key_(std::move(key)) { key_.validate(); }

    Image encrypt_chosen(const WideImage& chosen) override {
        return encrypt(chosen, key_).cipher;
    }

private:
    KeyMaterial key_;
};

} // namespace ibea::cipher
