#pragma once

#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace earac::detail {

// Minimal RAII holder for an mpfr_t.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t bits = 256) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
    BigFloat(const BigFloat&) = delete;
    BigFloat& operator=(const BigFloat&) = delete;
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    std::string to_string(int significant_digits) const {
        if (mpfr_zero_p(v_)) return "0";
        char* buf = nullptr;
        mpfr_asprintf(&buf, "%.*Rg", significant_digits, v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

private:
    mpfr_t v_;
};

}  // namespace earac::detail
