#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

namespace betadyn::detail {

// Owning handle for an mpfr_t. Only the handful of operations the library
// needs are wrapped; everything else goes through get().
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t bits) {
        mpfr_init2(v_, bits);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(mpfr_prec_t bits, double value) : BigFloat(bits) { mpfr_set_d(v_, value, MPFR_RNDN); }

    BigFloat(const BigFloat& other) {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& other) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, other.v_);
    }
    BigFloat& operator=(const BigFloat& other) {
        if (this != &other) {
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& other) noexcept {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Same value at a different precision (rounded to nearest).
    BigFloat with_precision(mpfr_prec_t bits) const {
        BigFloat out(bits);
        mpfr_set(out.v_, v_, MPFR_RNDN);
        return out;
    }

private:
    mpfr_t v_;
};

}  // namespace betadyn::detail
