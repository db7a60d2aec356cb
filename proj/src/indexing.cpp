#include "mdsr/indexing.hpp"

#include <string>

#include "mdsr/errors.hpp"

namespace mdsr {

IndexSystem::IndexSystem(std::uint32_t base, std::uint32_t k)
    : base_(base), k_(k), length_(1) {
    if (base < 2) raise(Errc::bad_digit, "base must be at least 2");
    if (k < 1) raise(Errc::bad_position, "need at least one digit position");
    for (std::uint32_t i = 0; i < k; ++i) {
        if (length_ > (std::uint64_t{1} << 40) / base) {
            raise(Errc::index_out_of_range, "index space too large");
        }
        length_ *= base;
    }
}

std::vector<std::uint32_t> IndexSystem::phi(std::uint64_t m) const {
    if (m < 1 || m > length_) {
        raise(Errc::index_out_of_range,
              "m = " + std::to_string(m) + " outside 1.." + std::to_string(length_));
    }
    std::vector<std::uint32_t> digits(k_);
    std::uint64_t v = m - 1;
    for (std::uint32_t i = k_; i-- > 0;) {
        digits[i] = static_cast<std::uint32_t>(v % base_);
        v /= base_;
    }
    return digits;
}

std::uint64_t IndexSystem::phi_inv(const std::vector<std::uint32_t>& digits) const {
    if (digits.size() != k_) {
        raise(Errc::bad_digit, "expected " + std::to_string(k_) + " digits");
    }
    std::uint64_t v = 0;
    for (std::uint32_t d : digits) {
        if (d >= base_) {
            raise(Errc::bad_digit,
                  "digit " + std::to_string(d) + " not below base " + std::to_string(base_));
        }
        v = v * base_ + d;
    }
    return v + 1;
}

std::uint64_t IndexSystem::digit_shift(std::uint64_t m, std::uint32_t i,
                                       std::uint32_t r) const {
    if (i < 1 || i > k_) {
        raise(Errc::bad_position, "position " + std::to_string(i) + " outside 1.." +
                                      std::to_string(k_));
    }
    if (r >= base_) {
        raise(Errc::bad_digit, "shift " + std::to_string(r) + " not below base");
    }
    std::vector<std::uint32_t> digits = phi(m);
    digits[i - 1] = (digits[i - 1] + r) % base_;
    return phi_inv(digits);
}

std::vector<std::size_t> IndexSystem::shift_map(std::uint32_t i, std::uint32_t r) const {
    std::vector<std::size_t> map(length_);
    for (std::uint64_t m = 1; m <= length_; ++m) {
        map[m - 1] = static_cast<std::size_t>(digit_shift(m, i, r));
    }
    return map;
}

}  // namespace mdsr
