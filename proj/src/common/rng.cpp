#include "aclab/rng.hpp"

#include <bit>
#include <limits>

namespace aclab {

BernoulliStream::BernoulliStream(Engine& engine, const RationalProb& p)
    : engine_(&engine),
      num_(static_cast<std::uint64_t>(p.num())),
      den_(static_cast<std::uint64_t>(p.den()))
{
    if (std::has_single_bit(den_) && den_ <= (std::uint64_t{1} << 32)) {
        pow2_ = true;
        shift_ = static_cast<unsigned>(std::countr_zero(den_));
    }
}

std::uint64_t BernoulliStream::uniform_below()
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % den_;
    std::uint64_t r;
    do {
        r = (*engine_)();
    } while (r >= limit);
    return r % den_;
}

bool BernoulliStream::next()
{
    if (num_ == 0) return false;
    if (num_ == den_) return true;
    if (pow2_) {
        if (bits_left_ < shift_) {
            buffer_ = (*engine_)();
            bits_left_ = 64;
        }
        const std::uint64_t x = buffer_ & (den_ - 1);
        buffer_ >>= shift_;
        bits_left_ -= shift_;
        return x < num_;
    }
    return uniform_below() < num_;
}

} // namespace aclab
