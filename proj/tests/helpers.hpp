#pragma once

#include <stdexcept>
#include <utility>

#include "mdsr/errors.hpp"

namespace testutil {

/// Runs fn, which must throw mdsr::Error, and hands back the error class.
template <typename Fn>
mdsr::Errc thrown_code(Fn&& fn) {
    try {
        std::forward<Fn>(fn)();
    } catch (const mdsr::Error& e) {
        return e.code();
    }
    throw std::logic_error("expected an mdsr::Error, nothing was thrown");
}

}  // namespace testutil
