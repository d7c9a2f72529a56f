#ifndef HADAMARD_VERSION_HPP
#define HADAMARD_VERSION_HPP

namespace hadamard {
inline constexpr const char* kVersion = "1.0.0";
}

#endif
