#ifndef INTERVALKIT_VERSION_HPP
#define INTERVALKIT_VERSION_HPP

namespace intervalkit {

inline constexpr const char* version = "0.1.0";

} // namespace intervalkit

#endif // INTERVALKIT_VERSION_HPP
