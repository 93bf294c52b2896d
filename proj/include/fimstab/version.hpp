#ifndef FIMSTAB_VERSION_HPP
#define FIMSTAB_VERSION_HPP

namespace fimstab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fimstab

#endif  // FIMSTAB_VERSION_HPP
