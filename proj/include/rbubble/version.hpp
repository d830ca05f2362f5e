#ifndef RBUBBLE_VERSION_HPP
#define RBUBBLE_VERSION_HPP

namespace rbubble {

constexpr const char* kVersion = "0.1.0";

}

#endif
