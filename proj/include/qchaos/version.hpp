#pragma once

#define QCHAOS_VERSION "0.1.0"

namespace qchaos {
inline const char* version() { return QCHAOS_VERSION; }
}
