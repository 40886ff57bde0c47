#pragma once

namespace chariot {

/// Selects the OpenMP kernel or the plain loop it is tested against.
enum class Execution { serial, parallel };

}  // namespace chariot
