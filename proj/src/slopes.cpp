#include "bstab/slopes.hpp"

namespace bstab {

std::string_view to_string(Trichotomy t) {
    switch (t) {
        case Trichotomy::PositiveCh1: return "PositiveCh1";
        case Trichotomy::Ch1ZeroImPositive: return "Ch1ZeroImPositive";
        case Trichotomy::Ch1ZeroImZeroReNeg: return "Ch1ZeroImZeroReNeg";
        case Trichotomy::Violates: return "Violates";
    }
    return "?";
}

}  // namespace bstab
