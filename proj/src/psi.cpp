#include "bstab/psi.hpp"

namespace bstab {

std::string_view to_string(Tri t) {
    switch (t) {
        case Tri::False: return "false";
        case Tri::True: return "true";
        case Tri::Unknown: return "unknown";
    }
    return "?";
}

}  // namespace bstab
