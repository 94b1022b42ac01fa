#include "bstab/walls.hpp"

namespace bstab {

std::string_view to_string(Order o) {
    switch (o) {
        case Order::Less: return "Less";
        case Order::Equal: return "Equal";
        case Order::Greater: return "Greater";
    }
    return "?";
}

}  // namespace bstab
