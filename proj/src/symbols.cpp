#include "turingnet/symbols.hpp"

#include <stdexcept>

namespace turingnet {

std::vector<std::string> tokenize(const std::vector<std::string>& alphabet, std::string_view w) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < w.size()) {
        const std::string* best = nullptr;
        for (const auto& a : alphabet)
            if (!a.empty() && w.substr(i, a.size()) == a && (!best || a.size() > best->size()))
                best = &a;
        if (!best)
            throw std::invalid_argument("symbol at offset " + std::to_string(i) + " of \"" +
                                        std::string(w) + "\" is not in the alphabet");
        out.push_back(*best);
        i += best->size();
    }
    return out;
}

}  // namespace turingnet
