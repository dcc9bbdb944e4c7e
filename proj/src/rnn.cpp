#include "turingnet/rnn.hpp"

#include "turingnet/ffn.hpp"

namespace turingnet {

void RnnEncDec::validate() const {
    for (const RatMat* m : {&W, &V, &U})
        if (m->rows() != d || m->cols() != d)
            throw ShapeError("rnn matrices must be " + std::to_string(d) + "x" + std::to_string(d));
}

RnnRun rnn_run(const RnnEncDec& rnn, const std::vector<RatVec>& X, std::size_t r) {
    rnn.validate();
    RnnRun out;
    out.h.push_back(RatVec(rnn.d));
    for (const auto& x : X) {
        if (x.size() != rnn.d) throw ShapeError("rnn input has the wrong dimension");
        out.h.push_back(sigma_pl(x * rnn.W + out.h.back() * rnn.V));
    }
    out.g.push_back(out.h.back());
    for (std::size_t t = 0; t < r; ++t) out.g.push_back(sigma_pl(out.g.back() * rnn.U));
    return out;
}

}  // namespace turingnet
