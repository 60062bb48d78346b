#include "kdv/sl_parameters.hpp"

namespace kdv {

const SLParameters& sl_parameters() {
    static const SLParameters params = [] {
        SLParameters p;
        p.sigma1 << 0.0, 1.0, 1.0, 0.0;
        p.sigma2 << 1.0, 0.0, 0.0, 0.0;
        p.gamma << 0.0, 0.0, 0.0, I_unit;
        return p;
    }();
    return params;
}

}  // namespace kdv
