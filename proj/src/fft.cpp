#include "weldkit/fft.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

namespace weldkit {

namespace {

// FFTW planning is not thread-safe; plans are cached per (w, h, kind)
// and executed through the new-array interface, which is. FFTW_UNALIGNED
// keeps the chosen codelets independent of buffer alignment, so results do
// not depend on which worker ran the transform.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    enum Kind { Forward = FFTW_FORWARD, Backward = FFTW_BACKWARD, RealForward = 2, RealBackward = 3 };

    fftw_plan get(std::size_t w, std::size_t h, int kind) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(w, h, kind);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const int n0 = static_cast<int>(h), n1 = static_cast<int>(w);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        std::vector<Complex> c(w * h);
        std::vector<double> r(w * h);
        auto* cp = reinterpret_cast<fftw_complex*>(c.data());
        fftw_plan plan = nullptr;
        if (kind == RealForward) {
            plan = fftw_plan_dft_r2c_2d(n0, n1, r.data(), cp, flags);
        } else if (kind == RealBackward) {
            plan = fftw_plan_dft_c2r_2d(n0, n1, cp, r.data(), flags);
        } else {
            std::vector<Complex> out(w * h);
            plan = fftw_plan_dft_2d(n0, n1, cp, reinterpret_cast<fftw_complex*>(out.data()), kind, flags);
        }
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

ComplexField run(const ComplexField& in, int sign) {
    ComplexField out{in.width, in.height, std::vector<Complex>(in.data.size())};
    fftw_plan plan = cache().get(in.width, in.height, sign);
    // FFTW does not modify the input of an out-of-place complex transform.
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data.data())),
                     reinterpret_cast<fftw_complex*>(out.data.data()));
    return out;
}

}  // namespace

ComplexField forward_transform(const ComplexField& field) { return run(field, FFTW_FORWARD); }

ComplexField forward_transform(const Field& field) {
    ComplexField c{field.width, field.height, std::vector<Complex>(field.data.begin(), field.data.end())};
    return run(c, FFTW_FORWARD);
}

ComplexField inverse_transform(const ComplexField& spectrum) {
    ComplexField out = run(spectrum, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(out.data.size());
    for (auto& v : out.data) v *= scale;
    return out;
}

Field inverse_transform_real(const ComplexField& spectrum) {
    const ComplexField c = inverse_transform(spectrum);
    Field out(c.width, c.height);
    for (std::size_t i = 0; i < c.data.size(); ++i) out.data[i] = c.data[i].real();
    return out;
}

ComplexField forward_real(const Field& field) {
    ComplexField out{field.width / 2 + 1, field.height, {}};
    out.data.resize(out.width * out.height);
    fftw_plan plan = cache().get(field.width, field.height, PlanCache::RealForward);
    // Out-of-place r2c leaves the input untouched.
    fftw_execute_dft_r2c(plan, const_cast<double*>(field.data.data()), reinterpret_cast<fftw_complex*>(out.data.data()));
    return out;
}

Field inverse_real(const ComplexField& half, std::size_t width) {
    Field out(width, half.height);
    fftw_plan plan = cache().get(width, half.height, PlanCache::RealBackward);
    // c2r overwrites its input.
    std::vector<Complex> scratch = half.data;
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(scratch.data()), out.data.data());
    const double scale = 1.0 / static_cast<double>(out.data.size());
    for (double& v : out.data) v *= scale;
    return out;
}

std::size_t good_transform_size(std::size_t n) {
    for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

}  // namespace weldkit
