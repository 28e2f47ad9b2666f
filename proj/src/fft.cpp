#include "opuc/fft.hpp"

#include <memory>
#include <mutex>
#include <unordered_map>

namespace opuc::fft {

namespace {

// Half-size twiddle table for a given transform size, built once per size.
// polar() per entry keeps the table accurate to 1 ulp at large sizes.
const std::vector<cdouble>& twiddles(std::size_t n) {
    static std::mutex mu;
    static std::unordered_map<std::size_t, std::unique_ptr<std::vector<cdouble>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<std::vector<cdouble>>(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j)
            (*slot)[j] = std::polar(1.0, -two_pi * double(j) / double(n));
    }
    return *slot;
}

}  // namespace

void transform(std::vector<cdouble>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const auto& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cdouble tw = w[j * stride];
                if (inverse) tw = std::conj(tw);
                cdouble u = a[i + j];
                cdouble v = a[i + j + len / 2] * tw;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double s = 1.0 / double(n);
        for (auto& x : a) x *= s;
    }
}

std::vector<cdouble> multiply(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_size = a.size() + b.size() - 1;
    if (a.size() * b.size() <= 1024) {  // classical path for small operands
        std::vector<cdouble> out(out_size, cdouble(0.0, 0.0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    }
    const std::size_t n = next_pow2(out_size);
    std::vector<cdouble> fa(n, cdouble(0.0, 0.0)), fb(n, cdouble(0.0, 0.0));
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    transform(fa, false);
    transform(fb, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    transform(fa, true);
    fa.resize(out_size);
    return fa;
}

std::vector<cdouble> evaluate_on_pow2_grid(const std::vector<cdouble>& coeffs, std::size_t M) {
    if (!is_pow2(M)) throw std::invalid_argument("evaluate_on_pow2_grid: M must be a power of two");
    if (coeffs.size() > M)
        throw std::invalid_argument("evaluate_on_pow2_grid: M must be >= number of coefficients");
    std::vector<cdouble> buf(M, cdouble(0.0, 0.0));
    std::copy(coeffs.begin(), coeffs.end(), buf.begin());
    // sum_j c_j e^{+2 pi i jk/M} is the unscaled inverse transform
    transform(buf, true);
    for (auto& x : buf) x *= double(M);
    return buf;
}

}  // namespace opuc::fft
