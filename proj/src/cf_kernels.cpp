// Inner sum of the CF inversion: a long cosine/sine series per W sample.
// Scalar reference evaluates the trig terms directly; the AVX2 variant runs
// four W lanes with a phase-rotation recurrence, re-anchored on exact
// sin/cos every 256 terms to keep rounding drift below ~1e-13.

#include <cmath>
#include <cstddef>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define POLWORK_HAVE_AVX2_DISPATCH 1
#endif

namespace polwork::workdist::kernels {

void cf_sum_scalar(const double* re, const double* im, std::size_t n, double d,
                   const double* w, std::size_t nw, double* out) {
    for (std::size_t j = 0; j < nw; ++j) {
        const double x = d * w[j];
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double phase = x * static_cast<double>(k);
            acc += re[k] * std::cos(phase) + im[k] * std::sin(phase);
        }
        out[j] = acc;
    }
}

#ifdef POLWORK_HAVE_AVX2_DISPATCH

__attribute__((target("avx2,fma"))) static void cf_sum_avx2(const double* re, const double* im,
                                                            std::size_t n, double d,
                                                            const double* w, std::size_t nw,
                                                            double* out) {
    constexpr std::size_t resync = 256;
    std::size_t j = 0;
    for (; j + 4 <= nw; j += 4) {
        double step_c[4], step_s[4];
        for (int l = 0; l < 4; ++l) {
            step_c[l] = std::cos(d * w[j + l]);
            step_s[l] = std::sin(d * w[j + l]);
        }
        const __m256d sc = _mm256_loadu_pd(step_c);
        const __m256d ss = _mm256_loadu_pd(step_s);
        __m256d acc = _mm256_setzero_pd();
        __m256d c = _mm256_setzero_pd(), s = _mm256_setzero_pd();
        for (std::size_t k = 0; k < n; ++k) {
            if (k % resync == 0) {
                double c0[4], s0[4];
                for (int l = 0; l < 4; ++l) {
                    const double phase = d * w[j + l] * static_cast<double>(k);
                    c0[l] = std::cos(phase);
                    s0[l] = std::sin(phase);
                }
                c = _mm256_loadu_pd(c0);
                s = _mm256_loadu_pd(s0);
            }
            acc = _mm256_fmadd_pd(_mm256_set1_pd(re[k]), c, acc);
            acc = _mm256_fmadd_pd(_mm256_set1_pd(im[k]), s, acc);
            const __m256d c_next = _mm256_fmsub_pd(c, sc, _mm256_mul_pd(s, ss));
            s = _mm256_fmadd_pd(s, sc, _mm256_mul_pd(c, ss));
            c = c_next;
        }
        _mm256_storeu_pd(out + j, acc);
    }
    if (j < nw) cf_sum_scalar(re, im, n, d, w + j, nw - j, out + j);
}

bool avx2_active() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

void cf_sum_auto(const double* re, const double* im, std::size_t n, double d, const double* w,
                 std::size_t nw, double* out) {
    if (avx2_active())
        cf_sum_avx2(re, im, n, d, w, nw, out);
    else
        cf_sum_scalar(re, im, n, d, w, nw, out);
}

#else

bool avx2_active() { return false; }

void cf_sum_auto(const double* re, const double* im, std::size_t n, double d, const double* w,
                 std::size_t nw, double* out) {
    cf_sum_scalar(re, im, n, d, w, nw, out);
}

#endif

}  // namespace polwork::workdist::kernels
