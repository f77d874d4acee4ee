// Scalar reference kernels and AVX2 variants. This translation unit is built
// with -ffp-contract=off so both paths evaluate the same mul/add trees and the
// equivalence tests can assert exact equality.

#include "gl3d/kernels.hpp"

#include <cstdlib>

#if defined(__x86_64__) || defined(_M_X64)
#define GL3D_X86 1
#include <immintrin.h>
#else
#define GL3D_X86 0
#endif

namespace gl3d::kernels {

double sum_pot_scalar(const std::complex<double>* u, size_t n) {
    double acc0 = 0.0, acc1 = 0.0;
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        double m0 = 1.0 - (u[i].real() * u[i].real() + u[i].imag() * u[i].imag());
        double m1 = 1.0 - (u[i + 1].real() * u[i + 1].real() + u[i + 1].imag() * u[i + 1].imag());
        acc0 += m0 * m0;
        acc1 += m1 * m1;
    }
    if (i < n) {
        double m = 1.0 - (u[i].real() * u[i].real() + u[i].imag() * u[i].imag());
        acc0 += m * m;
    }
    return acc0 + acc1;
}

double sum_grad_sq_scalar(const std::complex<double>* a, const std::complex<double>* b, size_t n) {
    double acc0 = 0.0, acc1 = 0.0;
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        double r0 = a[i].real() - b[i].real();
        double i0 = a[i].imag() - b[i].imag();
        double r1 = a[i + 1].real() - b[i + 1].real();
        double i1 = a[i + 1].imag() - b[i + 1].imag();
        acc0 += r0 * r0 + i0 * i0;
        acc1 += r1 * r1 + i1 * i1;
    }
    if (i < n) {
        double r = a[i].real() - b[i].real();
        double im = a[i].imag() - b[i].imag();
        acc0 += r * r + im * im;
    }
    return acc0 + acc1;
}

void affine_max_scalar(const AffineMaxTable& t, const double* xs, const double* ys,
                       const double* zs, size_t n, double* val, int32_t* active) {
    for (size_t p = 0; p < n; ++p) {
        double x = xs[p], y = ys[p], z = zs[p];
        double best = 0.0;
        int32_t bestIdx = 0;
        for (int i = 0; i < t.k; ++i) {
            int base = i * t.m;
            double inner = t.c[base] - ((t.nx[base] * x + t.ny[base] * y) + t.nz[base] * z);
            int32_t innerIdx = base;
            for (int j = 1; j < t.m; ++j) {
                int q = base + j;
                double v = t.c[q] - ((t.nx[q] * x + t.ny[q] * y) + t.nz[q] * z);
                if (v > inner) {
                    inner = v;
                    innerIdx = q;
                }
            }
            double zi = t.zstar[i] - inner;
            if (i == 0 || zi > best) {
                best = zi;
                bestIdx = innerIdx;
            }
        }
        val[p] = best;
        active[p] = bestIdx;
    }
}

#if GL3D_X86

__attribute__((target("avx2"))) static double sum_pot_avx2(const std::complex<double>* u, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const double* d = reinterpret_cast<const double*>(u);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d c01 = _mm256_loadu_pd(d + 2 * i);      // re0 im0 re1 im1
        __m256d c23 = _mm256_loadu_pd(d + 2 * i + 4);  // re2 im2 re3 im3
        __m256d sq01 = _mm256_mul_pd(c01, c01);
        __m256d sq23 = _mm256_mul_pd(c23, c23);
        __m256d mods = _mm256_hadd_pd(sq01, sq23);  // |u0|^2 |u2|^2 |u1|^2 |u3|^2
        __m256d m = _mm256_sub_pd(_mm256_set1_pd(1.0), mods);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(m, m));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        double m = 1.0 - (u[i].real() * u[i].real() + u[i].imag() * u[i].imag());
        tail += m * m;
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + tail;
}

__attribute__((target("avx2"))) static double sum_grad_sq_avx2(const std::complex<double>* a,
                                                               const std::complex<double>* b,
                                                               size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const double* da = reinterpret_cast<const double*>(a);
    const double* db = reinterpret_cast<const double*>(b);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(da + 2 * i);
        __m256d vb = _mm256_loadu_pd(db + 2 * i);
        __m256d dfr = _mm256_sub_pd(va, vb);  // r0 i0 r1 i1
        acc = _mm256_add_pd(acc, _mm256_mul_pd(dfr, dfr));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        double r = a[i].real() - b[i].real();
        double im = a[i].imag() - b[i].imag();
        tail += r * r + im * im;
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + tail;
}

__attribute__((target("avx2"))) static void affine_max_avx2(const AffineMaxTable& t,
                                                            const double* xs, const double* ys,
                                                            const double* zs, size_t n,
                                                            double* val, int32_t* active) {
    size_t p = 0;
    for (; p + 4 <= n; p += 4) {
        __m256d x = _mm256_loadu_pd(xs + p);
        __m256d y = _mm256_loadu_pd(ys + p);
        __m256d z = _mm256_loadu_pd(zs + p);
        __m256d best = _mm256_setzero_pd();
        __m256d bestIdx = _mm256_setzero_pd();
        for (int i = 0; i < t.k; ++i) {
            int base = i * t.m;
            __m256d inner = _mm256_sub_pd(
                _mm256_set1_pd(t.c[base]),
                _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(t.nx[base]), x),
                                            _mm256_mul_pd(_mm256_set1_pd(t.ny[base]), y)),
                              _mm256_mul_pd(_mm256_set1_pd(t.nz[base]), z)));
            __m256d innerIdx = _mm256_set1_pd(double(base));
            for (int j = 1; j < t.m; ++j) {
                int q = base + j;
                __m256d v = _mm256_sub_pd(
                    _mm256_set1_pd(t.c[q]),
                    _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(t.nx[q]), x),
                                                _mm256_mul_pd(_mm256_set1_pd(t.ny[q]), y)),
                                  _mm256_mul_pd(_mm256_set1_pd(t.nz[q]), z)));
                __m256d gt = _mm256_cmp_pd(v, inner, _CMP_GT_OQ);
                inner = _mm256_blendv_pd(inner, v, gt);
                innerIdx = _mm256_blendv_pd(innerIdx, _mm256_set1_pd(double(q)), gt);
            }
            __m256d zi = _mm256_sub_pd(_mm256_set1_pd(t.zstar[i]), inner);
            if (i == 0) {
                best = zi;
                bestIdx = innerIdx;
            } else {
                __m256d gt = _mm256_cmp_pd(zi, best, _CMP_GT_OQ);
                best = _mm256_blendv_pd(best, zi, gt);
                bestIdx = _mm256_blendv_pd(bestIdx, innerIdx, gt);
            }
        }
        _mm256_storeu_pd(val + p, best);
        alignas(32) double idxLanes[4];
        _mm256_store_pd(idxLanes, bestIdx);
        for (int l = 0; l < 4; ++l) active[p + l] = int32_t(idxLanes[l]);
    }
    if (p < n) affine_max_scalar(t, xs + p, ys + p, zs + p, n - p, val + p, active + p);
}

#endif  // GL3D_X86

static const KernelTable kScalar{sum_pot_scalar, sum_grad_sq_scalar, affine_max_scalar, "scalar"};

#if GL3D_X86
static const KernelTable kAvx2{sum_pot_avx2, sum_grad_sq_avx2, affine_max_avx2, "avx2"};
#endif

bool avx2_available() {
#if GL3D_X86
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if GL3D_X86
    if (avx2_available()) return &kAvx2;
#endif
    return nullptr;
}

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        const char* force = std::getenv("GL3D_FORCE_SCALAR");
        if (force && force[0] == '1') return &kScalar;
        if (const KernelTable* t = avx2_table()) return t;
        return &kScalar;
    }();
    return *chosen;
}

}  // namespace gl3d::kernels
