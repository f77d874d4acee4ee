#include <complex>
#include <random>

#include "doctest.h"
#include "gl3d/kernels.hpp"

using namespace gl3d;

namespace {

std::vector<std::complex<double>> random_complex(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    std::vector<std::complex<double>> v(n);
    for (auto& c : v) c = {uni(rng), uni(rng)};
    return v;
}

}  // namespace

TEST_CASE("avx2 sum kernels match the scalar reference") {
    const kernels::KernelTable* avx = kernels::avx2_table();
    if (!avx) return;  // host without AVX2: nothing to compare
    for (size_t n : {size_t(1), size_t(5), size_t(64), size_t(1001)}) {
        auto a = random_complex(n, 11 + n);
        auto b = random_complex(n, 17 + n);
        double s0 = kernels::sum_pot_scalar(a.data(), n);
        double s1 = avx->sum_pot(a.data(), n);
        CHECK(s1 == doctest::Approx(s0).epsilon(1e-13));
        double g0 = kernels::sum_grad_sq_scalar(a.data(), b.data(), n);
        double g1 = avx->sum_grad_sq(a.data(), b.data(), n);
        CHECK(g1 == doctest::Approx(g0).epsilon(1e-13));
    }
}

TEST_CASE("avx2 affine-max kernel is bit-identical to scalar") {
    const kernels::KernelTable* avx = kernels::avx2_table();
    if (!avx) return;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        kernels::AffineMaxTable t;
        t.k = 1 + int(rng() % 5);
        t.m = 2 * t.k;
        int total = t.k * t.m;
        t.nx.resize(total);
        t.ny.resize(total);
        t.nz.resize(total);
        t.c.resize(total);
        t.zstar.resize(t.k);
        for (int i = 0; i < total; ++i) {
            t.nx[i] = uni(rng);
            t.ny[i] = uni(rng);
            t.nz[i] = uni(rng);
            t.c[i] = uni(rng);
        }
        for (int i = 0; i < t.k; ++i) t.zstar[i] = uni(rng);

        size_t n = 1 + (rng() % 37);
        std::vector<double> xs(n), ys(n), zs(n);
        for (size_t i = 0; i < n; ++i) {
            xs[i] = uni(rng);
            ys[i] = uni(rng);
            zs[i] = uni(rng);
        }
        std::vector<double> v0(n), v1(n);
        std::vector<int32_t> a0(n), a1(n);
        kernels::affine_max_scalar(t, xs.data(), ys.data(), zs.data(), n, v0.data(), a0.data());
        avx->affine_max(t, xs.data(), ys.data(), zs.data(), n, v1.data(), a1.data());
        for (size_t i = 0; i < n; ++i) {
            CHECK(v0[i] == v1[i]);  // exact
            CHECK(a0[i] == a1[i]);
        }
    }
}

TEST_CASE("runtime dispatch reports an ISA") {
    const auto& k = kernels::active();
    CHECK((std::string(k.isa) == "scalar" || std::string(k.isa) == "avx2"));
}
