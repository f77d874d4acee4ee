#pragma once

// Hot inner loops: scalar reference kernels plus AVX2 variants selected at
// runtime. The scalar versions are the semantics; the vector versions must
// match them bit for bit (the kernel TU is built with FP contraction off).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gl3d::kernels {

// Flattened max-of-affine table for the minimal-connection potential
// extension: value(x) = max_i ( zstar[i] - max_j ( c[i*m+j] - n_ij . x ) ).
// Directions with |n|=0 encode the constant term (c=0 there).
struct AffineMaxTable {
    int k = 0;  // outer groups
    int m = 0;  // directions per group
    std::vector<double> nx, ny, nz, c;  // size k*m
    std::vector<double> zstar;          // size k
};

using SumPotFn = double (*)(const std::complex<double>*, size_t);
using SumGradSqFn = double (*)(const std::complex<double>*, const std::complex<double>*, size_t);
using AffineMaxFn = void (*)(const AffineMaxTable&, const double*, const double*, const double*,
                             size_t, double*, int32_t*);

struct KernelTable {
    SumPotFn sum_pot;         // sum of (1-|u|^2)^2
    SumGradSqFn sum_grad_sq;  // sum of |a[i]-b[i]|^2
    AffineMaxFn affine_max;   // batched max-of-affine with argmax index
    const char* isa;
};

// Scalar reference implementations (always available).
double sum_pot_scalar(const std::complex<double>* u, size_t n);
double sum_grad_sq_scalar(const std::complex<double>* a, const std::complex<double>* b, size_t n);
void affine_max_scalar(const AffineMaxTable& t, const double* xs, const double* ys,
                       const double* zs, size_t n, double* val, int32_t* active);

// Runtime-selected table (AVX2 when the CPU has it, scalar otherwise;
// GL3D_FORCE_SCALAR=1 in the environment forces the reference path).
const KernelTable& active();
bool avx2_available();
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when unsupported at build or run time

}  // namespace gl3d::kernels
