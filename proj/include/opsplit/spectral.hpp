#pragma once

#include "opsplit/field.hpp"

#include <memory>
#include <span>
#include <vector>

namespace opsplit {

class FftPlan;

/// Uniform periodic grid on [0, 2π] with nodes x_j = j·2π/N, j = 1..N.
///
/// Value index n holds node x_{n+1}. N must be a power of two, at least 8.
/// The grid owns the (shared, immutable) FFT plans used by the transforms.
class PeriodicGrid {
public:
    explicit PeriodicGrid(std::size_t n);

    std::size_t size() const { return n_; }
    double spacing() const;
    /// Node x_j for j = 1..N.
    double node(std::size_t j) const;
    std::vector<double> nodes() const;

    /// Wavenumber held at storage index i (FFT order: 0, 1, ..., N/2, -N/2+1, ..., -1).
    int wavenumber(std::size_t index) const;
    /// Storage index of wavenumber k, for k in -N/2+1 .. N/2.
    std::size_t index_of(int k) const;

    /// Unnormalized DFT: out_k = Σ_n in_n e^{∓2πi k n / N}.
    void fft(std::span<const complex> in, std::span<complex> out, bool inverse) const;

    /// h·e^{-ikh} per storage index (forward normalization and node shift).
    const std::vector<complex>& forward_factors() const { return forward_factors_; }
    /// e^{ikh}/(2π) per storage index.
    const std::vector<complex>& inverse_factors() const { return inverse_factors_; }

private:
    std::size_t n_;
    std::shared_ptr<const FftPlan> plan_;
    std::vector<complex> forward_factors_;
    std::vector<complex> inverse_factors_;
};

/// Fourier coefficients û_k for k = -N/2+1 .. N/2.
///
/// Normalization: û_k = h Σ_j u(x_j) e^{-ik x_j} with h = 2π/N, and
/// u(x_j) = (1/2π) Σ_k û_k e^{ik x_j}. Storage follows FFT order; use
/// operator[] with a signed wavenumber.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(std::size_t n) : coeffs_(n) {}

    std::size_t size() const { return coeffs_.size(); }

    complex& operator[](int k) { return coeffs_[storage_index(k)]; }
    const complex& operator[](int k) const { return coeffs_[storage_index(k)]; }

    std::vector<complex>& raw() { return coeffs_; }
    const std::vector<complex>& raw() const { return coeffs_; }

private:
    std::size_t storage_index(int k) const;
    std::vector<complex> coeffs_;
};

struct SpectralOptions {
    /// 2/3-rule truncation of the quadratic term. Off by default.
    bool dealias = false;
};

SpectralField forward_dft(const PeriodicGrid& grid, const Field& field);
Field inverse_dft(const PeriodicGrid& grid, const SpectralField& spec, double time = 0.0);

/// Exact diffusion over complex time τ: û_k ← e^{-ν k² τ} û_k. Requires Re(τ) ≥ 0.
SpectralField diffusion_flow_spectral(const SpectralField& spec, double nu, complex tau);

/// Spectral right-hand side of u_t + (u²/2)_x = 0, i.e. -(ik/2)·F(u²).
SpectralField conservation_rhs_spectral(const PeriodicGrid& grid, const SpectralField& spec,
                                        const SpectralOptions& options = {});

/// Classical RK4 on the conservation law over complex time τ in `substeps`
/// equal steps. Counts one A-flow evaluation in `counter` when given.
SpectralField conservation_flow_spectral(const PeriodicGrid& grid, const SpectralField& spec,
                                         complex tau, int substeps, WorkCounter* counter = nullptr,
                                         const SpectralOptions& options = {});

struct ReferenceOptions {
    /// Drop the nonlinear term, leaving pure diffusion. For testing.
    bool nonlinear = true;
    SpectralOptions spectral{};
};

/// Integrating-factor RK4 for the full equation u_t + u u_x = ν u_xx.
///
/// The step is shrunk to T / ceil(T/dt) so that the run lands on T exactly.
Field reference_solve_periodic(const PeriodicGrid& grid, const Field& u0, double nu, double final_time,
                               double dt, const ReferenceOptions& options = {});

} // namespace opsplit
