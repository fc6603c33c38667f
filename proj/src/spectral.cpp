#include "opsplit/spectral.hpp"

#include "opsplit/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace opsplit {

/// Pair of FFTW plans for one transform length. Plans are created with
/// FFTW_UNALIGNED so that fftw_execute_dft may run on any buffer, from any
/// thread.
class FftPlan {
public:
    explicit FftPlan(std::size_t n)
    {
        // Planning is not thread-safe in FFTW; callers hold planner_mutex().
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        const int len = static_cast<int>(n);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward_ = fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, flags);
        fftw_free(in);
        fftw_free(out);
    }
    ~FftPlan()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    void execute(std::span<const complex> in, std::span<complex> out, bool inverse) const
    {
        // FFTW takes a non-const input pointer but does not write to it for
        // out-of-place complex transforms.
        auto* src = reinterpret_cast<fftw_complex*>(const_cast<complex*>(in.data()));
        auto* dst = reinterpret_cast<fftw_complex*>(out.data());
        fftw_execute_dft(inverse ? backward_ : forward_, src, dst);
    }

    static std::mutex& planner_mutex()
    {
        static std::mutex m;
        return m;
    }

    static std::shared_ptr<const FftPlan> get(std::size_t n)
    {
        static std::map<std::size_t, std::weak_ptr<const FftPlan>> registry;
        std::lock_guard lock(planner_mutex());
        if (auto existing = registry[n].lock()) return existing;
        // Constructed under the lock; the destructor takes the same lock.
        std::shared_ptr<const FftPlan> plan(new FftPlan(n));
        registry[n] = plan;
        return plan;
    }

private:
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n && !(n & (n - 1)); }

void check_finite(const SpectralField& s, const char* what, int step)
{
    for (const auto& z : s.raw()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw BlowUpError(std::string(what) + ": non-finite value at internal step " +
                              std::to_string(step));
        }
    }
}

// y ← a + c·b, coefficient-wise.
SpectralField axpy(const SpectralField& a, complex c, const SpectralField& b)
{
    SpectralField out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.raw()[i] = a.raw()[i] + c * b.raw()[i];
    return out;
}

void truncate_two_thirds(const PeriodicGrid& grid, SpectralField& s)
{
    const int cutoff = static_cast<int>(grid.size()) / 3;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::abs(grid.wavenumber(i)) > cutoff) s.raw()[i] = 0.0;
    }
}

} // namespace

PeriodicGrid::PeriodicGrid(std::size_t n) : n_(n)
{
    if (n < 8 || !is_power_of_two(n)) {
        throw DimensionError("periodic grid size must be a power of two and at least 8, got " +
                             std::to_string(n));
    }
    plan_ = FftPlan::get(n);
    const double h = spacing();
    forward_factors_.resize(n);
    inverse_factors_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = wavenumber(i);
        // Nodes start at x_1 = h, hence the extra phase e^{-ikh}.
        forward_factors_[i] = h * std::polar(1.0, -k * h);
        inverse_factors_[i] = std::polar(1.0 / kTwoPi, k * h);
    }
}

double PeriodicGrid::spacing() const { return kTwoPi / static_cast<double>(n_); }

double PeriodicGrid::node(std::size_t j) const { return static_cast<double>(j) * spacing(); }

std::vector<double> PeriodicGrid::nodes() const
{
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = node(i + 1);
    return x;
}

int PeriodicGrid::wavenumber(std::size_t index) const
{
    const auto i = static_cast<long>(index);
    const auto n = static_cast<long>(n_);
    return static_cast<int>(i <= n / 2 ? i : i - n);
}

std::size_t PeriodicGrid::index_of(int k) const
{
    const auto n = static_cast<long>(n_);
    if (k <= -n / 2 || k > n / 2) {
        throw DimensionError("wavenumber " + std::to_string(k) + " outside -N/2+1..N/2");
    }
    return static_cast<std::size_t>(k >= 0 ? k : k + n);
}

void PeriodicGrid::fft(std::span<const complex> in, std::span<complex> out, bool inverse) const
{
    if (in.size() != n_ || out.size() != n_) {
        throw DimensionError("transform length mismatch: grid has " + std::to_string(n_) + " nodes");
    }
    plan_->execute(in, out, inverse);
}

std::size_t SpectralField::storage_index(int k) const
{
    const auto n = static_cast<long>(coeffs_.size());
    if (k <= -n / 2 || k > n / 2) {
        throw DimensionError("wavenumber " + std::to_string(k) + " outside -N/2+1..N/2");
    }
    return static_cast<std::size_t>(k >= 0 ? k : k + n);
}

SpectralField forward_dft(const PeriodicGrid& grid, const Field& field)
{
    const std::size_t n = grid.size();
    if (field.size() != n) {
        throw DimensionError("field has " + std::to_string(field.size()) + " samples, grid has " +
                             std::to_string(n));
    }
    SpectralField out(n);
    grid.fft(field.values, out.raw(), false);
    const auto& factors = grid.forward_factors();
    for (std::size_t i = 0; i < n; ++i) out.raw()[i] *= factors[i];
    return out;
}

Field inverse_dft(const PeriodicGrid& grid, const SpectralField& spec, double time)
{
    const std::size_t n = grid.size();
    if (spec.size() != n) {
        throw DimensionError("spectrum has " + std::to_string(spec.size()) + " modes, grid has " +
                             std::to_string(n));
    }
    const auto& factors = grid.inverse_factors();
    std::vector<complex> shifted(n);
    for (std::size_t i = 0; i < n; ++i) shifted[i] = spec.raw()[i] * factors[i];
    Field out;
    out.values.resize(n);
    out.grid = GridKind::Periodic;
    out.time = time;
    grid.fft(shifted, out.values, true);
    return out;
}

SpectralField diffusion_flow_spectral(const SpectralField& spec, double nu, complex tau)
{
    if (tau.real() < 0.0) {
        throw InadmissibleStepError("diffusion flow needs Re(tau) >= 0, got " + std::to_string(tau.real()));
    }
    SpectralField out(spec.size());
    const auto n = static_cast<long>(spec.size());
    for (long i = 0; i < n; ++i) {
        const double k = static_cast<double>(i <= n / 2 ? i : i - n);
        out.raw()[static_cast<std::size_t>(i)] = spec.raw()[static_cast<std::size_t>(i)] *
                                                 std::exp(-nu * k * k * tau);
    }
    return out;
}

SpectralField conservation_rhs_spectral(const PeriodicGrid& grid, const SpectralField& spec,
                                        const SpectralOptions& options)
{
    const std::size_t n = grid.size();
    SpectralField input = spec;
    if (options.dealias) truncate_two_thirds(grid, input);

    Field u = inverse_dft(grid, input);
    for (auto& v : u.values) v *= v;
    SpectralField out = forward_dft(grid, u);
    if (options.dealias) truncate_two_thirds(grid, out);

    const int nyquist = static_cast<int>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
        const int k = grid.wavenumber(i);
        // Odd derivative of the unpaired Nyquist mode is dropped.
        out.raw()[i] *= (k == nyquist) ? complex{} : complex{0.0, -0.5 * k};
    }
    return out;
}

SpectralField conservation_flow_spectral(const PeriodicGrid& grid, const SpectralField& spec,
                                         complex tau, int substeps, WorkCounter* counter,
                                         const SpectralOptions& options)
{
    if (substeps < 1) throw InputError("substeps must be at least 1");
    if (spec.size() != grid.size()) throw DimensionError("spectrum length does not match grid");
    if (counter) ++counter->a_evaluations;
    if (tau == complex{}) return spec;

    const complex dt = tau / static_cast<double>(substeps);
    SpectralField u = spec;
    for (int step = 1; step <= substeps; ++step) {
        const SpectralField k1 = conservation_rhs_spectral(grid, u, options);
        const SpectralField k2 = conservation_rhs_spectral(grid, axpy(u, 0.5 * dt, k1), options);
        const SpectralField k3 = conservation_rhs_spectral(grid, axpy(u, 0.5 * dt, k2), options);
        const SpectralField k4 = conservation_rhs_spectral(grid, axpy(u, dt, k3), options);
        for (std::size_t i = 0; i < u.size(); ++i) {
            u.raw()[i] += dt / 6.0 * (k1.raw()[i] + 2.0 * k2.raw()[i] + 2.0 * k3.raw()[i] + k4.raw()[i]);
        }
        check_finite(u, "spectral conservation flow", step);
    }
    return u;
}

Field reference_solve_periodic(const PeriodicGrid& grid, const Field& u0, double nu, double final_time,
                               double dt, const ReferenceOptions& options)
{
    if (!(final_time > 0.0) || !(dt > 0.0) || dt > final_time) {
        throw InputError("reference solve needs 0 < dt <= T");
    }
    const auto steps = static_cast<long>(std::ceil(final_time / dt - 1e-9));
    const double step = final_time / static_cast<double>(steps);

    const std::size_t n = grid.size();
    std::vector<complex> half(n), full(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = grid.wavenumber(i);
        half[i] = std::exp(-nu * k * k * step / 2.0);
        full[i] = half[i] * half[i];
    }

    auto nonlinear = [&](const SpectralField& v) {
        if (!options.nonlinear) return SpectralField(n);
        return conservation_rhs_spectral(grid, v, options.spectral);
    };
    auto scale = [&](const std::vector<complex>& e, const SpectralField& v) {
        SpectralField out(n);
        for (std::size_t i = 0; i < n; ++i) out.raw()[i] = e[i] * v.raw()[i];
        return out;
    };

    SpectralField v = forward_dft(grid, u0);
    for (long s = 1; s <= steps; ++s) {
        const SpectralField a = nonlinear(v);
        const SpectralField b = nonlinear(scale(half, axpy(v, step / 2.0, a)));
        const SpectralField c = nonlinear(axpy(scale(half, v), step / 2.0, b));
        const SpectralField d = nonlinear(axpy(scale(full, v), step, scale(half, c)));
        for (std::size_t i = 0; i < n; ++i) {
            v.raw()[i] = full[i] * v.raw()[i] +
                         step / 6.0 *
                             (full[i] * a.raw()[i] + 2.0 * half[i] * (b.raw()[i] + c.raw()[i]) + d.raw()[i]);
        }
        check_finite(v, "periodic reference solve", static_cast<int>(s));
    }
    Field out = inverse_dft(grid, v, final_time);
    if (u0.is_real()) {
        for (auto& z : out.values) z = z.real();
    }
    return out;
}

} // namespace opsplit
