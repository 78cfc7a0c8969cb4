#include "wwl/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace wwl {

namespace {
// FFTW's planner is not reentrant; executing distinct arrays through one plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Grid::Grid(double Lx, double Ly, int Nx, int Ny, double eps, double sigma)
    : nx_(Nx), ny_(Ny), lx_(Lx), ly_(Ly), eps_(eps), sigma_(sigma) {
    if (Nx < 16 || Ny < 16 || Nx % 2 != 0 || Ny % 2 != 0)
        throw ConfigError("Grid: Nx, Ny must be even and >= 16");
    if (!(Lx > 0.0) || !(Ly > 0.0)) throw ConfigError("Grid: Lx, Ly must be positive");
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("Grid: eps must lie in (0, 1)");
    if (!(sigma > 1.0 / 3.0)) throw ConfigError("Grid: sigma must exceed 1/3");

    m1_.resize(Nx);
    m2_.resize(Ny);
    for (int i = 0; i < Nx; ++i) {
        int k = i < Nx / 2 ? i : i - Nx;
        m1_[i] = M_PI / Lx * k;
    }
    for (int j = 0; j < Ny; ++j) {
        int k = j < Ny / 2 ? j : j - Ny;
        m2_[j] = M_PI / Ly * k;
    }

    keep_.assign(size(), 1);
    const int cx = Nx / 3, cy = Ny / 3;
    for (int i = 0; i < Nx; ++i) {
        int ki = i < Nx / 2 ? i : Nx - i;
        for (int j = 0; j < Ny; ++j) {
            int kj = j < Ny / 2 ? j : Ny - j;
            if (ki >= cx || kj >= cy) keep_[idx(i, j)] = 0;
        }
    }

    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* buf = fftw_alloc_complex(size());
    plan_fwd_ = fftw_plan_dft_2d(Nx, Ny, buf, buf, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_dft_2d(Nx, Ny, buf, buf, FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!plan_fwd_ || !plan_bwd_) throw NumericError("Grid: FFTW plan creation failed");
}

Grid::~Grid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

std::shared_ptr<const Grid> Grid::create(double Lx, double Ly, int Nx, int Ny,
                                         double eps, double sigma) {
    return std::shared_ptr<const Grid>(new Grid(Lx, Ly, Nx, Ny, eps, sigma));
}

double Grid::kmag(int i, int j) const {
    const double k1 = eps_ * m1_[i];
    const double k2 = eps_ * eps_ * m2_[j];
    return std::hypot(k1, k2);
}

void Grid::fft_forward(cplx* data) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

void Grid::fft_backward(cplx* data) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                     reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

bool Grid::same_box(const Grid& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && lx_ == o.lx_ && ly_ == o.ly_ &&
           eps_ == o.eps_ && sigma_ == o.sigma_;
}

}  // namespace wwl
