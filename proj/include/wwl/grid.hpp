#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "wwl/errors.hpp"

namespace wwl {

using cplx = std::complex<double>;

/// Periodic box in the scaled coordinates (x, y) = (eps*x1, eps^2*x2):
/// x in [-Lx, Lx), y in [-Ly, Ly), uniform Nx x Ny sampling with x = 0 and
/// y = 0 on grid points. Owns the wavenumber ladders, the 2/3-rule dealias
/// mask and cached FFT plans. Immutable after creation; share by pointer.
class Grid : public std::enable_shared_from_this<Grid> {
  public:
    static std::shared_ptr<const Grid> create(double Lx, double Ly, int Nx, int Ny,
                                              double eps, double sigma);
    ~Grid();

    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }
    double eps() const { return eps_; }
    double sigma() const { return sigma_; }
    double dx() const { return 2.0 * lx_ / nx_; }
    double dy() const { return 2.0 * ly_ / ny_; }
    double cell_area() const { return dx() * dy(); }
    double box_area() const { return 4.0 * lx_ * ly_; }

    /// Collocation coordinates, centered so that x(Nx - i) == -x(i) exactly.
    double x(int i) const { return (i - nx_ / 2) * dx(); }
    double y(int j) const { return (j - ny_ / 2) * dy(); }

    /// Scaled wavenumber ladders m1(i) in (pi/Lx)*{-Nx/2..Nx/2-1} (FFT order).
    double m1(int i) const { return m1_[i]; }
    double m2(int j) const { return m2_[j]; }
    const std::vector<double>& m1() const { return m1_; }
    const std::vector<double>& m2() const { return m2_; }

    /// Unscaled wavenumber k = (eps*m1, eps^2*m2) magnitude at mode (i, j).
    double kmag(int i, int j) const;

    /// Row-major mode/sample index; x is the slow axis.
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * ny_ + j; }

    /// Reflection index for x -> -x (and y -> -y): exact on this grid.
    int reflect_x(int i) const { return i == 0 ? 0 : nx_ - i; }
    int reflect_y(int j) const { return j == 0 ? 0 : ny_ - j; }

    bool dealias_keep(int i, int j) const { return keep_[idx(i, j)] != 0; }
    const std::vector<std::uint8_t>& dealias_mask() const { return keep_; }

    /// Unnormalized c2c transforms (layout as idx()); sign -1 forward.
    void fft_forward(cplx* data) const;
    void fft_backward(cplx* data) const;

    bool same_box(const Grid& o) const;

  private:
    Grid(double Lx, double Ly, int Nx, int Ny, double eps, double sigma);

    int nx_, ny_;
    double lx_, ly_, eps_, sigma_;
    std::vector<double> m1_, m2_;
    std::vector<std::uint8_t> keep_;
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace wwl
