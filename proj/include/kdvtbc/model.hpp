#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace kdvtbc {

/// Physical constants of  d_t(u - alpha u_xx) + c u_x + eps u_xxx = 0.
struct ModelParams {
    double c = 0.0;
    double alpha = 0.0;
    double eps = 1e-3;

    /// Throws ParameterError naming the offending field.
    void validate() const;
    bool operator==(const ModelParams&) const = default;
};

/// Uniform space-time grid. Construct through Grid::make so the invariants hold.
struct Grid {
    double x_left = 0.0;
    double x_right = 1.0;
    double dx = 0.0;
    double dt = 0.0;
    int J = 0;
    int N = 0;

    /// J is (x_right - x_left)/dx rounded; a mismatch above 1e-12 relative is rejected.
    static Grid make(double x_left, double x_right, double dx, double dt, int N);

    double x(int j) const { return x_left + j * dx; }
    double t(int n) const { return n * dt; }
};

struct SchemeRatios {
    double lambda_H = 0.0;
    double lambda_D = 0.0;
    double lambda_B = 0.0;
    double a = 0.0;
    double mu = 0.0;

    /// Stencil constants of the interior rows.
    double c_minus() const { return 2.0 - a - mu; }
    double c_zero() const { return 4.0 / lambda_D + 2.0 * mu; }
    double c_plus() const { return a - 2.0 - mu; }
};

SchemeRatios derive_ratios(const ModelParams& params, const Grid& grid);

/// Grid function on indices -2..J+2 stored contiguously (length J+5).
class Field {
public:
    Field() = default;
    explicit Field(int J) : J_(J), v_(static_cast<std::size_t>(J) + 5, 0.0) {}

    int J() const { return J_; }
    std::size_t size() const { return v_.size(); }

    double& operator[](int j) { return v_[static_cast<std::size_t>(j + 2)]; }
    double operator[](int j) const { return v_[static_cast<std::size_t>(j + 2)]; }

    std::span<double> raw() { return v_; }
    std::span<const double> raw() const { return v_; }
    /// Nodes 0..J.
    std::span<const double> interior() const { return std::span<const double>(v_).subspan(2, static_cast<std::size_t>(J_) + 1); }

    double max_abs() const;

private:
    int J_ = 0;
    std::vector<double> v_;
};

using Profile = std::function<double(double)>;

enum class InitialKind { gaussian, wavepacket, custom };

InitialKind parse_initial_kind(std::string_view name);
std::string_view to_string(InitialKind kind);

/// exp(-400 (x - 1/2)^2), optionally modulated by sin(20 pi x).
Profile builtin_profile(InitialKind kind);

/// Samples u0 at interior nodes with zero ghosts. The profile must be below
/// 1e-12 in magnitude at both endpoints and on a band beyond them.
Field sample_initial(const Profile& u0, const Grid& grid);
Field sample_initial(InitialKind kind, const Grid& grid);

} // namespace kdvtbc
