#pragma once

// Weierstrass sigma and zeta functions for a general lattice
// 2*omega1*Z + 2*omega2*Z.
//
// Evaluation goes through the first Jacobi theta function with nome
// q = exp(i*pi*tau), tau = omega2/omega1 (DLMF 23.6.9 and 23.6.13):
//
//   sigma(z) = (2 omega1 / pi) exp(eta1 z^2 / (2 omega1)) theta1(v) / theta1'(0),
//   zeta(z)  = eta1 z / omega1 + (pi / (2 omega1)) theta1'(v) / theta1(v),
//
// with v = pi z / (2 omega1). Arguments are first reduced into the cell
// {2 omega1 s + 2 omega2 t : |s|, |t| <= 1/2} and the quasi-periodicity
//
//   sigma(z + 2W) = (-1)^{m+n+mn} exp(2 (m eta1 + n eta2)(z + W)) sigma(z),
//   W = m omega1 + n omega2,
//
// restores the original argument, accumulated in log space.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace zeropack
{

/// Half-periods of the lattice 2*omega1*Z + 2*omega2*Z.
struct Lattice
{
    Complex omega1;
    Complex omega2;
};

class WeierstrassContext
{
public:
    WeierstrassContext(Complex omega1, Complex omega2) : m_lattice{omega1, omega2}
    {
        if (!is_finite(omega1) || !is_finite(omega2) || omega1 == Complex(0.0)) {
            throw std::invalid_argument("degenerate lattice: non-finite or zero half-period");
        }
        m_tau = omega2 / omega1;
        if (!(m_tau.imag() > 0.0)) {
            throw std::invalid_argument("degenerate lattice: Im(omega2/omega1) must be positive");
        }
        const Complex i_pi_tau = Complex(0.0, pi) * m_tau;
        m_nome = std::exp(i_pi_tau);

        // |a_n| e^{(2n+1)|Im v|} <= exp(-pi Im(tau) (n^2 - 1/4)) on the reduced cell.
        const double decay = pi * m_tau.imag();
        int terms = 1;
        while (decay * (terms * terms - 0.25) < 45.0) {
            ++terms;
            if (terms > 200) {
                throw numeric_error("theta series: nome too close to the unit circle");
            }
        }
        terms += 2;
        m_theta_coeffs.resize(static_cast<std::size_t>(terms));
        Complex derivative0(0.0);
        Complex third0(0.0);
        for (int n = 0; n < terms; ++n) {
            const double k = n + 0.5;
            const Complex a = (n % 2 == 0 ? 1.0 : -1.0) * std::exp(i_pi_tau * (k * k));
            m_theta_coeffs[static_cast<std::size_t>(n)] = a;
            const double odd = 2.0 * n + 1.0;
            derivative0 += a * odd;
            third0 -= a * (odd * odd * odd);
        }
        m_theta1_prime0 = 2.0 * derivative0;
        const Complex theta1_third0 = 2.0 * third0;

        // eta1 = zeta(omega1) from the log-derivative of theta1 at the origin.
        m_eta1 = -(pi * pi / (12.0 * omega1)) * theta1_third0 / m_theta1_prime0;
        // eta2 = zeta(omega2) evaluated directly; omega2 lies on the cell boundary.
        m_eta2 = zeta_in_cell(omega2);

        if (!is_finite(m_eta1) || !is_finite(m_eta2)) {
            throw numeric_error("Weierstrass context: non-finite quasi-period constants");
        }
        if (legendre_residual() > 1e-10) {
            throw numeric_error("Weierstrass context: Legendre relation violated");
        }
    }

    const Lattice &lattice() const { return m_lattice; }
    Complex omega1() const { return m_lattice.omega1; }
    Complex omega2() const { return m_lattice.omega2; }
    Complex tau() const { return m_tau; }
    Complex nome() const { return m_nome; }
    Complex eta1() const { return m_eta1; }
    Complex eta2() const { return m_eta2; }
    std::size_t theta_terms() const { return m_theta_coeffs.size(); }

    /// |eta1 omega2 - eta2 omega1 - i pi/2|.
    double legendre_residual() const
    {
        return std::abs(m_eta1 * m_lattice.omega2 - m_eta2 * m_lattice.omega1 -
                        Complex(0.0, pi / 2.0));
    }

    Complex sigma(Complex z) const
    {
        const Reduction r = reduce(z);
        const Complex base = sigma_in_cell(r.z0);
        if (r.m == 0 && r.n == 0) {
            return base;
        }
        const Complex shift = quasi_exponent(r);
        const double sign = parity(r) ? -1.0 : 1.0;
        return sign * base * std::exp(shift);
    }

    /// log|sigma(z)|; -infinity at lattice points. Stays finite far from the
    /// origin where sigma itself overflows.
    double log_abs_sigma(Complex z) const
    {
        const Reduction r = reduce(z);
        const double base = std::abs(sigma_in_cell(r.z0));
        if (base == 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        return std::log(base) + quasi_exponent(r).real();
    }

    /// Weierstrass zeta = sigma'/sigma. Throws numeric_error at lattice points.
    Complex zeta(Complex z) const
    {
        const Reduction r = reduce(z);
        if (std::abs(r.z0) <= 1e-14 * std::abs(m_lattice.omega1)) {
            throw numeric_error("weierstrass zeta: pole at a lattice point");
        }
        return zeta_in_cell(r.z0) + 2.0 * (static_cast<double>(r.m) * m_eta1 +
                                           static_cast<double>(r.n) * m_eta2);
    }

    /// |sigma(z + 2 omega_j) + sigma(z) exp(2 (z + omega_j) eta_j)| / (1 + |sigma(z + 2 omega_j)|).
    double quasi_period_residual(Complex z, int j) const
    {
        detail::require(j == 1 || j == 2, "quasi_period_residual: j must be 1 or 2");
        const Complex w = j == 1 ? m_lattice.omega1 : m_lattice.omega2;
        const Complex eta = j == 1 ? m_eta1 : m_eta2;
        const Complex shifted = sigma(z + 2.0 * w);
        const Complex predicted = -sigma(z) * std::exp(2.0 * (z + w) * eta);
        return std::abs(shifted - predicted) / (1.0 + std::abs(shifted));
    }

private:
    struct Reduction
    {
        Complex z0;
        long long m;
        long long n;
    };

    Reduction reduce(Complex z) const
    {
        // Solve z = 2 omega1 s + 2 omega2 t for real s, t.
        const Complex p1 = 2.0 * m_lattice.omega1;
        const Complex p2 = 2.0 * m_lattice.omega2;
        const double det = p1.real() * p2.imag() - p1.imag() * p2.real();
        const double s = (z.real() * p2.imag() - z.imag() * p2.real()) / det;
        const double t = (p1.real() * z.imag() - p1.imag() * z.real()) / det;
        const double ms = std::round(s);
        const double nt = std::round(t);
        if (std::abs(ms) > 1e15 || std::abs(nt) > 1e15) {
            throw numeric_error("weierstrass: argument too large for reduction");
        }
        return {z - ms * p1 - nt * p2, static_cast<long long>(ms), static_cast<long long>(nt)};
    }

    Complex quasi_exponent(const Reduction &r) const
    {
        const double m = static_cast<double>(r.m);
        const double n = static_cast<double>(r.n);
        const Complex w = m * m_lattice.omega1 + n * m_lattice.omega2;
        return 2.0 * (m * m_eta1 + n * m_eta2) * (r.z0 + w);
    }

    static bool parity(const Reduction &r)
    {
        // (-1)^{m+n+mn} is -1 unless both m and n are even.
        return (r.m % 2 != 0) || (r.n % 2 != 0);
    }

    // theta1(v) and theta1'(v) by the Chebyshev recurrence for sin/cos((2n+1) v).
    void theta1(Complex v, Complex &value, Complex &derivative) const
    {
        const Complex s1 = std::sin(v);
        const Complex c1 = std::cos(v);
        const Complex two_cos2v = 2.0 * std::cos(2.0 * v);
        Complex s_prev = -s1; // sin(-v)
        Complex c_prev = c1;  // cos(-v)
        Complex s_cur = s1;
        Complex c_cur = c1;
        Complex th(0.0);
        Complex dth(0.0);
        for (std::size_t n = 0; n < m_theta_coeffs.size(); ++n) {
            const double odd = 2.0 * static_cast<double>(n) + 1.0;
            th += m_theta_coeffs[n] * s_cur;
            dth += m_theta_coeffs[n] * odd * c_cur;
            const Complex s_next = two_cos2v * s_cur - s_prev;
            const Complex c_next = two_cos2v * c_cur - c_prev;
            s_prev = s_cur;
            c_prev = c_cur;
            s_cur = s_next;
            c_cur = c_next;
        }
        value = 2.0 * th;
        derivative = 2.0 * dth;
    }

    Complex sigma_in_cell(Complex z0) const
    {
        if (z0 == Complex(0.0)) {
            return Complex(0.0);
        }
        const Complex scale = pi / (2.0 * m_lattice.omega1);
        Complex th;
        Complex dth;
        theta1(scale * z0, th, dth);
        return std::exp(m_eta1 * z0 * z0 / (2.0 * m_lattice.omega1)) * th / (scale * m_theta1_prime0);
    }

    Complex zeta_in_cell(Complex z0) const
    {
        const Complex scale = pi / (2.0 * m_lattice.omega1);
        Complex th;
        Complex dth;
        theta1(scale * z0, th, dth);
        if (th == Complex(0.0)) {
            throw numeric_error("weierstrass zeta: pole at a lattice point");
        }
        return m_eta1 * z0 / m_lattice.omega1 + scale * dth / th;
    }

    Lattice m_lattice;
    Complex m_tau;
    Complex m_nome;
    Complex m_eta1;
    Complex m_eta2;
    Complex m_theta1_prime0;
    std::vector<Complex> m_theta_coeffs;
};

inline WeierstrassContext make_context(Complex omega1, Complex omega2)
{
    return WeierstrassContext(omega1, omega2);
}

} // namespace zeropack
