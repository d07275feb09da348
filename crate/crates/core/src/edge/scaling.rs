//! Exact β = 2 edge scaling functions: the DOS seen from the largest
//! eigenvalue ρ̃_edge(r̃), the first-gap density p̃_typ(r̃), and their
//! versions at fixed rescaled position x of λ_max.
//!
//! Gap and DOS share one integrand: the gap evaluates it at spectral
//! parameter −r̃. The same holds for the conditional versions, where the
//! gap is additionally shifted to the position x − r̃ of the second
//! eigenvalue.

use std::f64::consts::PI;

use super::airy::airy_product_tail;
use super::painleve::EdgeTable;
use super::schrodinger::{boundary_amplitude, solve_f_tilde, FTildeSolution};
use crate::quadrature::simpson;
use crate::{Error, Result};

/// 2^{1/3} / π
fn prefactor() -> f64 {
    2f64.powf(1.0 / 3.0) / PI
}

/// (2^{1/3}/π) ∫ [f̃(s,x)² − (∫_x^∞ q f̃(s,·))²] F₂(x) dx
fn edge_integral(solution: &FTildeSolution, table: &EdgeTable) -> f64 {
    let integrand: Vec<f64> = solution
        .values
        .iter()
        .zip(&solution.q_overlap)
        .zip(&table.f2)
        .map(|((f, j), f2)| (f * f - j * j) * f2)
        .collect();
    let c = boundary_amplitude();
    // beyond the grid: F₂ = 1, the overlap vanishes, f̃ = c Ai(x − s)
    let tail = c * c * airy_product_tail(table.x_max() - solution.r_tilde, 0.0);
    prefactor() * (simpson(&integrand, table.step) + tail)
}

fn check_nonnegative(r_tilde: f64) -> Result<()> {
    if !(r_tilde >= 0.0 && r_tilde.is_finite()) {
        return Err(Error::Domain(format!("r̃ = {r_tilde} must be finite and >= 0")));
    }
    Ok(())
}

/// ρ̃_edge(r̃) for β = 2.
pub fn rho_edge_exact(r_tilde: f64, table: &EdgeTable) -> Result<f64> {
    check_nonnegative(r_tilde)?;
    let s = solve_f_tilde(r_tilde, table)?;
    Ok(edge_integral(&s, table).max(0.0))
}

/// p̃_typ(r̃) for β = 2: the DOS integrand at spectral parameter −r̃.
pub fn p_typ_exact(r_tilde: f64, table: &EdgeTable) -> Result<f64> {
    check_nonnegative(r_tilde)?;
    let s = solve_f_tilde(-r_tilde, table)?;
    Ok(edge_integral(&s, table).max(0.0))
}

/// Signed integral for either sign of the spectral parameter; used to test
/// the reflection property of the shared integrand.
pub fn edge_integral_signed(spectral: f64, table: &EdgeTable) -> Result<f64> {
    let s = solve_f_tilde(spectral, table)?;
    Ok(edge_integral(&s, table))
}

/// Joint kernel at spectral parameter `s` and position `y`:
///
/// ```text
/// (2^{1/3}/π) F₂ [ R ( (s + R/q²) f̃² − 2 (q′/q) f̃ g̃ + (1 + q²/s) g̃² ) − (q²/s²) g̃² ]
/// ```
///
/// written with `g̃ = −s J / q`, `J = ∫_y^∞ q f̃`, so that it stays finite
/// as `s → 0`.
pub fn joint_kernel(solution: &FTildeSolution, y: f64, table: &EdgeTable) -> Result<f64> {
    let s = solution.r_tilde;
    let q = table.q_at(y)?;
    let qp = table.q_prime_at(y)?;
    let r = table.r_at(y)?;
    let f2 = table.f2_at(y)?;
    let f = solution.value_at(y)?;
    let j = solution.q_overlap_at(y)?;
    let q2 = q * q;
    let bracket = r * s * f * f
        + (r * r * f * f - q2 * j * j) / q2
        + 2.0 * r * s * qp * f * j / q2
        + r * s * s * j * j / q2
        + r * s * j * j;
    Ok(prefactor() * f2 * bracket)
}

/// Conditional DOS ρ̃_edge(r̃ | x) at fixed rescaled λ_max = x.
pub fn rho_edge_conditional(r_tilde: f64, x: f64, table: &EdgeTable) -> Result<f64> {
    check_nonnegative(r_tilde)?;
    let density = table.f2_density_at(x)?;
    let s = solve_f_tilde(r_tilde, table)?;
    Ok((joint_kernel(&s, x, table)? / density).max(0.0))
}

/// Conditional first-gap density p̃_typ(r̃ | x) at fixed rescaled λ_max = x.
pub fn p_typ_conditional(r_tilde: f64, x: f64, table: &EdgeTable) -> Result<f64> {
    check_nonnegative(r_tilde)?;
    let density = table.f2_density_at(x)?;
    let shifted = x - r_tilde;
    table.q_at(shifted)?;
    let s = solve_f_tilde(-r_tilde, table)?;
    Ok((joint_kernel(&s, shifted, table)? / density).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;
    use std::sync::OnceLock;

    fn table() -> &'static EdgeTable {
        static T: OnceLock<EdgeTable> = OnceLock::new();
        T.get_or_init(|| EdgeTable::build_default().unwrap())
    }

    #[test]
    fn small_argument_values() {
        let t = table();
        assert!(rho_edge_exact(0.0, t).unwrap().abs() < 1e-7);
        assert!(p_typ_exact(0.0, t).unwrap().abs() < 1e-7);
        let rho = rho_edge_exact(0.1, t).unwrap();
        assert!((rho / 0.005 - 1.0).abs() < 0.05, "{rho}");
        let gap = p_typ_exact(0.2, t).unwrap();
        assert!((gap / 0.04 / 0.5 - 1.0).abs() < 0.02, "{gap}");
        // quartic coefficient, stable across small r̃
        for r in [0.02, 0.05] {
            let c4 = (p_typ_exact(r, t).unwrap() / (r * r) - 0.5) / (r * r);
            assert!((c4 + 0.1968).abs() < 1e-3, "{c4}");
        }
    }

    #[test]
    fn large_argument_approach_to_square_root() {
        let t = table();
        let ratios: Vec<f64> = [2.0f64, 3.0, 4.0, 5.0, 6.0]
            .iter()
            .map(|&r| rho_edge_exact(r, t).unwrap() / (r.sqrt() / PI))
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
        assert!(ratios.iter().all(|&v| v > 1.0));
        // the shift r̃ → r̃ + |mean TW₂| absorbs the slow approach
        for r in [4.0f64, 5.0, 6.0] {
            let v = rho_edge_exact(r, t).unwrap() / ((r + 1.771).sqrt() / PI);
            assert!((v - 1.0).abs() < 0.015, "r={r}: {v}");
        }
    }

    #[test]
    fn reflection_of_shared_integrand() {
        let t = table();
        for r in [0.3, 1.0, 2.5] {
            assert_eq!(edge_integral_signed(-r, t).unwrap(), p_typ_exact(r, t).unwrap());
            assert_eq!(edge_integral_signed(r, t).unwrap(), rho_edge_exact(r, t).unwrap());
        }
    }

    #[test]
    fn gap_density_normalised() {
        let t = table();
        let rule = GaussLegendre::new(20);
        let mass = rule.integrate_composite(0.0, 6.0, 24, |r| p_typ_exact(r, t).unwrap());
        // the remaining mass above 6 is ~3e-5
        assert!((mass - 1.0).abs() < 1e-3, "{mass}");
    }

    #[test]
    fn grid_and_truncation_stability() {
        let t = table();
        let fine = EdgeTable::build(-12.0, 10.0, 1.0 / 1024.0).unwrap();
        let wide = EdgeTable::build(-12.0, 12.0, 1.0 / 512.0).unwrap();
        for r in [0.5, 2.0, 4.0] {
            let base = rho_edge_exact(r, t).unwrap();
            assert!((rho_edge_exact(r, &fine).unwrap() - base).abs() < 1e-4);
            assert!((rho_edge_exact(r, &wide).unwrap() - base).abs() < 1e-5);
            let gap = p_typ_exact(r, t).unwrap();
            assert!((p_typ_exact(r, &fine).unwrap() - gap).abs() < 1e-4);
            assert!((p_typ_exact(r, &wide).unwrap() - gap).abs() < 1e-5);
        }
    }

    #[test]
    fn conditional_dos_averages_to_unconditional() {
        let t = table();
        let rule = GaussLegendre::new(20);
        for r in [0.5, 1.0, 2.0] {
            let s = solve_f_tilde(r, t).unwrap();
            let joint = rule.integrate_composite(-9.0, 5.0, 28, |x| joint_kernel(&s, x, t).unwrap());
            let exact = rho_edge_exact(r, t).unwrap();
            assert!((joint / exact - 1.0).abs() < 0.01, "r={r}: {joint} vs {exact}");
            // the conditional form, weighted back by F₂′
            let weighted = rule.integrate_composite(-9.0, 5.0, 28, |x| {
                rho_edge_conditional(r, x, t).unwrap() * t.f2_density_at(x).unwrap()
            });
            assert!((weighted / exact - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn conditional_gap_normalised() {
        let t = table();
        let rule = GaussLegendre::new(20);
        for x in [-2.0, 0.0] {
            let mass = rule.integrate_composite(0.0, 6.0, 24, |r| p_typ_conditional(r, x, t).unwrap());
            assert!((mass - 1.0).abs() < 2e-3, "x={x}: {mass}");
        }
    }

    #[test]
    fn conditional_vanishes_at_origin() {
        let t = table();
        for x in [-2.0, 0.0, 1.0] {
            assert!(rho_edge_conditional(0.0, x, t).unwrap() < 1e-6);
            assert!(p_typ_conditional(0.0, x, t).unwrap() < 1e-6);
        }
    }

    #[test]
    fn negative_argument_rejected() {
        assert!(matches!(rho_edge_exact(-0.1, table()), Err(Error::Domain(_))));
        assert!(matches!(p_typ_conditional(f64::NAN, 0.0, table()), Err(Error::Domain(_))));
    }
}
